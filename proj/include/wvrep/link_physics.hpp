#pragma once

#include <cmath>
#include <stdexcept>

#include "model_params.hpp"

namespace wvrep {

/// Fiber transmission 10^(-alpha z / 10) over z km.
inline double transmission(double z_km, double alpha_db_per_km) {
    if (!(z_km >= 0.0)) throw std::invalid_argument("transmission: negative length");
    if (!(alpha_db_per_km >= 0.0)) throw std::invalid_argument("transmission: negative attenuation");
    return std::pow(10.0, -alpha_db_per_km * z_km / 10.0);
}

/// Single-mode-pair heralding probability (chi * eta_det * eta_t(L0/2))^2.
inline double p_single(double chi, double eta_det, double eta_t_half) {
    const double a = chi * eta_det * eta_t_half;
    return a * a;
}

/// Probability that at least one of M (parallel) or M^2 (multiplexed) mode pairs heralds.
inline double p_eng(double p1, int modes, bool multiplexed) {
    if (p1 <= 0.0) return 0.0;
    if (p1 >= 1.0) return 1.0;
    const double m = static_cast<double>(modes);
    const double trials = multiplexed ? m * m : m;
    if (trials == 1.0) return p1;
    // 1 - (1-p1)^n without cancellation for p1 ~ 1e-8, n ~ 3e7
    return -std::expm1(trials * std::log1p(-p1));
}

/// Write-read cross-correlation in the low photon-number limit: 1 + 1/chi_eff.
inline double g2_from_noise(double chi_eff) {
    if (!(chi_eff > 0.0)) throw std::invalid_argument("g2_from_noise: chi_eff must be > 0");
    return 1.0 + 1.0 / chi_eff;
}

inline double visibility_from_g2(double g2) {
    if (!(g2 >= 1.0)) throw std::invalid_argument("visibility_from_g2: g2 must be >= 1");
    if (std::isinf(g2)) return 1.0;
    return (g2 - 1.0) / (g2 + 1.0);
}

/// Visibility after storing for t_us in a memory of lifetime tau_us.
///
/// The readout efficiency decays as exp(-(t/tau)^2) (gaussian) or exp(-t/tau)
/// (exponential), which scales g2-1 and gives V = 1 / (1 + 2 chi_eff0 exp(x)).
inline double visibility_at(double t_us, double chi_eff0, double tau_us, Decoherence kind) {
    if (!(t_us >= 0.0)) throw std::invalid_argument("visibility_at: negative storage time");
    if (!(chi_eff0 > 0.0)) throw std::invalid_argument("visibility_at: chi_eff must be > 0");
    const double r = t_us / tau_us;
    const double x = kind == Decoherence::gaussian ? r * r : r;
    return 1.0 / (1.0 + 2.0 * chi_eff0 * std::exp(x));
}

struct LinkBudget {
    double l0_km = 0.0;
    double eta_t_half = 1.0;
    double p1 = 0.0;
    double p_g = 0.0;
};

/// Elementary-link quantities for a platform at spacing L0. The heralding
/// detection at the midway station is always the multimode efficiency eta_m.
inline LinkBudget link_budget(const PlatformParams& platform, double l0_km,
                              const PhysicalConstants& constants) {
    LinkBudget b;
    b.l0_km = l0_km;
    b.eta_t_half = transmission(l0_km / 2.0, constants.attenuation_db_per_km);
    b.p1 = p_single(platform.chi, platform.eta_m, b.eta_t_half);
    b.p_g = p_eng(b.p1, platform.modes, platform.multiplexed);
    return b;
}

}  // namespace wvrep
