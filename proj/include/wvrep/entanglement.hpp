#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "link_physics.hpp"
#include "mode_space.hpp"

namespace wvrep {

/// Werner state (1-V)/4 I + V |psi><psi|, parameterised by its visibility.
struct WernerState {
    double visibility = 1.0;

    explicit WernerState(double v) : visibility(v) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("WernerState: V outside [0,1]");
    }

    bool entangled() const noexcept { return visibility > 1.0 / 3.0; }
};

inline double concurrence(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("concurrence: V outside [0,1]");
    return std::max(0.0, (3.0 * v - 1.0) / 2.0);
}

/// Binary entropy in bits, with 0 log 0 = 0.
inline double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -(x * std::log(x) + (1.0 - x) * std::log1p(-x)) / std::numbers::ln2;
}

/// Entanglement of formation from the concurrence, E_F = h((1 + sqrt(1 - C^2)) / 2).
inline double ef_from_concurrence(double c) {
    if (c <= 0.0) return 0.0;
    if (c >= 1.0) return 1.0;
    // smaller root (1 - sqrt(1-C^2))/2, rewritten to keep precision as C -> 0
    const double root = std::sqrt((1.0 - c) * (1.0 + c));
    const double q = c * c / (2.0 * (1.0 + root));
    return -(q * std::log(q) + (1.0 - q) * std::log1p(-q)) / std::numbers::ln2;
}

inline double entanglement_of_formation(double v) { return ef_from_concurrence(concurrence(v)); }

/// E_F of a wavevector mode K after storage t (gaussian lifetime gamma/K).
inline double ef_of_mode(double k_per_mm, double t_us, double chi_eff0, double gamma_us_mm) {
    return entanglement_of_formation(
        visibility_at(t_us, chi_eff0, tau_of_k(k_per_mm, gamma_us_mm), Decoherence::gaussian));
}

/// Average E_F delivered by a platform after storage t. Mode-dependent platforms
/// average over the spectrum (zero-E_F modes included); fixed-lifetime platforms
/// have a single value. With `links > 1` the per-mode visibility is raised to
/// that power before E_F is taken.
inline double mean_ef(const PlatformParams& platform, const ModeSpace& space, double chi_eff0,
                      double t_us, int links = 1) {
    auto ef_at = [&](double tau) {
        double v = visibility_at(t_us, chi_eff0, tau, platform.decoherence);
        if (links > 1) v = std::pow(v, links);
        return entanglement_of_formation(v);
    };
    if (!platform.mode_dependent_lifetime()) return ef_at(*platform.fixed_tau_us);
    return space.weighted_average([&](double k) { return ef_at(space.tau(k)); });
}

}  // namespace wvrep
