#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "entanglement.hpp"
#include "link_physics.hpp"
#include "mode_space.hpp"
#include "model_params.hpp"

namespace wvrep {

struct ConnectionStage {
    double p_e = 0.0;  // further connections
    double p_f = 0.0;  // first-stage connection, post-selected
};

inline ConnectionStage p_enc_stage(double eta_r, double eta_det) {
    const double a = eta_r * eta_det;
    const double p_e = a * a / 2.0;
    return {p_e, p_e / 4.0};
}

/// All N-1 links herald in the same round.
inline double p_eng_chain(double p_g, int nodes) {
    if (nodes < 2) throw std::invalid_argument("p_eng_chain: need at least 2 nodes");
    return std::pow(p_g, nodes - 1);
}

inline double p_enc_chain(double p_f, double p_e, double eta_x, int nodes) {
    if (nodes < 2) throw std::invalid_argument("p_enc_chain: need at least 2 nodes");
    const int inner = nodes - 2;
    const int first_stage = (inner + 1) / 2;
    const int further = inner / 2;
    return std::pow(p_f, first_stage) * std::pow(p_e, further) * std::pow(eta_x, nodes);
}

/// Expected number of rounds until every one of `links` independent
/// geometric(p) trials has succeeded, E[max_i J_i].
///
/// Summed as E = sum_{j>=0} P(max > j) until the tail bound links * q^j / p drops
/// below `eps` relative. Below p = 1e-2 the series would need >1e4 terms; there the
/// expansion H_links / (-log(1-p)) + 1/2 is used, which agrees with the series to
/// ~1e-10 relative for links >= 2 (links == 1 is exactly 1/p).
inline double expected_max_rounds(int links, double p, double eps = 1e-12) {
    if (links < 1) throw std::invalid_argument("expected_max_rounds: need at least one link");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("expected_max_rounds: p must lie in (0,1]");
    if (p == 1.0) return 1.0;
    if (links == 1) return 1.0 / p;
    const double n = links;
    const double log_q = std::log1p(-p);
    if (p < 1e-2) {
        double harmonic = 0.0;
        for (int k = links; k >= 1; --k) harmonic += 1.0 / k;
        return harmonic / -log_q + 0.5;
    }
    double sum = 1.0;  // j = 0
    for (long j = 1;; ++j) {
        const double qj = std::exp(static_cast<double>(j) * log_q);
        const double term = -std::expm1(n * std::log1p(-qj));
        sum += term;
        if (n * qj / p < eps * sum) break;
    }
    return sum;
}

/// Waiting-time factor f(N, p_g) = p_g * E[max of geometric(p_g)] over the links
/// (or over N when `exponent` selects nodes).
inline double f_waiting(int nodes, double p_g, WaitingExponent exponent = WaitingExponent::links,
                        double eps = 1e-12) {
    if (nodes < 2) throw std::invalid_argument("f_waiting: need at least 2 nodes");
    if (!(p_g > 0.0)) throw std::invalid_argument("f_waiting: p_g = 0 diverges");
    const int n = exponent == WaitingExponent::links ? nodes - 1 : nodes;
    return p_g * expected_max_rounds(n, p_g, eps);
}

struct ChainPlan {
    Architecture architecture = Architecture::ahierarchical;
    int nodes = 2;
    double l_km = 0.0;
    double l0_km = 0.0;
    double t_r_us = 0.0;
    double p1 = 0.0;
    double p_g = 0.0;
    double p_eng = 0.0;
    double p_enc = 0.0;
    double final_detection = 0.0;
    /// T_r / P_ENG for ahierarchical, the expected waiting time for semihierarchical.
    double generation_time_us = 0.0;
    double storage_time_us = 0.0;
    double t_tot_us = 0.0;
    double mean_ef = 0.0;
    double rate_per_us = 0.0;     // R
    double q_per_us_node = 0.0;   // Q = R / N
};

/// Everything a chain evaluation needs besides the platform itself.
struct ChainContext {
    PhysicalConstants constants;
    ModeSpace space;
    NoiseParams noise;
    ModelOptions model;

    ChainContext(PhysicalConstants c, ModeSpace s, NoiseParams n = {}, ModelOptions m = {})
        : constants(c), space(std::move(s)), noise(n), model(m) {}
};

inline double chain_storage_time_us(Architecture arch, double l_km, double l0_km, double c) {
    return arch == Architecture::ahierarchical ? l0_km / c : (l_km + l0_km) / c;
}

/// Analytic end-to-end model of an N-node chain over L km.
inline ChainPlan chain_time(Architecture arch, const PlatformParams& platform, int nodes, double l_km,
                            const ChainContext& ctx) {
    if (nodes < 2) throw std::invalid_argument("chain_time: need at least 2 nodes");
    if (!(l_km > 0.0)) throw std::invalid_argument("chain_time: L must be > 0");
    const double c = ctx.constants.fiber_speed_km_per_us;

    ChainPlan plan;
    plan.architecture = arch;
    plan.nodes = nodes;
    plan.l_km = l_km;
    plan.l0_km = l_km / (nodes - 1);
    plan.t_r_us = plan.l0_km / c;

    const auto link = link_budget(platform, plan.l0_km, ctx.constants);
    plan.p1 = link.p1;
    plan.p_g = link.p_g;
    plan.p_eng = p_eng_chain(link.p_g, nodes);

    const double eta_det = platform.enc_efficiency();
    const auto stage = p_enc_stage(platform.eta_r, eta_det);
    plan.p_enc = p_enc_chain(stage.p_f, stage.p_e, platform.eta_x, nodes);
    plan.final_detection = eta_det * eta_det * platform.eta_x * platform.eta_x;

    constexpr double inf = std::numeric_limits<double>::infinity();
    if (arch == Architecture::ahierarchical) {
        plan.generation_time_us = plan.p_eng > 0.0 ? plan.t_r_us / plan.p_eng : inf;
    } else {
        plan.generation_time_us =
            link.p_g > 0.0 ? plan.t_r_us * f_waiting(nodes, link.p_g, ctx.model.waiting_exponent) / link.p_g +
                                 l_km / c
                           : inf;
    }
    const double success = plan.p_enc * plan.final_detection;
    plan.t_tot_us = success > 0.0 ? plan.generation_time_us / success : inf;

    plan.storage_time_us = chain_storage_time_us(arch, l_km, plan.l0_km, c);
    const int links = ctx.model.ef_composition == EfComposition::link_product ? nodes - 1 : 1;
    plan.mean_ef = mean_ef(platform, ctx.space, ctx.noise.chi_eff(platform), plan.storage_time_us, links);

    plan.rate_per_us = plan.mean_ef > 0.0 && std::isfinite(plan.t_tot_us) ? plan.mean_ef / plan.t_tot_us : 0.0;
    plan.q_per_us_node = plan.rate_per_us / nodes;
    return plan;
}

struct RangeLimits {
    double tau_us = 0.0;
    double k_ref_per_mm = 0.0;
    double l0_max_ahier_km = 0.0;
    double l_max_semihier_km = 0.0;
};

/// Maximal reach before every stored state falls to V <= 1/3, as closed forms:
/// L0_max = c tau sqrt(ln(1/chi)) and L_max = (N-1)/N * tau/2 * c * ln(1/chi).
/// An empty `nodes` takes the N -> infinity limit.
inline RangeLimits range_limits(double tau_us, double chi, double c_km_per_us,
                                std::optional<int> nodes = std::nullopt) {
    if (!(chi > 0.0 && chi <= 1.0)) throw std::invalid_argument("range_limits: chi must lie in (0,1]");
    if (nodes && *nodes < 2) throw std::invalid_argument("range_limits: need at least 2 nodes");
    const double log_inv = -std::log(chi);
    const double node_factor = nodes ? static_cast<double>(*nodes - 1) / *nodes : 1.0;
    RangeLimits r;
    r.tau_us = tau_us;
    r.l0_max_ahier_km = c_km_per_us * tau_us * std::sqrt(log_inv);
    r.l_max_semihier_km = node_factor * tau_us / 2.0 * c_km_per_us * log_inv;
    return r;
}

inline RangeLimits range_limits(const PlatformParams& platform, const ModeSpace& space, double k_ref,
                                std::optional<int> nodes, double chi, double c_km_per_us) {
    const double tau = platform.mode_dependent_lifetime() ? space.tau(k_ref) : *platform.fixed_tau_us;
    auto r = range_limits(tau, chi, c_km_per_us, nodes);
    r.k_ref_per_mm = platform.mode_dependent_lifetime() ? k_ref : 0.0;
    return r;
}

/// Repeaterless baseline: a midway pair source, each photon crossing L/2.
/// Returns the mean time per ebit in microseconds.
inline double spdc_time_us(double l_km, const SpdcParams& spdc, const PhysicalConstants& constants) {
    if (!(l_km >= 0.0)) throw std::invalid_argument("spdc_time_us: negative distance");
    const double eta_half = transmission(l_km / 2.0, constants.attenuation_db_per_km);
    const double pair_rate_per_us = spdc.chi * spdc.eta_s * spdc.eta_s * spdc.f_rep_mhz * eta_half * eta_half;
    const double ef = entanglement_of_formation(spdc.visibility);
    if (pair_rate_per_us <= 0.0 || ef <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / pair_rate_per_us / ef;
}

}  // namespace wvrep
