#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "monte_carlo.hpp"
#include "repeater.hpp"

namespace wvrep {

/// One output row: a chain evaluated at (platform, architecture, L, N).
struct SweepRecord {
    std::string platform;
    Architecture architecture = Architecture::ahierarchical;
    double l_km = 0.0;
    int nodes = 2;
    double l0_km = 0.0;
    double p1 = 0.0;
    double p_g = 0.0;
    double p_eng = 0.0;
    double p_enc = 0.0;
    double mean_ef = 0.0;
    double t_tot_us = 0.0;
    double rate_per_s = 0.0;          // R
    double q_per_s_node = 0.0;        // Q
    double time_per_ebit_s = 0.0;     // 1 / (N Q)
};

inline ChainContext make_context(const Config& cfg) {
    return ChainContext(cfg.constants, ModeSpace::from_params(cfg.mode_space, cfg.constants), cfg.noise,
                        cfg.model);
}

inline SweepRecord to_record(const PlatformParams& platform, const ChainPlan& plan) {
    SweepRecord r;
    r.platform = platform.name;
    r.architecture = plan.architecture;
    r.l_km = plan.l_km;
    r.nodes = plan.nodes;
    r.l0_km = plan.l0_km;
    r.p1 = plan.p1;
    r.p_g = plan.p_g;
    r.p_eng = plan.p_eng;
    r.p_enc = plan.p_enc;
    r.mean_ef = plan.mean_ef;
    r.t_tot_us = plan.t_tot_us;
    r.rate_per_s = plan.rate_per_us * 1e6;
    r.q_per_s_node = r.rate_per_s / plan.nodes;
    r.time_per_ebit_s =
        r.q_per_s_node > 0.0 ? 1.0 / (plan.nodes * r.q_per_s_node) : std::numeric_limits<double>::infinity();
    return r;
}

inline SweepRecord q_of(int nodes, double l_km, const PlatformParams& platform, Architecture arch,
                        const ChainContext& ctx) {
    return to_record(platform, chain_time(arch, platform, nodes, l_km, ctx));
}

struct NodeRange {
    int min = 2;
    int max = 200;
};

/// Exhaustive argmax of Q over the node range; ties go to the smaller N.
inline SweepRecord optimize_nodes(double l_km, const PlatformParams& platform, Architecture arch,
                                  const ChainContext& ctx, NodeRange range = {}) {
    if (range.min < 2 || range.max < range.min) throw std::invalid_argument("optimize_nodes: bad node range");
    SweepRecord best = q_of(range.min, l_km, platform, arch, ctx);
    for (int n = range.min + 1; n <= range.max; ++n) {
        auto r = q_of(n, l_km, platform, arch, ctx);
        if (r.q_per_s_node > best.q_per_s_node) best = std::move(r);
    }
    return best;
}

/// Optimal record for every (L, platform, architecture), L-major. Grid points
/// are independent and may run on several threads; ordering is fixed.
inline std::vector<SweepRecord> sweep(const std::vector<double>& l_grid, const std::vector<PlatformParams>& platforms,
                                      const std::vector<Architecture>& archs, const ChainContext& ctx,
                                      NodeRange range = {}, unsigned threads = 1) {
    if (l_grid.empty() || platforms.empty() || archs.empty()) throw std::invalid_argument("sweep: empty grid");
    const std::size_t per_l = platforms.size() * archs.size();
    const std::size_t total = l_grid.size() * per_l;
    std::vector<SweepRecord> out(total);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            const auto& l = l_grid[i / per_l];
            const auto& p = platforms[(i % per_l) / archs.size()];
            const auto a = archs[i % archs.size()];
            out[i] = optimize_nodes(l, p, a, ctx, range);
        }
    };
    const unsigned workers = std::min<std::size_t>(mc_detail::resolve_threads(threads), total);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return out;
}

}  // namespace wvrep
