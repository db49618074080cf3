#pragma once

// Round-level stochastic simulation of repeater chains. Used as an oracle for
// the closed-form waiting factor and end-to-end times in repeater.hpp.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "entanglement.hpp"
#include "repeater.hpp"
#include "rng.hpp"

namespace wvrep {

struct McConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    std::uint64_t max_rounds = 10'000'000;
    /// Worker threads; 0 picks WVREP_THREADS or the hardware concurrency.
    unsigned threads = 0;

    void validate() const {
        if (samples < 1) throw std::invalid_argument("McConfig: samples must be >= 1");
        if (max_rounds < 1) throw std::invalid_argument("McConfig: max_rounds must be >= 1");
    }
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples_used = 0;
    std::uint64_t flagged = 0;
};

/// Too many trials hit the round cap for the estimate to be trusted.
class McCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace mc_detail {

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("WVREP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline constexpr std::uint64_t kBlock = 1024;

/// Calls fn(block_index, begin, end) for fixed-size trial blocks, spread over
/// worker threads. Block boundaries do not depend on the thread count.
template <class Fn>
void for_each_block(std::uint64_t trials, unsigned threads, Fn&& fn) {
    const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), blocks));
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (std::uint64_t b = next++; b < blocks; b = next++)
            fn(b, b * kBlock, std::min(trials, (b + 1) * kBlock));
    };
    if (workers <= 1) {
        work();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
}

inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const auto half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Mean and standard error of the non-NaN entries; NaN marks a flagged trial.
inline McEstimate summarize(const std::vector<double>& values) {
    std::vector<double> kept;
    kept.reserve(values.size());
    for (double x : values)
        if (!std::isnan(x)) kept.push_back(x);
    McEstimate e;
    e.samples_used = kept.size();
    e.flagged = values.size() - kept.size();
    if (kept.empty()) return e;
    const double n = static_cast<double>(kept.size());
    e.mean = pairwise_sum(kept) / n;
    if (kept.size() > 1) {
        std::vector<double> dev(kept.size());
        for (std::size_t i = 0; i < kept.size(); ++i) dev[i] = (kept[i] - e.mean) * (kept[i] - e.mean);
        e.std_error = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
    }
    return e;
}

inline void check_flagged(std::uint64_t flagged, std::uint64_t total, const char* what) {
    if (flagged * 1000 > total)
        throw McCapExceeded(std::string(what) + ": more than 0.1% of trials exceeded max_rounds");
}

}  // namespace mc_detail

/// Mean of max(J_1..J_links) for independent geometric(p) J_i.
inline McEstimate mc_expected_max_rounds(int links, double p, const McConfig& cfg) {
    cfg.validate();
    if (links < 1) throw std::invalid_argument("mc_expected_max_rounds: need at least one link");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("mc_expected_max_rounds: p must lie in (0,1]");
    const double log_q = p == 1.0 ? -std::numeric_limits<double>::infinity() : std::log1p(-p);
    std::vector<double> values(cfg.samples);
    mc_detail::for_each_block(cfg.samples, cfg.threads, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            auto rng = SplitMix64::for_trial(cfg.seed, t);
            std::uint64_t jmax = 0;
            for (int i = 0; i < links; ++i) jmax = std::max(jmax, rng.geometric(log_q));
            values[t] = jmax > cfg.max_rounds ? std::numeric_limits<double>::quiet_NaN()
                                              : static_cast<double>(jmax);
        }
    });
    auto est = mc_detail::summarize(values);
    mc_detail::check_flagged(est.flagged, cfg.samples, "mc_expected_max_rounds");
    return est;
}

struct StorageSummary {
    double mean_us = 0.0;
    double p50_us = 0.0;
    double p90_us = 0.0;
    double p99_us = 0.0;
    std::uint64_t memories = 0;
    std::uint64_t flagged_trials = 0;
};

/// Storage time of each link's memories in a semihierarchical chain: the link
/// waits (j_max - j_i) rounds of L0/c for the slowest link, then L/c for the
/// two-way exchange with the central station.
inline StorageSummary mc_semihier_storage(int nodes, double p_g, double l_km, double l0_km, double c,
                                          const McConfig& cfg) {
    cfg.validate();
    if (nodes < 2) throw std::invalid_argument("mc_semihier_storage: need at least 2 nodes");
    if (!(p_g > 0.0 && p_g <= 1.0)) throw std::invalid_argument("mc_semihier_storage: p_g must lie in (0,1]");
    if (!(l_km > 0.0 && l0_km > 0.0 && c > 0.0)) throw std::invalid_argument("mc_semihier_storage: bad geometry");
    const int links = nodes - 1;
    const double log_q = p_g == 1.0 ? -std::numeric_limits<double>::infinity() : std::log1p(-p_g);
    const std::uint64_t blocks = (cfg.samples + mc_detail::kBlock - 1) / mc_detail::kBlock;
    std::vector<std::vector<std::uint64_t>> hist(blocks);
    std::vector<std::uint64_t> flagged(blocks, 0);

    mc_detail::for_each_block(cfg.samples, cfg.threads, [&](std::uint64_t b, std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint64_t> j(static_cast<std::size_t>(links));
        auto& h = hist[b];
        for (std::uint64_t t = begin; t < end; ++t) {
            auto rng = SplitMix64::for_trial(cfg.seed, t);
            std::uint64_t jmax = 0;
            for (auto& ji : j) {
                ji = rng.geometric(log_q);
                jmax = std::max(jmax, ji);
            }
            if (jmax > cfg.max_rounds) {
                ++flagged[b];
                continue;
            }
            for (auto ji : j) {
                const auto d = static_cast<std::size_t>(jmax - ji);
                if (d >= h.size()) h.resize(d + 1, 0);
                ++h[d];
            }
        }
    });

    std::vector<std::uint64_t> total;
    StorageSummary s;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        if (hist[b].size() > total.size()) total.resize(hist[b].size(), 0);
        for (std::size_t d = 0; d < hist[b].size(); ++d) total[d] += hist[b][d];
        s.flagged_trials += flagged[b];
    }
    mc_detail::check_flagged(s.flagged_trials, cfg.samples, "mc_semihier_storage");

    const double round = l0_km / c;
    const double overhead = l_km / c;
    long double weighted = 0.0L;
    for (std::size_t d = 0; d < total.size(); ++d) {
        s.memories += total[d];
        weighted += static_cast<long double>(d) * static_cast<long double>(total[d]);
    }
    if (s.memories == 0) return s;
    s.mean_us = static_cast<double>(weighted / s.memories) * round + overhead;
    auto quantile = [&](double q) {
        const auto rank = static_cast<std::uint64_t>(std::ceil(q * static_cast<double>(s.memories)));
        std::uint64_t acc = 0;
        for (std::size_t d = 0; d < total.size(); ++d) {
            acc += total[d];
            if (acc >= rank) return static_cast<double>(d) * round + overhead;
        }
        return static_cast<double>(total.size() - 1) * round + overhead;
    };
    s.p50_us = quantile(0.50);
    s.p90_us = quantile(0.90);
    s.p99_us = quantile(0.99);
    return s;
}

struct ChainMcResult {
    McEstimate t_tot_us;
    McEstimate mean_ef;
    /// Ahierarchical only: successes per protocol round.
    McEstimate success_per_round;
    std::uint64_t rounds = 0;
};

namespace mc_detail {

/// Per-round Bernoulli events after entanglement generation, ascending so a
/// failing round is usually rejected on the first draw.
inline std::vector<double> completion_events(const PlatformParams& platform, int nodes) {
    const double eta_det = platform.enc_efficiency();
    const auto stage = p_enc_stage(platform.eta_r, eta_det);
    const int inner = nodes - 2;
    std::vector<double> ev;
    ev.insert(ev.end(), static_cast<std::size_t>((inner + 1) / 2), stage.p_f);
    ev.insert(ev.end(), static_cast<std::size_t>(inner / 2), stage.p_e);
    ev.insert(ev.end(), static_cast<std::size_t>(nodes) + 2, platform.eta_x);
    ev.insert(ev.end(), 2, eta_det);
    std::erase_if(ev, [](double p) { return p >= 1.0; });
    std::sort(ev.begin(), ev.end());
    return ev;
}

inline bool all_succeed(SplitMix64& rng, std::span<const double> events) {
    for (double p : events)
        if (!rng.bernoulli(p)) return false;
    return true;
}

}  // namespace mc_detail

/// Simulates complete distributions round by round.
///
/// Ahierarchical: every round all links attempt generation blindly and the
/// round succeeds only if every link, every connection, every switch and the
/// final detections succeed. Semihierarchical: links hold their entanglement
/// until the slowest one heralds (geometric rounds of L0/c), plus L/c of
/// signalling, then one connection attempt; on failure the whole cycle restarts.
/// Per-trial E_F averages the mode spectrum at each memory's realised storage time.
inline ChainMcResult mc_chain_time(Architecture arch, const PlatformParams& platform, int nodes, double l_km,
                                   const ChainContext& ctx, const McConfig& cfg) {
    cfg.validate();
    if (nodes < 2) throw std::invalid_argument("mc_chain_time: need at least 2 nodes");
    if (!(l_km > 0.0)) throw std::invalid_argument("mc_chain_time: L must be > 0");
    const double c = ctx.constants.fiber_speed_km_per_us;
    const int links = nodes - 1;
    const double l0 = l_km / links;
    const double t_r = l0 / c;
    const auto link = link_budget(platform, l0, ctx.constants);
    if (!(link.p_g > 0.0)) throw std::invalid_argument("mc_chain_time: p_g = 0, chain never completes");
    const auto events = mc_detail::completion_events(platform, nodes);
    const double chi0 = ctx.noise.chi_eff(platform);
    const bool product = ctx.model.ef_composition == EfComposition::link_product;

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> times(cfg.samples), efs(cfg.samples), rounds(cfg.samples);

    if (arch == Architecture::ahierarchical) {
        const double ef = mean_ef(platform, ctx.space, chi0, t_r, product ? links : 1);
        mc_detail::for_each_block(cfg.samples, cfg.threads, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
            for (std::uint64_t t = begin; t < end; ++t) {
                auto rng = SplitMix64::for_trial(cfg.seed, t);
                std::uint64_t r = 0;
                bool done = false;
                while (!done && r < cfg.max_rounds) {
                    ++r;
                    bool linked = true;
                    for (int i = 0; i < links && linked; ++i) linked = rng.bernoulli(link.p_g);
                    done = linked && mc_detail::all_succeed(rng, events);
                }
                times[t] = done ? static_cast<double>(r) * t_r : nan;
                rounds[t] = done ? static_cast<double>(r) : nan;
                efs[t] = done ? ef : nan;
            }
        });
    } else {
        const double log_q = link.p_g == 1.0 ? -std::numeric_limits<double>::infinity() : std::log1p(-link.p_g);
        const double base = (l_km + l0) / c;
        // single-link E_F indexed by extra waiting rounds, until it vanishes
        std::vector<double> ef_table;
        if (!product) {
            for (std::size_t d = 0; d < 100000; ++d) {
                ef_table.push_back(mean_ef(platform, ctx.space, chi0, base + static_cast<double>(d) * t_r));
                if (ef_table.back() == 0.0) break;
            }
        }
        auto ef_after = [&](std::uint64_t d) {
            if (d < ef_table.size()) return ef_table[d];
            if (ef_table.back() == 0.0) return 0.0;
            return mean_ef(platform, ctx.space, chi0, base + static_cast<double>(d) * t_r);
        };
        mc_detail::for_each_block(cfg.samples, cfg.threads, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
            std::vector<std::uint64_t> j(static_cast<std::size_t>(links));
            std::vector<double> waits(j.size());
            for (std::uint64_t t = begin; t < end; ++t) {
                auto rng = SplitMix64::for_trial(cfg.seed, t);
                double elapsed = 0.0;
                std::uint64_t spent = 0;
                bool done = false;
                std::uint64_t jmax = 0;
                while (!done && spent < cfg.max_rounds) {
                    jmax = 0;
                    for (auto& ji : j) {
                        ji = rng.geometric(log_q);
                        jmax = std::max(jmax, ji);
                    }
                    spent += jmax;
                    elapsed += static_cast<double>(jmax) * t_r + l_km / c;
                    done = mc_detail::all_succeed(rng, events);
                }
                if (!done || spent > cfg.max_rounds) {
                    times[t] = efs[t] = rounds[t] = nan;
                    continue;
                }
                times[t] = elapsed;
                rounds[t] = static_cast<double>(spent);
                double ef = 0.0;
                if (!product) {
                    for (auto ji : j) ef += ef_after(jmax - ji);
                    efs[t] = ef / links;
                } else {
                    for (std::size_t i = 0; i < j.size(); ++i)
                        waits[i] = base + static_cast<double>(jmax - j[i]) * t_r;
                    auto ef_mode = [&](double tau) {
                        double v = 1.0;
                        for (double w : waits) v *= visibility_at(w, chi0, tau, platform.decoherence);
                        return entanglement_of_formation(v);
                    };
                    efs[t] = platform.mode_dependent_lifetime()
                                 ? ctx.space.weighted_average([&](double k) { return ef_mode(ctx.space.tau(k)); })
                                 : ef_mode(*platform.fixed_tau_us);
                }
            }
        });
    }

    ChainMcResult out;
    out.t_tot_us = mc_detail::summarize(times);
    out.mean_ef = mc_detail::summarize(efs);
    mc_detail::check_flagged(out.t_tot_us.flagged, cfg.samples, "mc_chain_time");
    const auto r = mc_detail::summarize(rounds);
    out.rounds = static_cast<std::uint64_t>(std::llround(r.mean * static_cast<double>(r.samples_used)));
    if (arch == Architecture::ahierarchical && r.mean > 0.0) {
        // delta method on 1 / mean(rounds)
        out.success_per_round.mean = 1.0 / r.mean;
        out.success_per_round.std_error = r.std_error / (r.mean * r.mean);
        out.success_per_round.samples_used = r.samples_used;
    }
    return out;
}

}  // namespace wvrep
