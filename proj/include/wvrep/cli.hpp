#pragma once

// Command-line front end. `run` returns the process exit code:
//   0 success, 1 runtime failure, 2 usage error, 3 configuration error,
//   4 Monte Carlo validation failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "monte_carlo.hpp"
#include "report.hpp"
#include "sweep.hpp"

namespace wvrep::cli {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Scale { linear, log };

struct GridSpec {
    double start = 0.0;
    double stop = 1.0;
    int points = 2;
    Scale scale = Scale::linear;

    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            const double f = static_cast<double>(i) / (points - 1);
            v[i] = scale == Scale::linear ? start + (stop - start) * f
                                          : std::exp(std::log(start) + (std::log(stop) - std::log(start)) * f);
        }
        v.back() = stop;
        return v;
    }
};

/// Parses "start:stop:points".
inline GridSpec parse_grid(const std::string& text, Scale scale = Scale::linear) {
    GridSpec g;
    g.scale = scale;
    std::istringstream in(text);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) || a.empty() || b.empty() ||
        c.empty())
        throw UsageError("grid must look like start:stop:points, got '" + text + "'");
    try {
        std::size_t used = 0;
        g.start = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        g.stop = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
        g.points = std::stoi(c, &used);
        if (used != c.size()) throw std::invalid_argument(c);
    } catch (const std::logic_error&) {
        throw UsageError("grid must look like start:stop:points, got '" + text + "'");
    }
    if (!(g.start < g.stop)) throw UsageError("grid start must be below stop");
    if (g.points < 2) throw UsageError("grid needs at least 2 points");
    if (scale == Scale::log && !(g.start > 0.0)) throw UsageError("log grid needs a positive start");
    return g;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

inline std::vector<PlatformParams> select_platforms(const Config& cfg, const std::string& names) {
    if (names.empty()) return cfg.platforms;
    std::vector<PlatformParams> out;
    for (const auto& n : split_list(names)) {
        bool found = false;
        for (const auto& p : cfg.platforms)
            if (p.name == n) {
                out.push_back(p);
                found = true;
            }
        if (!found) throw UsageError("unknown platform '" + n + "'");
    }
    return out;
}

inline std::vector<Architecture> select_archs(const std::string& names) {
    std::vector<Architecture> out;
    for (const auto& n : split_list(names)) {
        try {
            out.push_back(parse_architecture(n));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (out.empty()) throw UsageError("no architecture selected");
    return out;
}

inline std::vector<std::string> record_columns() {
    return {"L_km",   "platform", "architecture", "N",      "L0_km",    "p1",         "p_g",
            "P_ENG",  "P_ENC",    "mean_EF",      "T_tot_us", "R_per_s", "Q_per_s_node", "T_ebit_s"};
}

inline std::vector<Cell> record_row(const SweepRecord& r) {
    return {r.l_km,       r.platform, std::string(to_string(r.architecture)), static_cast<long long>(r.nodes),
            r.l0_km,      r.p1,       r.p_g,
            r.p_eng,      r.p_enc,    r.mean_ef,
            r.t_tot_us,   r.rate_per_s, r.q_per_s_node,
            r.time_per_ebit_s};
}

inline Table presets_table(const Config& cfg, const ModeSpace& space) {
    Table t;
    t.columns = {"platform", "M", "chi", "tau_ms", "eta_x", "eta_r", "eta_s", "eta_m",
                 "multiplexed", "enc_detection", "decoherence"};
    for (const auto& p : cfg.platforms) {
        Cell tau;
        if (p.fixed_tau_us) {
            tau = *p.fixed_tau_us / 1000.0;
        } else {
            char buf[64];
            std::snprintf(buf, sizeof buf, "(%.6g mm^-1)/K", space.gamma() / 1000.0);
            tau = std::string(buf);
        }
        t.add({p.name, static_cast<long long>(p.modes), p.chi, tau, p.eta_x, p.eta_r, p.eta_s, p.eta_m,
               std::string(p.multiplexed ? "true" : "false"), std::string(to_string(p.enc_detection)),
               std::string(to_string(p.decoherence))});
    }
    return t;
}

inline Table pg_curve_table(const Config& cfg, const std::vector<PlatformParams>& platforms,
                            const std::vector<double>& l0_grid) {
    Table t;
    t.columns = {"L0_km", "platform", "p_g"};
    for (double l0 : l0_grid)
        for (const auto& p : platforms) t.add({l0, p.name, link_budget(p, l0, cfg.constants).p_g});
    return t;
}

inline Table ef_curve_table(const Config& cfg, const ChainContext& ctx, const PlatformParams& platform,
                            const std::vector<double>& l0_grid, const std::vector<double>& ks) {
    Table t;
    t.columns = {"L0_km", "storage_us", "mode", "K_per_mm", "E_F"};
    const double chi0 = cfg.noise.chi_eff(platform);
    const double c = cfg.constants.fiber_speed_km_per_us;
    for (double l0 : l0_grid) {
        const double storage = l0 / c;
        if (platform.mode_dependent_lifetime()) {
            for (double k : ks)
                t.add({l0, storage, std::string("K"), k,
                       entanglement_of_formation(
                           visibility_at(storage, chi0, ctx.space.tau(k), platform.decoherence))});
        }
        t.add({l0, storage, std::string("average"), std::monostate{}, mean_ef(platform, ctx.space, chi0, storage)});
    }
    return t;
}

inline Table spdc_table(const Config& cfg, const std::vector<double>& l_grid) {
    Table t;
    t.columns = {"L_km", "T_ebit_s", "rate_per_s"};
    for (double l : l_grid) {
        const double us = spdc_time_us(l, cfg.spdc, cfg.constants);
        t.add({l, us * 1e-6, 1e6 / us});
    }
    return t;
}

inline Table limits_table(const Config& cfg, const ChainContext& ctx, std::optional<double> k_ref,
                          std::optional<int> nodes) {
    Table t;
    t.columns = {"platform", "K_ref_per_mm", "tau_us", "chi", "N", "L0_max_ahier_km", "L_max_semihier_km"};
    const double k = k_ref.value_or(ctx.space.k_min());
    for (const auto& p : cfg.platforms) {
        const auto r = range_limits(p, ctx.space, k, nodes, p.chi, cfg.constants.fiber_speed_km_per_us);
        t.add({p.name, p.mode_dependent_lifetime() ? Cell(k) : Cell(std::monostate{}), r.tau_us, p.chi,
               nodes ? Cell(static_cast<long long>(*nodes)) : Cell(std::string("inf")), r.l0_max_ahier_km,
               r.l_max_semihier_km});
    }
    return t;
}

struct McValidateOptions {
    std::uint64_t samples = 1'000'000;
    std::uint64_t chain_trials = 100'000;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    std::string platform = "WV-MUX-QM";
    int nodes = 5;
    double length_km = 550.0;
};

/// Analytic-versus-Monte-Carlo comparison; a row passes when |analytic - mc| <= 3 std errors.
inline Table mc_validate_table(const Config& cfg, const ChainContext& ctx, const McValidateOptions& o,
                               bool& all_pass) {
    Table t;
    t.columns = {"check", "N", "p_g", "analytic", "mc_mean", "mc_std_error", "z", "pass"};
    all_pass = true;
    auto add = [&](const std::string& name, int n, double pg, double analytic, const McEstimate& e) {
        const double diff = std::abs(analytic - e.mean);
        const double z = e.std_error > 0.0 ? diff / e.std_error : (diff == 0.0 ? 0.0 : INFINITY);
        const bool pass = z <= 3.0;
        all_pass = all_pass && pass;
        t.add({name, static_cast<long long>(n), pg, analytic, e.mean, e.std_error, z,
               std::string(pass ? "pass" : "FAIL")});
    };

    McConfig mc;
    mc.samples = o.samples;
    mc.seed = o.seed;
    mc.threads = o.threads;
    for (int n : {2, 5, 10, 50})
        for (double p : {0.01, 0.1, 0.5, 0.9})
            add("expected_max_rounds", n, p, f_waiting(n, p, WaitingExponent::links) / p,
                mc_expected_max_rounds(n - 1, p, mc));

    const auto& platform = find_platform(cfg.platforms, o.platform);
    McConfig chain = mc;
    chain.samples = o.chain_trials;
    const auto ahier = chain_time(Architecture::ahierarchical, platform, o.nodes, o.length_km, ctx);
    const auto ahier_mc = mc_chain_time(Architecture::ahierarchical, platform, o.nodes, o.length_km, ctx, chain);
    add("ahier_T_tot_us", o.nodes, ahier.p_g, ahier.t_tot_us, ahier_mc.t_tot_us);
    add("ahier_success_per_round", o.nodes, ahier.p_g, ahier.p_eng * ahier.p_enc * ahier.final_detection,
        ahier_mc.success_per_round);

    // each semihierarchical trial draws every link's geometric wait per attempt; fewer trials keep it fast
    chain.samples = std::max<std::uint64_t>(1, o.chain_trials / 10);
    const auto semi = chain_time(Architecture::semihierarchical, platform, o.nodes, o.length_km, ctx);
    const auto semi_mc = mc_chain_time(Architecture::semihierarchical, platform, o.nodes, o.length_km, ctx, chain);
    add("semihier_T_tot_us", o.nodes, semi.p_g, semi.t_tot_us, semi_mc.t_tot_us);
    return t;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Entanglement-distribution rates for multiplexed quantum-repeater chains", "wvrep"};
    app.require_subcommand(1);

    std::string config_path, output_path, format_name = "csv";
    unsigned threads = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "JSON configuration file");
        sub->add_option("-o,--output", output_path, "Output file (default: stdout)");
        sub->add_option("-f,--format", format_name, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("-j,--threads", threads, "Worker threads (0: WVREP_THREADS or hardware)");
    };

    std::string grid_text, scale_name = "linear", platforms_text, archs_text = "ahierarchical,semihierarchical";
    std::string k_text = "10,20,50,100,200,500,1000", ef_platform = "WV-MUX-QM";
    int nodes_min = 2, nodes_max = 200;
    auto add_grid = [&](CLI::App* sub, const char* help) {
        sub->add_option("-g,--grid", grid_text, help);
        sub->add_option("--scale", scale_name, "Grid spacing")->check(CLI::IsMember({"linear", "log"}));
    };

    auto* presets = app.add_subcommand("presets", "Dump the platform parameter table");
    add_common(presets);

    auto* pg = app.add_subcommand("pg-curve", "Link generation probability p_g versus L0");
    add_common(pg);
    add_grid(pg, "L0 grid in km, start:stop:points (default 10:250:100)");
    pg->add_option("-p,--platforms", platforms_text, "Comma-separated platforms (default WV-MUX-QM,WV-parallel,Temporal)");

    auto* ef = app.add_subcommand("ef-curve", "E_F per mode and mode average versus L0");
    add_common(ef);
    add_grid(ef, "L0 grid in km (default 1:400:100)");
    ef->add_option("-k,--k", k_text, "Comma-separated K values in 1/mm");
    ef->add_option("-p,--platform", ef_platform, "Platform");

    auto add_nodes = [&](CLI::App* sub) {
        sub->add_option("--nodes-min", nodes_min, "Smallest node count searched");
        sub->add_option("--nodes-max", nodes_max, "Largest node count searched");
    };
    auto* rate = app.add_subcommand("rate-curve", "Optimal per-ebit time versus L, with the SPDC baseline");
    add_common(rate);
    add_grid(rate, "L grid in km (default 50:1000:96)");
    rate->add_option("-p,--platforms", platforms_text, "Comma-separated platforms (default: all configured)");
    rate->add_option("-a,--arch", archs_text, "Comma-separated architectures");
    add_nodes(rate);

    auto* opt = app.add_subcommand("optimize", "Optimal node count and chain probabilities versus L");
    add_common(opt);
    add_grid(opt, "L grid in km (default 50:1000:96)");
    std::string opt_platforms = "WV-MUX-QM", opt_archs = "ahierarchical";
    opt->add_option("-p,--platforms", opt_platforms, "Comma-separated platforms");
    opt->add_option("-a,--arch", opt_archs, "Comma-separated architectures");
    add_nodes(opt);

    auto* lim = app.add_subcommand("limits", "Maximal-range table");
    add_common(lim);
    std::optional<double> k_ref;
    std::optional<int> lim_nodes;
    lim->add_option("-k,--k", k_ref, "Reference K in 1/mm (default: K_min)");
    lim->add_option("-n,--nodes", lim_nodes, "Node count for the semihierarchical limit (default: N -> inf)");

    auto* spdc = app.add_subcommand("spdc", "Direct midway-SPDC baseline versus L");
    add_common(spdc);
    add_grid(spdc, "L grid in km (default 50:1000:96)");

    auto* mcv = app.add_subcommand("mc-validate", "Compare closed forms against the Monte Carlo oracle");
    add_common(mcv);
    McValidateOptions mco;
    mcv->add_option("-s,--samples", mco.samples, "Samples per waiting-time cell");
    mcv->add_option("--chain-trials", mco.chain_trials, "Trials for the chain checks");
    mcv->add_option("--seed", mco.seed, "RNG seed");
    mcv->add_option("-p,--platform", mco.platform, "Platform for the chain checks");
    mcv->add_option("-n,--nodes", mco.nodes, "Node count for the chain checks");
    mcv->add_option("-L,--length", mco.length_km, "Total distance for the chain checks (km)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "wvrep: " << e.what() << "\n";
        return 2;
    }

    Config cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
    } catch (const std::exception& e) {
        err << "wvrep: " << e.what() << "\n";
        return 3;
    }

    try {
        const auto ctx = make_context(cfg);
        const auto scale = scale_name == "log" ? Scale::log : Scale::linear;
        auto grid = [&](const char* fallback) { return parse_grid(grid_text.empty() ? fallback : grid_text, scale).values(); };
        const NodeRange range{nodes_min, nodes_max};
        if (range.min < 2 || range.max < range.min) throw UsageError("node range must satisfy 2 <= min <= max");

        Table table;
        int code = 0;
        if (*presets) {
            table = presets_table(cfg, ctx.space);
        } else if (*pg) {
            const auto plats =
                select_platforms(cfg, platforms_text.empty() ? "WV-MUX-QM,WV-parallel,Temporal" : platforms_text);
            table = pg_curve_table(cfg, plats, grid("10:250:100"));
        } else if (*ef) {
            std::vector<double> ks;
            for (const auto& s : split_list(k_text)) {
                try {
                    ks.push_back(std::stod(s));
                } catch (const std::logic_error&) {
                    throw UsageError("bad K value '" + s + "'");
                }
                if (!(ks.back() > 0.0)) throw UsageError("K values must be positive");
            }
            const auto plats = select_platforms(cfg, ef_platform);
            table = ef_curve_table(cfg, ctx, plats.front(), grid("1:400:100"), ks);
        } else if (*rate) {
            const auto l_grid = grid("50:1000:96");
            const auto records =
                sweep(l_grid, select_platforms(cfg, platforms_text), select_archs(archs_text), ctx, range, threads);
            table.columns = record_columns();
            const std::size_t per_l = records.size() / l_grid.size();
            for (std::size_t i = 0; i < l_grid.size(); ++i) {
                for (std::size_t j = 0; j < per_l; ++j) table.add(record_row(records[i * per_l + j]));
                const double t = spdc_time_us(l_grid[i], cfg.spdc, cfg.constants);
                const double ef_spdc = entanglement_of_formation(cfg.spdc.visibility);
                const double r = std::isfinite(t) ? 1e6 / t : 0.0;
                table.add({l_grid[i], std::string("SPDC"), std::string("direct"), 2LL, l_grid[i], {}, {}, {}, {},
                           ef_spdc, t, r, r / 2.0, t * 1e-6});
            }
        } else if (*opt) {
            const auto records =
                sweep(grid("50:1000:96"), select_platforms(cfg, opt_platforms), select_archs(opt_archs), ctx, range, threads);
            table.columns = record_columns();
            for (const auto& r : records) table.add(record_row(r));
        } else if (*lim) {
            if (lim_nodes && *lim_nodes < 2) throw UsageError("--nodes must be >= 2");
            if (k_ref && !(*k_ref > 0.0)) throw UsageError("--k must be positive");
            table = limits_table(cfg, ctx, k_ref, lim_nodes);
        } else if (*spdc) {
            table = spdc_table(cfg, grid("50:1000:96"));
        } else if (*mcv) {
            mco.threads = threads;
            if (mco.samples < 1 || mco.chain_trials < 1) throw UsageError("sample counts must be >= 1");
            if (mco.nodes < 2) throw UsageError("--nodes must be >= 2");
            bool all_pass = false;
            table = mc_validate_table(cfg, ctx, mco, all_pass);
            if (!all_pass) code = 4;
        }

        const auto format = format_name == "json" ? Format::json : Format::csv;
        if (output_path.empty()) {
            write_table(out, table, format);
        } else {
            std::ofstream file(output_path, std::ios::binary);
            if (!file) throw std::runtime_error("cannot open output file '" + output_path + "'");
            write_table(file, table, format);
            if (!file) throw std::runtime_error("failed writing '" + output_path + "'");
        }
        if (code == 4) err << "wvrep: Monte Carlo validation failed (see FAIL rows)\n";
        return code;
    } catch (const UsageError& e) {
        err << "wvrep: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "wvrep: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "wvrep: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace wvrep::cli
