#pragma once

// JSON configuration: one document, every field optional. See docs/config.md.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "model_params.hpp"

namespace wvrep {

/// Malformed or unreadable configuration document.
class ConfigParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Config {
    PhysicalConstants constants;
    std::vector<PlatformParams> platforms = builtin_platforms();
    ModeSpaceParams mode_space;
    NoiseParams noise;
    SpdcParams spdc;
    ModelOptions model;

    void validate() const {
        constants.validate();
        detail::require(!platforms.empty(), "platforms", "must not be empty");
        for (std::size_t i = 0; i < platforms.size(); ++i) {
            const std::string prefix = "platforms[" + std::to_string(i) + "]";
            platforms[i].validate(prefix);
            for (std::size_t j = 0; j < i; ++j)
                detail::require(platforms[j].name != platforms[i].name, prefix + ".name",
                                "duplicate platform name");
        }
        mode_space.validate();
        noise.validate();
        spdc.validate();
    }

    bool operator==(const Config&) const = default;
};

namespace config_detail {

using nlohmann::json;

inline const json& object_or_empty(const json& doc, const char* key, const std::string& path) {
    static const json empty = json::object();
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return empty;
    if (!it->is_object()) throw ValidationError(path, "must be a JSON object");
    return *it;
}

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                           const std::string& prefix) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw ValidationError(detail::join(prefix, it.key().c_str()), "unknown field");
    }
}

inline void read_number(const json& obj, const char* key, double& out, const std::string& prefix) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number()) throw ValidationError(detail::join(prefix, key), "must be a number");
    out = it->get<double>();
}

inline void read_int(const json& obj, const char* key, int& out, const std::string& prefix) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_integer())
        throw ValidationError(detail::join(prefix, key), "must be an integer");
    out = it->get<int>();
}

inline void read_bool(const json& obj, const char* key, bool& out, const std::string& prefix) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_boolean()) throw ValidationError(detail::join(prefix, key), "must be a boolean");
    out = it->get<bool>();
}

inline void read_optional(const json& obj, const char* key, std::optional<double>& out,
                          const std::string& prefix) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (it->is_null()) {
        out.reset();
        return;
    }
    if (!it->is_number()) throw ValidationError(detail::join(prefix, key), "must be a number or null");
    out = it->get<double>();
}

template <class Enum>
void read_enum(const json& obj, const char* key, Enum& out, const std::string& prefix,
               std::initializer_list<std::pair<const char*, Enum>> values) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (it->is_string()) {
        const auto s = it->get<std::string>();
        for (const auto& [label, v] : values)
            if (s == label) {
                out = v;
                return;
            }
    }
    throw ValidationError(detail::join(prefix, key), "unrecognised value");
}

inline PlatformParams read_platform(const json& obj, const std::string& prefix) {
    if (!obj.is_object()) throw ValidationError(prefix, "must be a JSON object");
    reject_unknown(obj,
                   {"name", "base", "M", "chi", "eta_x", "eta_r", "eta_s", "eta_m", "multiplexed",
                    "enc_detection", "decoherence", "tau_us"},
                   prefix);
    auto name_it = obj.find("name");
    if (name_it == obj.end() || !name_it->is_string())
        throw ValidationError(detail::join(prefix, "name"), "required string");
    const auto name = name_it->get<std::string>();

    const auto builtins = builtin_platforms();
    PlatformParams p;
    std::string base = name;
    if (auto b = obj.find("base"); b != obj.end()) {
        if (!b->is_string()) throw ValidationError(detail::join(prefix, "base"), "must be a string");
        base = b->get<std::string>();
        bool found = false;
        for (const auto& q : builtins) found = found || q.name == base;
        if (!found) throw ValidationError(detail::join(prefix, "base"), "unknown builtin platform");
    }
    for (const auto& q : builtins)
        if (q.name == base) p = q;
    p.name = name;

    read_int(obj, "M", p.modes, prefix);
    read_number(obj, "chi", p.chi, prefix);
    read_number(obj, "eta_x", p.eta_x, prefix);
    read_number(obj, "eta_r", p.eta_r, prefix);
    read_number(obj, "eta_s", p.eta_s, prefix);
    read_number(obj, "eta_m", p.eta_m, prefix);
    read_bool(obj, "multiplexed", p.multiplexed, prefix);
    read_enum(obj, "enc_detection", p.enc_detection, prefix,
              {{"single_mode", Detection::single_mode}, {"multimode", Detection::multimode}});
    read_enum(obj, "decoherence", p.decoherence, prefix,
              {{"gaussian", Decoherence::gaussian}, {"exponential", Decoherence::exponential}});
    read_optional(obj, "tau_us", p.fixed_tau_us, prefix);
    return p;
}

}  // namespace config_detail

/// Builds a validated bundle from a parsed document. Absent fields keep their defaults.
inline Config config_from_json(const nlohmann::json& doc) {
    using namespace config_detail;
    if (!doc.is_object()) throw ValidationError("(root)", "must be a JSON object");
    reject_unknown(doc, {"constants", "platforms", "mode_space", "noise", "spdc", "model"}, "");

    Config cfg;

    const auto& c = object_or_empty(doc, "constants", "constants");
    reject_unknown(c, {"atomic_mass_kg", "boltzmann_j_per_k", "fiber_speed_km_per_us",
                       "attenuation_db_per_km"},
                   "constants");
    read_number(c, "atomic_mass_kg", cfg.constants.atomic_mass_kg, "constants");
    read_number(c, "boltzmann_j_per_k", cfg.constants.boltzmann_j_per_k, "constants");
    read_number(c, "fiber_speed_km_per_us", cfg.constants.fiber_speed_km_per_us, "constants");
    read_number(c, "attenuation_db_per_km", cfg.constants.attenuation_db_per_km, "constants");

    if (auto it = doc.find("platforms"); it != doc.end() && !it->is_null()) {
        if (!it->is_array()) throw ValidationError("platforms", "must be a JSON array");
        cfg.platforms.clear();
        for (std::size_t i = 0; i < it->size(); ++i)
            cfg.platforms.push_back(
                read_platform((*it)[i], "platforms[" + std::to_string(i) + "]"));
    }

    const auto& m = object_or_empty(doc, "mode_space", "mode_space");
    reject_unknown(m, {"k_min_per_mm", "k_max_per_mm", "beta_mm2", "temperature_k", "gamma_us_mm",
                       "grid_points"},
                   "mode_space");
    read_number(m, "k_min_per_mm", cfg.mode_space.k_min_per_mm, "mode_space");
    read_number(m, "k_max_per_mm", cfg.mode_space.k_max_per_mm, "mode_space");
    read_number(m, "beta_mm2", cfg.mode_space.beta_mm2, "mode_space");
    read_number(m, "temperature_k", cfg.mode_space.temperature_k, "mode_space");
    read_optional(m, "gamma_us_mm", cfg.mode_space.gamma_us_mm, "mode_space");
    read_int(m, "grid_points", cfg.mode_space.grid_points, "mode_space");

    const auto& n = object_or_empty(doc, "noise", "noise");
    reject_unknown(n, {"B", "chi_eff_policy"}, "noise");
    read_number(n, "B", cfg.noise.noise_b, "noise");
    if (auto it = n.find("chi_eff_policy"); it != n.end() && *it != "frozen_t0")
        throw ValidationError("noise.chi_eff_policy", "only \"frozen_t0\" is supported");

    const auto& s = object_or_empty(doc, "spdc", "spdc");
    reject_unknown(s, {"f_rep_mhz", "chi", "eta_s", "visibility"}, "spdc");
    read_number(s, "f_rep_mhz", cfg.spdc.f_rep_mhz, "spdc");
    read_number(s, "chi", cfg.spdc.chi, "spdc");
    read_number(s, "eta_s", cfg.spdc.eta_s, "spdc");
    read_number(s, "visibility", cfg.spdc.visibility, "spdc");

    const auto& mo = object_or_empty(doc, "model", "model");
    reject_unknown(mo, {"waiting_exponent", "ef_composition"}, "model");
    read_enum(mo, "waiting_exponent", cfg.model.waiting_exponent, "model",
              {{"links", WaitingExponent::links}, {"nodes", WaitingExponent::nodes}});
    read_enum(mo, "ef_composition", cfg.model.ef_composition, "model",
              {{"single_link", EfComposition::single_link},
               {"link_product", EfComposition::link_product}});

    cfg.validate();
    return cfg;
}

inline Config parse_config(const std::string& text) {
    nlohmann::json doc;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        doc = nlohmann::json::object();
    } else {
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigParseError(std::string("config parse error: ") + e.what());
        }
    }
    return config_from_json(doc);
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Full serialisation; every field is written, so reloading reproduces the bundle exactly.
inline nlohmann::json to_json(const Config& cfg) {
    using nlohmann::json;
    json doc;
    doc["constants"] = {{"atomic_mass_kg", cfg.constants.atomic_mass_kg},
                        {"boltzmann_j_per_k", cfg.constants.boltzmann_j_per_k},
                        {"fiber_speed_km_per_us", cfg.constants.fiber_speed_km_per_us},
                        {"attenuation_db_per_km", cfg.constants.attenuation_db_per_km}};
    json plats = json::array();
    for (const auto& p : cfg.platforms) {
        json j = {{"name", p.name},
                  {"M", p.modes},
                  {"chi", p.chi},
                  {"eta_x", p.eta_x},
                  {"eta_r", p.eta_r},
                  {"eta_s", p.eta_s},
                  {"eta_m", p.eta_m},
                  {"multiplexed", p.multiplexed},
                  {"enc_detection", to_string(p.enc_detection)},
                  {"decoherence", to_string(p.decoherence)}};
        j["tau_us"] = p.fixed_tau_us ? json(*p.fixed_tau_us) : json(nullptr);
        plats.push_back(std::move(j));
    }
    doc["platforms"] = std::move(plats);
    const auto& m = cfg.mode_space;
    doc["mode_space"] = {{"k_min_per_mm", m.k_min_per_mm},
                         {"k_max_per_mm", m.k_max_per_mm},
                         {"beta_mm2", m.beta_mm2},
                         {"temperature_k", m.temperature_k},
                         {"grid_points", m.grid_points}};
    doc["mode_space"]["gamma_us_mm"] = m.gamma_us_mm ? json(*m.gamma_us_mm) : json(nullptr);
    doc["noise"] = {{"B", cfg.noise.noise_b}, {"chi_eff_policy", "frozen_t0"}};
    doc["spdc"] = {{"f_rep_mhz", cfg.spdc.f_rep_mhz},
                   {"chi", cfg.spdc.chi},
                   {"eta_s", cfg.spdc.eta_s},
                   {"visibility", cfg.spdc.visibility}};
    doc["model"] = {
        {"waiting_exponent",
         cfg.model.waiting_exponent == WaitingExponent::links ? "links" : "nodes"},
        {"ef_composition",
         cfg.model.ef_composition == EfComposition::single_link ? "single_link" : "link_product"}};
    return doc;
}

}  // namespace wvrep
