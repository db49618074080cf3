#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wvrep {

/// Raised when a parameter value is out of its admissible range.
/// `field()` holds the dotted path of the offending field, e.g. "platforms[1].chi".
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

namespace detail {

inline void require(bool ok, const std::string& field, const char* what) {
    if (!ok) throw ValidationError(field, what);
}

inline void require_positive(double v, const std::string& field) {
    require(std::isfinite(v) && v > 0.0, field, "must be finite and > 0");
}

inline void require_unit_open(double v, const std::string& field) {
    require(std::isfinite(v) && v > 0.0 && v < 1.0, field, "must lie in (0,1)");
}

inline void require_unit_half_open(double v, const std::string& field) {
    require(std::isfinite(v) && v > 0.0 && v <= 1.0, field, "must lie in (0,1]");
}

inline std::string join(const std::string& prefix, const char* name) {
    return prefix.empty() ? std::string(name) : prefix + "." + name;
}

}  // namespace detail

struct PhysicalConstants {
    double atomic_mass_kg = 1.44316e-25;        // Rb-87
    double boltzmann_j_per_k = 1.380649e-23;
    double fiber_speed_km_per_us = 0.2;
    double attenuation_db_per_km = 0.2;

    void validate(const std::string& prefix = "constants") const {
        using namespace detail;
        require_positive(atomic_mass_kg, join(prefix, "atomic_mass_kg"));
        require_positive(boltzmann_j_per_k, join(prefix, "boltzmann_j_per_k"));
        require_positive(fiber_speed_km_per_us, join(prefix, "fiber_speed_km_per_us"));
        require(fiber_speed_km_per_us <= 0.3, join(prefix, "fiber_speed_km_per_us"),
                "must not exceed 0.3 km/us");
        require_positive(attenuation_db_per_km, join(prefix, "attenuation_db_per_km"));
    }

    bool operator==(const PhysicalConstants&) const = default;
};

/// Which detector efficiency applies to the connection stage and the final detection.
enum class Detection { single_mode, multimode };

/// Decay law of the readout efficiency: exp(-t^2/tau^2) or exp(-t/tau).
enum class Decoherence { gaussian, exponential };

enum class Architecture { ahierarchical, semihierarchical };

inline const char* to_string(Detection d) {
    return d == Detection::single_mode ? "single_mode" : "multimode";
}
inline const char* to_string(Decoherence d) {
    return d == Decoherence::gaussian ? "gaussian" : "exponential";
}
inline const char* to_string(Architecture a) {
    return a == Architecture::ahierarchical ? "ahierarchical" : "semihierarchical";
}

inline Architecture parse_architecture(const std::string& s) {
    if (s == "ahierarchical" || s == "ahier") return Architecture::ahierarchical;
    if (s == "semihierarchical" || s == "semihier") return Architecture::semihierarchical;
    throw std::invalid_argument("unknown architecture '" + s + "'");
}

/// One repeater platform (a row of the platform comparison table).
struct PlatformParams {
    std::string name;
    int modes = 1;
    double chi = 0.05;
    double eta_x = 1.0;
    double eta_r = 1.0;
    double eta_s = 1.0;
    double eta_m = 1.0;
    bool multiplexed = false;
    Detection enc_detection = Detection::single_mode;
    Decoherence decoherence = Decoherence::exponential;
    /// Fixed memory lifetime in microseconds; empty means tau(K) = gamma / K.
    std::optional<double> fixed_tau_us;

    bool mode_dependent_lifetime() const noexcept { return !fixed_tau_us.has_value(); }

    /// Detector efficiency used at the connection stage and at the final parties.
    double enc_efficiency() const noexcept {
        return enc_detection == Detection::single_mode ? eta_s : eta_m;
    }

    void validate(const std::string& prefix = "platform") const {
        using namespace detail;
        require(!name.empty(), join(prefix, "name"), "must not be empty");
        require(modes >= 1, join(prefix, "M"), "must be >= 1");
        require_unit_open(chi, join(prefix, "chi"));
        require_unit_half_open(eta_x, join(prefix, "eta_x"));
        require_unit_half_open(eta_r, join(prefix, "eta_r"));
        require_unit_half_open(eta_s, join(prefix, "eta_s"));
        require_unit_half_open(eta_m, join(prefix, "eta_m"));
        if (fixed_tau_us) require_positive(*fixed_tau_us, join(prefix, "tau_us"));
    }

    bool operator==(const PlatformParams&) const = default;
};

struct ModeSpaceParams {
    double k_min_per_mm = 10.0;
    double k_max_per_mm = 1000.0;
    double beta_mm2 = 3.5e-3;
    double temperature_k = 1e-6;
    /// Overrides the temperature-derived gamma when set (us/mm).
    std::optional<double> gamma_us_mm;
    int grid_points = 4096;

    void validate(const std::string& prefix = "mode_space") const {
        using namespace detail;
        require_positive(k_min_per_mm, join(prefix, "k_min_per_mm"));
        require_positive(k_max_per_mm, join(prefix, "k_max_per_mm"));
        require(k_min_per_mm < k_max_per_mm, join(prefix, "k_max_per_mm"),
                "must exceed k_min_per_mm");
        require_positive(beta_mm2, join(prefix, "beta_mm2"));
        require_positive(temperature_k, join(prefix, "temperature_k"));
        if (gamma_us_mm) require_positive(*gamma_us_mm, join(prefix, "gamma_us_mm"));
        require(grid_points >= 2, join(prefix, "grid_points"), "must be >= 2");
    }

    bool operator==(const ModeSpaceParams&) const = default;
};

struct NoiseParams {
    /// Noise-photon probability per shot in the readout path.
    double noise_b = 0.0;

    void validate(const std::string& prefix = "noise") const {
        detail::require(std::isfinite(noise_b) && noise_b >= 0.0, detail::join(prefix, "B"),
                        "must be finite and >= 0");
    }

    /// Effective excitation probability chi + B/eta_r, frozen at t = 0.
    double chi_eff(const PlatformParams& p) const noexcept { return p.chi + noise_b / p.eta_r; }

    bool operator==(const NoiseParams&) const = default;
};

struct SpdcParams {
    double f_rep_mhz = 80.0;
    double chi = 0.01;
    double eta_s = 0.9;
    double visibility = 1.0;

    void validate(const std::string& prefix = "spdc") const {
        using namespace detail;
        require_positive(f_rep_mhz, join(prefix, "f_rep_mhz"));
        require_unit_open(chi, join(prefix, "chi"));
        require_unit_half_open(eta_s, join(prefix, "eta_s"));
        require(std::isfinite(visibility) && visibility >= 0.0 && visibility <= 1.0,
                join(prefix, "visibility"), "must lie in [0,1]");
    }

    bool operator==(const SpdcParams&) const = default;
};

/// Which count enters the exponent of the waiting-time series.
enum class WaitingExponent { links, nodes };

/// How the per-link visibility turns into the delivered visibility.
enum class EfComposition { single_link, link_product };

struct ModelOptions {
    WaitingExponent waiting_exponent = WaitingExponent::links;
    EfComposition ef_composition = EfComposition::single_link;

    bool operator==(const ModelOptions&) const = default;
};

/// The four reference platforms.
inline std::vector<PlatformParams> builtin_platforms() {
    PlatformParams mux;
    mux.name = "WV-MUX-QM";
    mux.modes = 5500;
    mux.chi = 0.05;
    mux.eta_x = 0.9;
    mux.eta_r = 0.7;
    mux.eta_s = 0.9;
    mux.eta_m = 0.2;
    mux.multiplexed = true;
    mux.enc_detection = Detection::single_mode;
    mux.decoherence = Decoherence::gaussian;

    // No switch, so the connection needs a mode-resolved (camera) measurement.
    PlatformParams parallel = mux;
    parallel.name = "WV-parallel";
    parallel.eta_x = 1.0;
    parallel.eta_s = 0.2;
    parallel.multiplexed = false;
    parallel.enc_detection = Detection::multimode;

    PlatformParams temporal;
    temporal.name = "Temporal";
    temporal.modes = 50;
    temporal.chi = 0.47;
    temporal.eta_x = 1.0;
    temporal.eta_r = 0.71;
    temporal.eta_s = 0.9;
    temporal.eta_m = 0.9;
    temporal.multiplexed = false;
    temporal.enc_detection = Detection::single_mode;
    temporal.decoherence = Decoherence::exponential;
    temporal.fixed_tau_us = 1000.0;

    PlatformParams lattice = temporal;
    lattice.name = "Lattice-SM";
    lattice.modes = 1;
    lattice.chi = 0.05;
    lattice.eta_r = 0.76;
    lattice.fixed_tau_us = 220000.0;

    return {mux, parallel, temporal, lattice};
}

inline const PlatformParams& find_platform(const std::vector<PlatformParams>& list,
                                           const std::string& name) {
    for (const auto& p : list)
        if (p.name == name) return p;
    throw std::invalid_argument("unknown platform '" + name + "'");
}

}  // namespace wvrep
