#pragma once

#include <cmath>
#include <cstdint>

namespace wvrep {

/// SplitMix64 (Steele, Lea & Flood 2014). Each Monte Carlo trial owns one
/// stream whose state is derived from (seed, trial index) by `for_trial`, so
/// results do not depend on how trials are spread over threads.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial) noexcept {
        return SplitMix64(mix(seed ^ mix(trial + kGolden)));
    }

    static constexpr std::uint64_t min() noexcept { return 0; }
    static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

    std::uint64_t operator()() noexcept {
        state_ += kGolden;
        return mix(state_);
    }

    /// Uniform on (0, 1], 53-bit resolution.
    double uniform_open0() noexcept { return static_cast<double>((operator()() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform on [0, 1).
    double uniform() noexcept { return static_cast<double>(operator()() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Number of trials up to and including the first success, by inversion.
    /// `log_q` is log(1 - p), precomputed by the caller; p == 1 is log_q == -inf.
    std::uint64_t geometric(double log_q) noexcept {
        if (std::isinf(log_q)) return 1;
        const double k = std::floor(std::log(uniform_open0()) / log_q);
        if (!(k < 1.8e19)) return ~std::uint64_t{0};
        return static_cast<std::uint64_t>(k) + 1;
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace wvrep
