#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "model_params.hpp"

namespace wvrep {

/// Thermal constant sqrt(m / (k_B T)) in us/mm (1 s/m = 1e3 us/mm).
inline double gamma_from_temperature(double temperature_k, double mass_kg,
                                     double boltzmann_j_per_k = PhysicalConstants{}.boltzmann_j_per_k) {
    if (!(temperature_k > 0.0)) throw std::invalid_argument("gamma_from_temperature: T must be > 0");
    if (!(mass_kg > 0.0)) throw std::invalid_argument("gamma_from_temperature: mass must be > 0");
    return std::sqrt(mass_kg / (boltzmann_j_per_k * temperature_k)) * 1e3;
}

/// Spin-wave lifetime tau(K) = gamma / K in microseconds.
inline double tau_of_k(double k_per_mm, double gamma_us_mm) {
    if (!(k_per_mm > 0.0)) throw std::invalid_argument("tau_of_k: K must be > 0");
    return gamma_us_mm / k_per_mm;
}

/// Number of mode pairs in [k_min, k_max]: half of the 2 pi K beta dK density integral.
inline long mode_count(double k_min, double k_max, double beta) {
    return std::lround(std::numbers::pi * beta * (k_max * k_max - k_min * k_min) / 2.0);
}

/// Wavevector band of a multimode memory together with its quadrature grid.
class ModeSpace {
public:
    ModeSpace(double k_min, double k_max, double beta, double gamma_us_mm, int grid_points = 4096)
        : k_min_(k_min), k_max_(k_max), beta_(beta), gamma_(gamma_us_mm) {
        if (!(k_min > 0.0 && k_min < k_max)) throw std::invalid_argument("ModeSpace: need 0 < k_min < k_max");
        if (!(beta > 0.0)) throw std::invalid_argument("ModeSpace: beta must be > 0");
        if (!(gamma_us_mm > 0.0)) throw std::invalid_argument("ModeSpace: gamma must be > 0");
        if (grid_points < 2) throw std::invalid_argument("ModeSpace: need at least 2 grid points");
        build_grid(grid_points);
    }

    static ModeSpace from_params(const ModeSpaceParams& p, const PhysicalConstants& c) {
        p.validate();
        const double gamma = p.gamma_us_mm.value_or(
            gamma_from_temperature(p.temperature_k, c.atomic_mass_kg, c.boltzmann_j_per_k));
        return ModeSpace(p.k_min_per_mm, p.k_max_per_mm, p.beta_mm2, gamma, p.grid_points);
    }

    double k_min() const noexcept { return k_min_; }
    double k_max() const noexcept { return k_max_; }
    double beta() const noexcept { return beta_; }
    double gamma() const noexcept { return gamma_; }
    std::size_t grid_size() const noexcept { return nodes_.size(); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }

    double tau(double k_per_mm) const { return tau_of_k(k_per_mm, gamma_); }
    long modes() const { return mode_count(k_min_, k_max_, beta_); }

    /// Density-weighted mean of f over the band, composite trapezoid on the fixed grid.
    template <class F>
    double weighted_average(F&& f) const {
        double num = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) num += weights_[i] * f(nodes_[i]);
        return num / weight_sum_;
    }

private:
    void build_grid(int n) {
        nodes_.resize(static_cast<std::size_t>(n));
        weights_.resize(nodes_.size());
        const double h = (k_max_ - k_min_) / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double k = i == n - 1 ? k_max_ : k_min_ + h * i;
            nodes_[i] = k;
            // 2 pi beta cancels in the ratio; only the K weight remains
            weights_[i] = (i == 0 || i == n - 1 ? 0.5 * h : h) * k;
        }
        weight_sum_ = 0.0;
        for (double w : weights_) weight_sum_ += w;
    }

    double k_min_, k_max_, beta_, gamma_;
    std::vector<double> nodes_, weights_;
    double weight_sum_ = 0.0;
};

}  // namespace wvrep
