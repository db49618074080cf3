#include <cmath>

#include <gtest/gtest.h>

#include "wvrep/entanglement.hpp"
#include "wvrep/mode_space.hpp"

using namespace wvrep;

TEST(Gamma, Rb87AtOneMicrokelvin) {
    const PhysicalConstants c;
    const double g = gamma_from_temperature(1e-6, c.atomic_mass_kg, c.boltzmann_j_per_k);
    EXPECT_NEAR(g, 102238.76627741637, 1e-8);
    EXPECT_NEAR(g / 1e5, 1.0, 0.03);
}

TEST(Gamma, SqrtTemperatureScaling) {
    const PhysicalConstants c;
    EXPECT_NEAR(gamma_from_temperature(4e-6, c.atomic_mass_kg), gamma_from_temperature(1e-6, c.atomic_mass_kg) / 2,
                1e-9);
}

TEST(Gamma, Rejects) {
    EXPECT_THROW(gamma_from_temperature(0.0, 1e-25), std::invalid_argument);
    EXPECT_THROW(gamma_from_temperature(-1.0, 1e-25), std::invalid_argument);
    EXPECT_THROW(gamma_from_temperature(1e-6, 0.0), std::invalid_argument);
}

TEST(Tau, Examples) {
    EXPECT_DOUBLE_EQ(tau_of_k(10.0, 1e5), 10000.0);
    EXPECT_DOUBLE_EQ(tau_of_k(1000.0, 1e5), 100.0);
    EXPECT_DOUBLE_EQ(tau_of_k(100.0, 1e5), 1000.0);
    EXPECT_THROW(tau_of_k(0.0, 1e5), std::invalid_argument);
}

TEST(ModeCount, Examples) {
    EXPECT_EQ(mode_count(10, 1000, 3.5e-3), 5497);
    EXPECT_EQ(mode_count(10, 10, 3.5e-3), 0);
    EXPECT_EQ(mode_count(10, 100, 3.5e-3), 54);
}

TEST(ModeCount, LinearInBeta) {
    for (double beta : {1e-3, 2e-3, 4e-3, 8e-3}) {
        const double exact = M_PI * beta * (1000.0 * 1000.0 - 100.0) / 2.0;
        EXPECT_LE(std::abs(mode_count(10, 1000, beta) - exact), 0.5);
    }
    EXPECT_EQ(mode_count(10, 1000, 2 * 3.5e-3), 10994);
}

TEST(ModeSpace, Invariants) {
    const ModeSpace s(10, 1000, 3.5e-3, 1e5);
    EXPECT_GE(s.tau(s.k_min()), s.tau(s.k_max()));
    EXPECT_GT(s.modes(), 0);
    EXPECT_EQ(s.grid_size(), 4096u);
    EXPECT_DOUBLE_EQ(s.nodes().front(), 10.0);
    EXPECT_DOUBLE_EQ(s.nodes().back(), 1000.0);
    EXPECT_THROW(ModeSpace(100, 10, 3.5e-3, 1e5), std::invalid_argument);
    EXPECT_THROW(ModeSpace(10, 100, 0.0, 1e5), std::invalid_argument);
}

TEST(ModeSpace, FromParamsUsesTemperature) {
    const auto s = ModeSpace::from_params(ModeSpaceParams{}, PhysicalConstants{});
    EXPECT_NEAR(s.gamma(), 102238.766, 1e-3);
    ModeSpaceParams p;
    p.gamma_us_mm = 1e5;
    EXPECT_DOUBLE_EQ(ModeSpace::from_params(p, PhysicalConstants{}).gamma(), 1e5);
}

TEST(WeightedAverage, Constant) {
    const ModeSpace s(10, 1000, 3.5e-3, 1e5);
    for (double c : {0.0, 1.0, -3.25, 1e-7, 4.2e8})
        EXPECT_NEAR(s.weighted_average([c](double) { return c; }), c, 1e-12 * std::abs(c));
}

TEST(WeightedAverage, LinearFunctionClosedForm) {
    // (2/3)(Kmax^3 - Kmin^3)/(Kmax^2 - Kmin^2)
    const ModeSpace s(10, 1000, 3.5e-3, 1e5);
    EXPECT_NEAR(s.weighted_average([](double k) { return k; }), 666.73267326732673267, 1e-3);
}

TEST(WeightedAverage, EfIntegrandConverges) {
    const double chi = 0.05;
    for (double t : {100.0, 750.0, 3000.0}) {
        const ModeSpace coarse(10, 1000, 3.5e-3, 1e5, 4096);
        const ModeSpace fine(10, 1000, 3.5e-3, 1e5, 8191);
        auto f = [&](const ModeSpace& s) {
            return s.weighted_average([&](double k) { return ef_of_mode(k, t, chi, s.gamma()); });
        };
        const double a = f(coarse), b = f(fine);
        // the E_F = 0 cutoff is a kink inside the domain, which caps the trapezoid order
        EXPECT_LT(std::abs(a - b), 1e-5 * std::abs(b) + 1e-12) << "t=" << t;
    }
}
