#include <cmath>

#include <gtest/gtest.h>

#include "wvrep/link_physics.hpp"

using namespace wvrep;

TEST(Transmission, Examples) {
    EXPECT_DOUBLE_EQ(transmission(0.0, 0.2), 1.0);
    EXPECT_NEAR(transmission(100.0, 0.2), 0.01, 1e-15);
    // 10^-1.5, high-precision reference
    EXPECT_NEAR(transmission(75.0, 0.2), 0.0316227766016837933, 1e-16);
}

TEST(Transmission, RejectsNegative) {
    EXPECT_THROW(transmission(-1.0, 0.2), std::invalid_argument);
    EXPECT_THROW(transmission(1.0, -0.2), std::invalid_argument);
}

TEST(Transmission, Multiplicative) {
    for (double z1 : {0.0, 3.5, 17.0, 120.0, 333.3})
        for (double z2 : {0.0, 1.0, 49.9, 250.0}) {
            const double whole = transmission(z1 + z2, 0.2);
            EXPECT_NEAR(whole, transmission(z1, 0.2) * transmission(z2, 0.2), 1e-12 * whole);
        }
}

TEST(PSingle, Examples) {
    EXPECT_NEAR(p_single(0.05, 0.2, 1.0), 1.0e-4, 1e-18);
    EXPECT_EQ(p_single(0.05, 0.2, 0.0), 0.0);
    EXPECT_NEAR(p_single(0.05, 0.2, 0.0316228), 1.00000147984e-7, 1e-18);
}

TEST(PEng, Boundaries) {
    for (int m : {1, 50, 5500}) {
        EXPECT_EQ(p_eng(0.0, m, true), 0.0);
        EXPECT_EQ(p_eng(1.0, m, false), 1.0);
    }
}

TEST(PEng, MultiplexedExample) {
    // 1 - 0.9999^10000, 40-digit reference
    EXPECT_NEAR(p_eng(1e-4, 100, true), 0.63213895356707007589, 1e-14);
}

TEST(PEng, SingleModeEqualsP1) {
    for (double p : {1e-9, 1e-4, 0.3, 0.999}) {
        EXPECT_EQ(p_eng(p, 1, false), p);
        EXPECT_EQ(p_eng(p, 1, true), p);
    }
}

TEST(PEng, TinyProbabilityHugeExponentIsStable) {
    // naive pow(1-p, M^2) loses every digit of p here
    const double p = 1e-12;
    const double n = 5500.0 * 5500.0;
    EXPECT_NEAR(p_eng(p, 5500, true), n * p * (1 - n * p / 2 + n * p * n * p / 6), 1e-12 * n * p);
}

TEST(PEng, MonotoneAndMultiplexEqualsSquaredParallel) {
    for (int m : {1, 2, 7, 40, 100}) {
        double prev = 0.0;
        for (double p = 1e-6; p < 1.0; p *= 3.1) {
            const double v = p_eng(p, m, true);
            EXPECT_GE(v, prev);
            prev = v;
            EXPECT_EQ(v, p_eng(p, m * m, false));
            EXPECT_GE(p_eng(p, m + 1, false), p_eng(p, m, false));
            EXPECT_LE(p, v);
        }
    }
}

TEST(G2, Examples) {
    EXPECT_DOUBLE_EQ(g2_from_noise(0.05), 21.0);
    EXPECT_DOUBLE_EQ(g2_from_noise(1.0), 2.0);
    EXPECT_DOUBLE_EQ(g2_from_noise(0.5), 3.0);
    EXPECT_THROW(g2_from_noise(0.0), std::invalid_argument);
    EXPECT_THROW(g2_from_noise(-0.1), std::invalid_argument);
}

TEST(VisibilityFromG2, Examples) {
    EXPECT_EQ(visibility_from_g2(1.0), 0.0);
    EXPECT_NEAR(visibility_from_g2(21.0), 10.0 / 11.0, 1e-15);
    EXPECT_GT(visibility_from_g2(1e12), 1.0 - 1e-11);
    EXPECT_LT(visibility_from_g2(1e12), 1.0);
    EXPECT_THROW(visibility_from_g2(0.99), std::invalid_argument);
}

TEST(VisibilityFromG2, NoiseIdentity) {
    for (double chi = 1e-4; chi < 10.0; chi *= 1.7)
        EXPECT_NEAR(visibility_from_g2(g2_from_noise(chi)), 1.0 / (1.0 + 2.0 * chi), 1e-12);
}

TEST(VisibilityAt, Examples) {
    for (double tau : {100.0, 1e4})
        EXPECT_NEAR(visibility_at(0.0, 0.05, tau, Decoherence::gaussian), 1.0 / 1.1, 1e-15);
    EXPECT_LT(visibility_at(1e6, 0.05, 100.0, Decoherence::gaussian), 1e-300);
    EXPECT_EQ(visibility_at(1e6, 0.05, 100.0, Decoherence::gaussian), 0.0);
    // K = 100/mm, gamma = 1e5 us/mm -> tau = 1000 us; 1/(1 + 0.1 e^0.5625)
    EXPECT_NEAR(visibility_at(750.0, 0.05, 1000.0, Decoherence::gaussian), 0.85069787353807741065, 1e-14);
    EXPECT_NEAR(visibility_at(1000.0, 0.05, 1000.0, Decoherence::exponential), 1.0 / (1.0 + 0.1 * std::exp(1.0)),
                1e-15);
}

TEST(VisibilityAt, MonotoneInTimeAndLifetime) {
    for (auto kind : {Decoherence::gaussian, Decoherence::exponential}) {
        double prev = 1.0;
        for (double t = 0.0; t < 5000.0; t += 37.0) {
            const double v = visibility_at(t, 0.05, 800.0, kind);
            EXPECT_LT(v, prev);
            prev = v;
            // shorter lifetime (larger K) never helps
            EXPECT_LE(visibility_at(t, 0.05, 400.0, kind), v);
        }
    }
}

TEST(VisibilityAt, Rejects) {
    EXPECT_THROW(visibility_at(-1.0, 0.05, 100.0, Decoherence::gaussian), std::invalid_argument);
    EXPECT_THROW(visibility_at(1.0, 0.0, 100.0, Decoherence::gaussian), std::invalid_argument);
}

TEST(LinkBudget, OrderingInvariant) {
    const PhysicalConstants c;
    PlatformParams p;
    p.name = "x";
    p.modes = 30;
    p.eta_m = 0.5;
    for (double l0 = 0.0; l0 < 400.0; l0 += 25.0) {
        const auto b = link_budget(p, l0, c);
        EXPECT_LE(0.0, b.p1);
        EXPECT_LE(b.p1, b.p_g);
        EXPECT_LE(b.p_g, 1.0);
        EXPECT_DOUBLE_EQ(b.eta_t_half, transmission(l0 / 2, 0.2));
    }
}
