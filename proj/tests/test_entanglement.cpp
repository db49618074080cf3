#include <cmath>

#include <gtest/gtest.h>

#include "oracles/werner_oracle.hpp"
#include "wvrep/entanglement.hpp"

using namespace wvrep;

TEST(Werner, Entangledness) {
    EXPECT_FALSE(WernerState(1.0 / 3.0).entangled());
    EXPECT_TRUE(WernerState(0.34).entangled());
    EXPECT_THROW(WernerState(1.1), std::invalid_argument);
}

TEST(Oracle, DensityMatrixIsAState) {
    for (double v : {0.0, 0.3, 1.0}) {
        const auto rho = oracle::werner_density(v);
        EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
        EXPECT_NEAR((rho - rho.transpose()).norm(), 0.0, 1e-15);
    }
}

TEST(Concurrence, Examples) {
    EXPECT_EQ(concurrence(1.0), 1.0);
    EXPECT_EQ(concurrence(1.0 / 3.0), 0.0);
    EXPECT_NEAR(concurrence(0.909091), 0.8636365, 1e-15);
    EXPECT_THROW(concurrence(-0.01), std::invalid_argument);
    EXPECT_THROW(concurrence(1.01), std::invalid_argument);
}

TEST(Concurrence, MatchesDensityMatrixOracle) {
    for (int i = 0; i <= 1000; ++i) {
        const double v = i / 1000.0;
        EXPECT_NEAR(concurrence(v), oracle::werner_concurrence(v), 1e-10) << "V=" << v;
    }
}

TEST(EntanglementOfFormation, Examples) {
    EXPECT_EQ(entanglement_of_formation(1.0), 1.0);
    EXPECT_EQ(entanglement_of_formation(0.2), 0.0);
    // h((1 + sqrt(1 - C^2))/2), 40-digit references
    EXPECT_NEAR(entanglement_of_formation(10.0 / 11.0), 0.80800051114391682985, 1e-13);
    EXPECT_NEAR(entanglement_of_formation(0.909091), 0.80800069813339255080, 1e-13);
}

TEST(EntanglementOfFormation, ThresholdIsSharp) {
    EXPECT_EQ(entanglement_of_formation(1.0 / 3.0), 0.0);
    EXPECT_GT(entanglement_of_formation(1.0 / 3.0 + 1e-9), 0.0);
    for (int i = 0; i <= 333; ++i) EXPECT_EQ(entanglement_of_formation(i / 1000.0), 0.0);
}

TEST(EntanglementOfFormation, ChainAndMonotonicity) {
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double v = i / 1000.0;
        const double ef = entanglement_of_formation(v);
        const double c = concurrence(v);
        EXPECT_LE(0.0, ef);
        EXPECT_LE(ef, c + 1e-15);
        EXPECT_LE(c, v);
        if (v > 1.0 / 3.0) {
            EXPECT_GT(ef, prev);
        }
        prev = ef;
    }
}

TEST(EntanglementOfFormation, Continuous) {
    for (int i = 0; i < 1000; ++i) {
        const double v = i / 1000.0;
        EXPECT_LT(std::abs(entanglement_of_formation(v + 1e-7) - entanglement_of_formation(v)), 1e-4);
    }
}

TEST(BinaryEntropy, Edges) {
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_EQ(binary_entropy(1.0), 0.0);
    EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
}

TEST(EfOfMode, Examples) {
    EXPECT_NEAR(ef_of_mode(10.0, 0.0, 0.05, 1e5), 0.80800051114391682985, 1e-13);
    EXPECT_EQ(ef_of_mode(1000.0, 10 * tau_of_k(1000.0, 1e5), 0.05, 1e5), 0.0);
    // E_F(V(K=100, 750 us)), V = 0.85069787...
    EXPECT_NEAR(ef_of_mode(100.0, 750.0, 0.05, 1e5), 0.69017098755903608721, 1e-12);
}

TEST(EfOfMode, Monotone) {
    for (double k = 10.0; k <= 1000.0; k *= 1.6) {
        double prev = 1.0;
        for (double t = 0.0; t < 20000.0; t += 250.0) {
            const double e = ef_of_mode(k, t, 0.05, 1e5);
            EXPECT_LE(e, prev);
            EXPECT_LE(ef_of_mode(k * 1.6, t, 0.05, 1e5), e);
            prev = e;
        }
    }
}

TEST(MeanEf, FixedLifetimePlatformIsPointValue) {
    const ModeSpace space(10, 1000, 3.5e-3, 1e5);
    const auto lat = find_platform(builtin_platforms(), "Lattice-SM");
    const double v = visibility_at(5000.0, 0.05, 220000.0, Decoherence::exponential);
    EXPECT_DOUBLE_EQ(mean_ef(lat, space, 0.05, 5000.0), entanglement_of_formation(v));
}

TEST(MeanEf, LinkProductLowersEf) {
    const ModeSpace space(10, 1000, 3.5e-3, 1e5);
    const auto mux = builtin_platforms().front();
    EXPECT_LT(mean_ef(mux, space, 0.05, 300.0, 4), mean_ef(mux, space, 0.05, 300.0, 1));
}
