#include <lhvlp/inequalities.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace lhvlp;

TEST(Chsh, SingletMaximum) {
    const double pi = std::numbers::pi;
    auto e = [](double a, double b) { return -two_qubit_corr(a, b); };
    EXPECT_NEAR(chsh(e, 0, pi / 2, -pi / 4, pi / 4), 2 * std::numbers::sqrt2, 1e-12);
    EXPECT_TRUE(chsh_violated(2.1));
    EXPECT_FALSE(chsh_violated(-2.0));
    EXPECT_DOUBLE_EQ(chsh({1, 1, 1, -1}), 4.0);
}

TEST(Chsh, DeterministicBound) {
    for (int a1 : {-1, 1})
        for (int a2 : {-1, 1})
            for (int b1 : {-1, 1})
                for (int b2 : {-1, 1})
                    EXPECT_LE(std::abs(chsh({double(a1 * b1), double(a2 * b1), double(a1 * b2), double(a2 * b2)})), 2.0);
}

TEST(Geometric, NormByGridSummation) {
    for (int m = 2; m <= 10; ++m) EXPECT_NEAR(geometric_Q_norm(m), std::pow(3.0, m) / 2.0, 1e-9);
}

TEST(Geometric, ClosedFormGridSum) {
    for (int m = 2; m <= 10; ++m) EXPECT_NEAR(q_M(m), q_M_grid(m), 1e-9 * std::pow(2.0, m));
}

TEST(Geometric, LocalMaximumMatchesBruteForce) {
    for (int m = 2; m <= 3; ++m) {
        const auto q = geometric_Q(m);
        const double brute = oracle::brute_force_local_max(q, m, 3);
        EXPECT_NEAR(geometric_lhv_max(m), brute, 1e-9);
        EXPECT_NEAR(brute, std::pow(2.0, m - 1) * std::numbers::sqrt3, 1e-9);
    }
}

TEST(Geometric, Thresholds) {
    const double v[] = {76.9, 51.3, 34.2, 22.8};
    for (int m = 2; m <= 5; ++m) EXPECT_NEAR(100 * geometric_visibility_threshold(m), v[m - 2], 0.1);
    EXPECT_NEAR(100 * geometric_visibility_threshold(10), 3.0, 0.1);
    const double eta[] = {87.0, 79.8, 76.5, 74.4};
    for (int m = 2; m <= 5; ++m) EXPECT_NEAR(100 * geometric_efficiency_threshold(m), eta[m - 2], 0.1);
    const auto g = geometric_bound_and_violation(4);
    EXPECT_NEAR(g.ratio, g.quantum / g.bound, 1e-12);
}

TEST(Geometric, Rounding) {
    EXPECT_DOUBLE_EQ(round_significant(0.76980035), 0.77);
    EXPECT_DOUBLE_EQ(round_significant(76.980035), 77.0);
    EXPECT_DOUBLE_EQ(round_significant(0.0), 0.0);
}

TEST(Geometric, RejectsBadPartyCount) {
    EXPECT_THROW(geometric_Q(1), DomainError);
    EXPECT_THROW(geometric_lhv_max(5), ResourceError);
}

TEST(Functional, ClosedFormAndThreshold) {
    const auto r = functional_inequality(1.0);
    EXPECT_TRUE(r.violated);
    EXPECT_FALSE(functional_inequality(0.75).violated);
    EXPECT_TRUE(functional_inequality(0.76).violated);
    EXPECT_NEAR(functional_inequality(0.75).lhs, functional_inequality(0.75).rhs, 1e-12);
}

TEST(Functional, MonteCarloWithinThreeSigma) {
    for (double v : {1.0, 0.6}) {
        const auto mc = functional_norm_mc(v, 200000, 17);
        EXPECT_NEAR(mc.mean, functional_inequality(v).lhs, 3 * mc.std_error);
    }
}
