#include <lhvlp/quantum.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace lhvlp;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(TwoQubit, SingletCorrelation) {
    EXPECT_NEAR(two_qubit_corr(0.0, 0.0), -1.0, 1e-15);
    EXPECT_NEAR(two_qubit_corr(pi / 4, pi / 4), 0.0, 1e-15);
    EXPECT_NEAR(two_qubit_corr(0.3, 0.5, Noise(0.25)), -0.75 * std::cos(0.8), 1e-15);
}

TEST(TwoQubit, ProbabilitiesSumAndReproduceCorrelation) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int t = 0; t < 50; ++t) {
        const double a = u(rng), b = u(rng), v = std::abs(u(rng)) / pi;
        double sum = 0.0, e = 0.0;
        for (int m : {-1, 1})
            for (int mp : {-1, 1}) {
                const double p = two_qubit_prob(m, mp, a, b, v);
                EXPECT_GE(p, 0.0);
                sum += p;
                e += m * mp * p;
            }
        EXPECT_NEAR(sum, 1.0, 1e-14);
        EXPECT_NEAR(e, two_qubit_corr(a, b, Noise::from_visibility(v)), 1e-14);
    }
}

TEST(TwoQubit, SphericalMatchesCoplanarOnEquator) {
    const double a = 0.4, b = 1.1;
    EXPECT_NEAR(two_qubit_corr(unit_vector(pi / 2, a), unit_vector(pi / 2, b)), -std::cos(a - b), 1e-14);
}

TEST(TwoQubit, RejectsBadInput) {
    EXPECT_THROW(two_qubit_prob(0, 1, 0.0, 0.0), DomainError);
    EXPECT_THROW(Noise(1.5), DomainError);
    EXPECT_THROW(two_qubit_prob(1, 1, 0.0, 0.0, -0.1), DomainError);
}

TEST(Ghz, CorrelationAndProbabilities) {
    const double angles[] = {0.0, pi / 2, pi / 2};
    EXPECT_NEAR(ghz_corr(angles), std::cos(pi), 1e-15);
    double sum = 0.0, e = 0.0;
    for (int m : {-1, 1})
        for (int l : {-1, 1})
            for (int k : {-1, 1}) {
                const double p = ghz3_prob(m, l, k, 0.2, 0.7, -0.4, 0.8);
                sum += p;
                e += m * l * k * p;
            }
    EXPECT_NEAR(sum, 1.0, 1e-14);
    const double ang[] = {0.2, 0.7, -0.4};
    EXPECT_NEAR(e, ghz_corr(ang, 0.8), 1e-14);
}

TEST(BellNumbers, ExactPowers) {
    EXPECT_EQ(bell_number(3, 3), Complex(1.0, 0.0));
    EXPECT_EQ(bell_number(4, -1), bell_number(4, 3));
    EXPECT_NEAR(std::abs(bell_number(5, 2) - std::polar(1.0, 4 * pi / 5)), 0.0, 1e-15);
    EXPECT_THROW(bell_number(1, 0), DomainError);
}

TEST(Multiport, MatchesExplicitStateVector) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 2 * pi);
    for (int n : {2, 3, 4}) {
        for (int parties : {2, 3}) {
            std::vector<PhaseVector> ph(parties, PhaseVector(n));
            for (auto& v : ph)
                for (auto& x : v) x = u(rng);
            const auto ref = oracle::multiport_distribution(n, ph);
            const auto table = multiport_table(n, ph);
            EXPECT_NEAR(table.sum(), 1.0, 1e-13);
            // library tables put the last party fastest, as does the oracle
            for (std::size_t s = 0; s < ref.size(); ++s) EXPECT_NEAR(table.values()[s], ref[s], 1e-13);
        }
    }
}

TEST(Multiport, CorrelationIsBellNumberAverage) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 2 * pi);
    for (int n : {2, 3, 5}) {
        std::vector<PhaseVector> ph(2, PhaseVector(n));
        for (auto& v : ph)
            for (auto& x : v) x = u(rng);
        const auto t = multiport_table(n, ph);
        Complex e{};
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) e += t(k, l) * bell_number(n, k + l);
        EXPECT_NEAR(std::abs(e - multiport_corr(n, ph)), 0.0, 1e-13);
    }
}

TEST(Multiport, PerfectCorrelationAtZeroPhases) {
    std::vector<PhaseVector> ph(2, PhaseVector(3, 0.0));
    // all photons leave through outputs whose indices sum to 0 mod 3
    EXPECT_NEAR(multiport_prob(3, ph, std::vector<int>{0, 0}), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(multiport_prob(3, ph, std::vector<int>{1, 2}), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(multiport_prob(3, ph, std::vector<int>{1, 1}), 0.0, 1e-15);
    EXPECT_NEAR(multiport_prob(3, ph, std::vector<int>{1, 1}, 0.3), 0.3 / 9.0, 1e-15);
    EXPECT_THROW(multiport_prob(3, ph, std::vector<int>{3, 0}), DomainError);
}

TEST(Multiport, MarginalsAreUniform) {
    std::vector<PhaseVector> ph = {{0.0, 0.3, 1.9}, {0.0, 2.2, 0.4}, {0.0, 1.0, 5.0}};
    const auto t = multiport_table(3, ph);
    for (std::size_t o = 0; o < 3; ++o)
        for (double p : t.marginal(o)) EXPECT_NEAR(p, 1.0 / 3.0, 1e-13);
}

TEST(Qutrit, GroupProbabilitiesRoundTrip) {
    std::vector<PhaseVector> ph = {{0.0, pi / 3, 2 * pi / 3}, {0.0, -pi / 6, -pi / 3}};
    const Complex e = multiport_corr(3, ph);
    const auto g = qutrit_probs_from_corr(e);
    EXPECT_NEAR(3 * (g.p1 + g.p2 + g.p3), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(qutrit_corr_from_probs(g) - e), 0.0, 1e-14);
    const auto t = multiport_table(3, ph);
    EXPECT_NEAR(t(0, 0), g.p1, 1e-14);
    EXPECT_NEAR(t(1, 1), g.p2, 1e-14);
    EXPECT_NEAR(t(0, 1), g.p3, 1e-14);
}

TEST(Multiport, SmallCases) {
    std::vector<PhaseVector> two(2, PhaseVector(2, 0.0));
    EXPECT_NEAR(multiport_prob(2, two, std::vector<int>{0, 0}), 0.5, 1e-15);
    std::vector<PhaseVector> three(2, PhaseVector(3, 0.0));
    // outputs 1 and 3 in 1-based labels: 1 + 3 - 2 is not a multiple of 3
    EXPECT_NEAR(multiport_prob(3, three, std::vector<int>{0, 2}), 0.0, 1e-15);
    EXPECT_NEAR(multiport_prob(3, three, std::vector<int>{0, 2}, 1.0), 1.0 / 9.0, 1e-15);
    std::vector<PhaseVector> four(3, PhaseVector(4, 0.7));
    EXPECT_NEAR(multiport_prob(4, four, std::vector<int>{1, 3, 2}, 1.0), 1.0 / 64.0, 1e-15);
}

TEST(Multiport, ThreeTritterValues) {
    const PhaseVector phi = {0, pi / 3, 2 * pi / 3};
    const std::vector<PhaseVector> all(3, phi);
    EXPECT_NEAR(std::abs(multiport_corr(3, all) - Complex(-1.0 / 3.0, 0.0)), 0.0, 1e-12);
    const std::vector<PhaseVector> swapped = {phi, phi, {0, 0, 0}};
    EXPECT_NEAR(std::abs(multiport_corr(3, swapped) - std::polar(1.0, -2 * pi / 3)), 0.0, 1e-12);
}

TEST(Ghz, TwoPartyMarginalsAreQuarter) {
    for (int m : {-1, 1})
        for (int l : {-1, 1}) {
            double s = 0;
            for (int k : {-1, 1}) s += ghz3_prob(m, l, k, 0.3, 1.7, -2.2);
            EXPECT_NEAR(s, 0.25, 1e-14);
        }
}
