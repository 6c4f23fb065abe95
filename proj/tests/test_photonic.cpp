#include <lhvlp/photonic.hpp>

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace lhvlp;

TEST(AlleyShih, TableIsNormalized) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 3.2);
    for (int t = 0; t < 20; ++t) {
        const auto tab = alley_shih_probs(u(rng), u(rng));
        EXPECT_NEAR(tab.sum(), 1.0, 1e-14);
        EXPECT_GE(tab.min(), 0.0);
    }
}

TEST(AlleyShih, ClosedFormMatchesTable) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 3.2);
    for (double alpha : {0.0, 0.3, 1.0})
        for (int t = 0; t < 10; ++t) {
            const double t1 = u(rng), t2 = u(rng);
            EXPECT_NEAR(alley_shih_corr_from_table(alley_shih_probs(t1, t2), alpha),
                        alley_shih_corr(2 * t1, -2 * t2, alpha), 1e-13);
        }
}

TEST(AlleyShih, ChshMaxima) {
    EXPECT_NEAR(alley_shih_chsh_max(1.0).value, 1 + std::numbers::sqrt2, 1e-4);
    EXPECT_NEAR(alley_shih_chsh_max(0.0).value, 2.33712, 1e-4);
}

TEST(AlleyShih, EfficiencyThresholds) {
    EXPECT_NEAR(alley_shih_eta_threshold(1.0), 0.91, 0.002);
    EXPECT_NEAR(alley_shih_eta_threshold(0.0), 0.926, 0.002);
    // counting undetected pairs as +1 lowers the threshold
    EXPECT_LT(alley_shih_eta_threshold(1.0, EfficiencyModel::CountUndetected), alley_shih_eta_threshold(1.0));
    const double eta = alley_shih_eta_threshold(0.5);
    const auto at = alley_shih_chsh_max(0.5, eta, EfficiencyModel::DiscardUndetected);
    EXPECT_NEAR(at.value, 2.0, 1e-6);
}

TEST(AlleyShih, RejectsBadParameters) {
    EXPECT_THROW(alley_shih_corr(0, 0, 1.2), DomainError);
    EXPECT_THROW(alley_shih_corr(0, 0, 0.5, 0.0), DomainError);
}

TEST(Swapping, TablesNormalizedAndMatchClosedForm) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 3.2);
    for (auto v : {SwappingVariant::Standard, SwappingVariant::Modified})
        for (int t = 0; t < 10; ++t) {
            const double t1 = u(rng), t2 = u(rng), a = u(rng) / 3.2;
            const auto tab = swapping_probs(v, t1, t2);
            EXPECT_NEAR(tab.sum(), 1.0, 1e-14);
            EXPECT_NEAR(swapping_corr_from_table(tab, a), swapping_corr(v, t1, t2, a), 1e-13);
        }
}

TEST(Swapping, ChshMaximaAndThresholds) {
    EXPECT_NEAR(swapping_chsh_max(SwappingVariant::Modified, 1.0).value, 2.16569, 1e-4);
    EXPECT_NEAR(swapping_chsh_max(SwappingVariant::Modified, 0.0).value, 2.11453, 1e-4);
    for (double a : {0.0, 0.5, 1.0})
        EXPECT_NEAR(swapping_chsh_max(SwappingVariant::Standard, a).value, swapping_standard_chsh_bound(a), 1e-6);
    const auto t = threshold_alpha(SwappingVariant::Standard);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t, (9 - std::numbers::sqrt2) / 8, 1e-5);
    // the modified scheme violates for every alpha
    EXPECT_EQ(threshold_alpha(SwappingVariant::Modified), 0.0);
}
