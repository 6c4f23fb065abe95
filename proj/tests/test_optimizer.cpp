#include <lhvlp/nelder_mead.hpp>
#include <lhvlp/optimizer.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <numbers>

using namespace lhvlp;

namespace {

double rosenbrock(const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
}

}  // namespace

TEST(NelderMead, Rosenbrock) {
    NelderMeadOptions o;
    o.max_iterations = 10000;
    o.f_tol = 1e-14;
    o.x_tol = 1e-9;
    const auto r = nelder_mead(rosenbrock, std::vector<double>{-1.2, 1.0}, 0.5, o);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.point[0], 1.0, 1e-5);
    EXPECT_NEAR(r.point[1], 1.0, 1e-5);
    EXPECT_EQ(r.trace.size(), r.iterations);
    for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
}

TEST(NelderMead, Quadratic) {
    auto f = [](const std::vector<double>& x) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - 0.5) * (x[i] - 0.5);
        return s;
    };
    const auto r = nelder_mead(f, std::vector<double>(4, 3.0), 1.0);
    for (double v : r.point) EXPECT_NEAR(v, 0.5, 1e-4);
}

TEST(NelderMead, StopsAtIterationCap) {
    NelderMeadOptions o;
    o.max_iterations = 5;
    const auto r = nelder_mead(rosenbrock, std::vector<double>{-1.2, 1.0}, 0.5, o);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 5u);
}

TEST(NelderMead, RejectsBadCoefficients) {
    NelderMeadOptions o;
    o.expansion = 0.5;
    EXPECT_THROW(nelder_mead(rosenbrock, std::vector<double>{0, 0}, 1.0, o), DomainError);
    EXPECT_THROW(nelder_mead(rosenbrock, std::vector<std::vector<double>>{{0, 0}}), DomainError);
}

TEST(MultiStart, DeterministicAcrossThreadCounts) {
    MultiStartOptions o;
    o.restarts = 8;
    o.seed = 99;
    o.threads = 1;
    const auto a = multi_start(rosenbrock, 2, o);
    o.threads = 4;
    const auto b = multi_start(rosenbrock, 2, o);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].value, b[i].value);
        EXPECT_EQ(a[i].point, b[i].point);
    }
    EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
}

TEST(MultiStart, EnvironmentThreadCount) {
    ::setenv("LHVLP_THREADS", "3", 1);
    EXPECT_EQ(default_threads(), 3u);
    ::unsetenv("LHVLP_THREADS");
    EXPECT_GE(default_threads(), 1u);
}

TEST(Optimizer, ProblemDimensions) {
    Problem p{Family::QubitSpherical, {2, 3}, 2};
    EXPECT_EQ(p.dimension(), 10u);
    p = {Family::QunitMultiport, {2, 2}, 3};
    EXPECT_EQ(p.dimension(), 8u);
    p = {Family::Ghz3Coplanar, {2, 2}, 2};
    EXPECT_THROW(p.validate(), DomainError);
    EXPECT_EQ(parse_family("ghz3-coplanar"), Family::Ghz3Coplanar);
    EXPECT_THROW(parse_family("qutrit"), DomainError);
}

TEST(Optimizer, ExtendedObjectiveAgreesBelowOne) {
    const Problem p{Family::QubitCoplanar, {2, 2}, 2};
    const std::vector<double> bell = {0, std::numbers::pi / 2, std::numbers::pi / 4, -std::numbers::pi / 4};
    EXPECT_NEAR(extended_threshold(p, bell), threshold_at(p, bell), 1e-9);
    const std::vector<double> local = {0, 0, std::numbers::pi / 4, std::numbers::pi / 4};
    EXPECT_GT(extended_threshold(p, local), 1.0);
    EXPECT_NEAR(threshold_at(p, local), 1.0, 1e-12);
}

TEST(Optimizer, TwoByTwoFindsBellAngles) {
    OptimizerConfig cfg;
    cfg.restarts = 10;
    const auto r = optimize_threshold({Family::QubitCoplanar, {2, 2}, 2}, cfg);
    EXPECT_NEAR(r.visibility, 1 / std::numbers::sqrt2, 1e-4);
    EXPECT_GE(r.visibility, 1 / std::numbers::sqrt2 - 1e-6);
    EXPECT_TRUE(r.bell_submatrix.has_value());
    EXPECT_EQ(r.restarts.size(), 10u);
}

TEST(Optimizer, SameSeedSameResult) {
    OptimizerConfig cfg;
    cfg.restarts = 4;
    cfg.seed = 77;
    const Problem p{Family::QubitCoplanar, {2, 3}, 2};
    const auto a = optimize_threshold(p, cfg), b = optimize_threshold(p, cfg);
    EXPECT_EQ(a.visibility, b.visibility);
    EXPECT_EQ(a.settings, b.settings);
}

TEST(Optimizer, GhzAndSpherical) {
    OptimizerConfig cfg;
    cfg.restarts = 6;
    EXPECT_NEAR(optimize_threshold({Family::Ghz3Coplanar, {2, 2, 2}, 2}, cfg).visibility, 0.5, 1e-4);
    EXPECT_NEAR(optimize_threshold({Family::QubitSpherical, {2, 2}, 2}, cfg).visibility, 1 / std::numbers::sqrt2,
                1e-4);
}

TEST(BellSubmatrix, Detection) {
    const double h = std::sqrt(0.5);
    auto q = CorrelationTensor::from_rows({{h, 0.2, h}, {0.1, 0.3, 0.9}, {-h, 0.0, h}});
    const auto b = find_bell_submatrix(q);
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(b->row0, 0u);
    EXPECT_EQ(b->row1, 2u);
    EXPECT_EQ(b->col0, 0u);
    EXPECT_EQ(b->col1, 2u);
    q(2, 0) = h;
    EXPECT_FALSE(find_bell_submatrix(q).has_value());
}
