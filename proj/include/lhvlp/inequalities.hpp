#pragma once

// Closed-form Bell-inequality evaluators: CHSH, the geometric GHZ inequality
// on a three-setting grid, and the functional inequality over all settings.

#include <lhvlp/errors.hpp>
#include <lhvlp/nelder_mead.hpp>
#include <lhvlp/quantum.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace lhvlp {

/// The four correlations entering CHSH; a1/a2 and b1/b2 are the two settings
/// of each observer.
struct ChshInput {
    double a1b1 = 0.0;
    double a2b1 = 0.0;
    double a1b2 = 0.0;
    double a2b2 = 0.0;
};

/// E(a1,b1) + E(a2,b1) + E(a1,b2) - E(a2,b2); local models stay within [-2, 2].
inline double chsh(const ChshInput& e) { return e.a1b1 + e.a2b1 + e.a1b2 - e.a2b2; }

template <class Corr>
double chsh(const Corr& corr, double a1, double a2, double b1, double b2) {
    return chsh({corr(a1, b1), corr(a2, b1), corr(a1, b2), corr(a2, b2)});
}

inline bool chsh_violated(double value) { return std::abs(value) > 2.0; }

// --- geometric inequality for M-qubit GHZ correlations --------------------

inline constexpr std::size_t kGridSettings = 3;

/// Local phases of the grid: party 0 uses pi/6, pi/2, 5pi/6; all others
/// use 0, pi/3, 2pi/3.
inline double grid_phase(std::size_t party, std::size_t setting) {
    if (setting >= kGridSettings) throw DomainError("grid setting out of range");
    const double pi = std::numbers::pi;
    return party == 0 ? pi / 6.0 + setting * pi / 3.0 : setting * pi / 3.0;
}

namespace detail {

inline void check_parties(int m, int max = 20) {
    if (m < 2) throw DomainError("at least two parties are required");
    if (m > max) throw ResourceError("grid too large", static_cast<std::size_t>(std::pow(3.0, m) * sizeof(double)));
}

/// Calls f(grid index digits, sum of phases) for all 3^M grid points.
template <class F>
void for_each_grid_point(int m, F&& f) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
    const auto total = static_cast<std::uint64_t>(std::llround(std::pow(3.0, m)));
    for (std::uint64_t t = 0; t < total; ++t) {
        std::uint64_t v = t;
        double s = 0.0;
        for (std::size_t l = 0; l < idx.size(); ++l) {
            idx[l] = v % 3;
            v /= 3;
            s += grid_phase(l, idx[l]);
        }
        f(idx, s);
    }
}

}  // namespace detail

/// GHZ correlations cos(sum of phases) over the grid, flattened with party 0
/// as the least significant ternary digit.
inline std::vector<double> geometric_Q(int m) {
    detail::check_parties(m);
    std::vector<double> q;
    detail::for_each_grid_point(m, [&](const auto&, double s) { q.push_back(std::cos(s)); });
    return q;
}

/// ||Q||^2 by direct summation; equals 3^M / 2.
inline double geometric_Q_norm(int m) {
    detail::check_parties(m);
    double acc = 0.0;
    detail::for_each_grid_point(m, [&](const auto&, double s) {
        const double c = std::cos(s);
        acc += c * c;
    });
    return acc;
}

struct GeometricBound {
    double bound = 0.0;    // 2^{M-1} sqrt 3, the local realistic maximum
    double quantum = 0.0;  // 3^M / 2
    double ratio = 0.0;    // (3/2)^M / sqrt 3
};

inline GeometricBound geometric_bound_and_violation(int m) {
    detail::check_parties(m, 1000);
    GeometricBound g;
    g.bound = std::pow(2.0, m - 1) * std::numbers::sqrt3;
    g.quantum = std::pow(3.0, m) / 2.0;
    g.ratio = std::pow(1.5, m) / std::numbers::sqrt3;
    return g;
}

/// Closed form of the grid sum of cos(sum of phases): -2^M sin((M-1) pi / 3).
inline double q_M(int m) {
    detail::check_parties(m, 1000);
    const int r = (m - 1) % 6;  // sine of multiples of pi/3 taken exactly
    static constexpr std::array<double, 6> sines = {0.0, 1.0, 1.0, 0.0, -1.0, -1.0};
    return -std::pow(2.0, m) * sines[r] * std::numbers::sqrt3 / 2.0;
}

inline double q_M_grid(int m) {
    detail::check_parties(m);
    double acc = 0.0;
    detail::for_each_grid_point(m, [&](const auto&, double s) { acc += std::cos(s); });
    return acc;
}

/// Exhaustive maximum of sum_grid Q * prod_l I_l over all deterministic
/// local assignments I_l: {3 settings} -> {+1, -1}.
inline double geometric_lhv_max(int m) {
    detail::check_parties(m, 4);
    const auto q = geometric_Q(m);
    const std::uint64_t assignments = std::uint64_t{1} << (3 * m);
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t a = 0; a < assignments; ++a) {
        double s = 0.0;
        for (std::size_t t = 0; t < q.size(); ++t) {
            std::size_t v = t;
            int parity = 0;
            for (int l = 0; l < m; ++l) {
                parity ^= static_cast<int>((a >> (3 * l + v % 3)) & 1u);
                v /= 3;
            }
            s += parity ? -q[t] : q[t];
        }
        best = std::max(best, s);
    }
    return best;
}

/// Critical visibility sqrt(3) (2/3)^M.
inline double geometric_visibility_threshold(int m) {
    detail::check_parties(m, 1000);
    return std::numbers::sqrt3 * std::pow(2.0 / 3.0, m);
}

/// Root eta in (0, 1) of eta^M 3^M / 2 = 2^{M-1} sqrt 3 - |q_M| (1 - eta)^M.
inline double geometric_efficiency_threshold(int m) {
    detail::check_parties(m, 1000);
    const double quantum = std::pow(3.0, m) / 2.0;
    const double bound = std::pow(2.0, m - 1) * std::numbers::sqrt3;
    const double q = std::abs(q_M(m));
    auto g = [&](double eta) { return std::pow(eta, m) * quantum - bound + q * std::pow(1.0 - eta, m); };
    double lo = 1e-6, hi = 1.0 - 1e-6;
    if (!(g(lo) < 0.0 && g(hi) > 0.0)) throw DomainError("no efficiency threshold in (0, 1)");
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Rounds to `digits` significant figures.
inline double round_significant(double x, int digits = 3) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(x)))));
    return std::round(x * scale) / scale;
}

// --- functional inequality over all settings --------------------------------

struct FunctionalResult {
    double lhs = 0.0;  // ||P_QM||^2
    double rhs = 0.0;  // local realistic bound of <P_QM | P_HV>
    bool violated = false;
};

inline FunctionalResult functional_inequality(double visibility) {
    detail::check_visibility(visibility);
    const double s = 4.0 * std::numbers::pi * std::numbers::pi;
    FunctionalResult r;
    r.lhs = s + visibility * visibility / 3.0 * s;
    r.rhs = s + visibility / 4.0 * s;
    r.violated = r.lhs > r.rhs;
    return r;
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Estimates ||P_QM||^2 = sum_{m,m'} int dOmega_a int dOmega_b P^2 by
/// sampling both directions uniformly on the sphere.
inline MonteCarloEstimate functional_norm_mc(double visibility, std::size_t samples, std::uint64_t seed = 1) {
    detail::check_visibility(visibility);
    if (samples < 2) throw DomainError("at least two samples are required");
    std::mt19937_64 rng(seed);
    auto direction = [&] {
        const double z = 2.0 * unit_uniform(rng) - 1.0;
        const double phi = 2.0 * std::numbers::pi * unit_uniform(rng);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return Vec3{r * std::cos(phi), r * std::sin(phi), z};
    };
    const double volume = 16.0 * std::numbers::pi * std::numbers::pi;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const Vec3 a = direction(), b = direction();
        double f = 0.0;
        for (int m : {-1, 1})
            for (int mp : {-1, 1}) {
                const double p = two_qubit_prob(m, mp, a, b, visibility);
                f += p * p;
            }
        f *= volume;
        sum += f;
        sum_sq += f * f;
    }
    const double n = static_cast<double>(samples);
    MonteCarloEstimate e;
    e.mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * e.mean * e.mean) / (n - 1.0));
    e.std_error = std::sqrt(var / n);
    return e;
}

}  // namespace lhvlp
