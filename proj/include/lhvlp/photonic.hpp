#pragma once

// Two-photon interference experiments with a value assignment that gives
// every non-standard event the value +1: a polarization Hong-Ou-Mandel setup
// and event-ready entanglement swapping, with partial single/double count
// distinguishability alpha and detector efficiency eta.

#include <lhvlp/errors.hpp>
#include <lhvlp/inequalities.hpp>
#include <lhvlp/nelder_mead.hpp>
#include <lhvlp/tensor.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

namespace lhvlp {

namespace detail {

inline void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("distinguishability must lie in [0, 1]");
}

inline void check_eta(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("efficiency must lie in (0, 1]");
}

/// Expected value of a double count at the "-" detector: read as +1 when
/// recognized (probability alpha), as -1 otherwise.
inline double misread_value(double alpha) { return alpha - (1.0 - alpha); }

}  // namespace detail

// --- polarization interferometer -----------------------------------------

/// Local events, index i - 1 for event i.
inline constexpr std::array<std::string_view, 6> kAlleyShihEvents = {
    "one photon in D-, none in D+",  "one photon in D+, none in D-", "no photons",
    "one photon in D+ and one in D-", "two photons in D+",           "two photons in D-",
};

/// Values assigned to the events when doubles are perfectly distinguished.
inline constexpr std::array<int, 6> kAlleyShihValues = {-1, 1, 1, 1, 1, 1};

/// Joint event probabilities for polarizer angles theta1, theta2 (6 x 6).
inline ProbabilityTable alley_shih_probs(double theta1, double theta2) {
    ProbabilityTable t({6, 6});
    const double c = std::cos(2.0 * (theta1 - theta2));
    const double s1 = std::sin(2.0 * theta1), s2 = std::sin(2.0 * theta2);
    const double c1 = std::cos(2.0 * theta1), c2 = std::cos(2.0 * theta2);
    t(0, 0) = t(1, 1) = (1.0 - c) / 8.0;
    t(1, 0) = t(0, 1) = (1.0 + c) / 8.0;
    t(4, 2) = t(5, 2) = s1 * s1 / 8.0;
    t(2, 4) = t(2, 5) = s2 * s2 / 8.0;
    t(3, 2) = c1 * c1 / 4.0;
    t(2, 3) = c2 * c2 / 4.0;
    return t;
}

/// Correlation of the assigned values for a table from alley_shih_probs.
inline double alley_shih_corr_from_table(const ProbabilityTable& t, double alpha) {
    detail::check_alpha(alpha);
    std::array<double, 6> v{};
    for (std::size_t i = 0; i < 6; ++i) v[i] = kAlleyShihValues[i];
    v[5] = detail::misread_value(alpha);
    double e = 0.0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) e += v[i] * v[j] * t(i, j);
    return e;
}

/// How undetected pairs enter the correlation.
enum class EfficiencyModel {
    CountUndetected,    // eta^2 E + (1 - eta)^2: events with no click anywhere count as +1
    DiscardUndetected,  // eta^2 E: events with no click anywhere are dropped
};

/// E(psi1, psi2; alpha, eta) with psi1 = 2 theta1 and psi2 = -2 theta2.
inline double alley_shih_corr(double psi1, double psi2, double alpha, double eta = 1.0,
                              EfficiencyModel model = EfficiencyModel::CountUndetected) {
    detail::check_alpha(alpha);
    detail::check_eta(eta);
    const double c1 = std::cos(psi1), c2 = std::cos(psi2);
    const double e = -0.5 * std::cos(psi1 + psi2) + 0.5 * alpha + 0.25 * (1.0 - alpha) * (c1 * c1 + c2 * c2);
    const double lost = model == EfficiencyModel::CountUndetected ? (1.0 - eta) * (1.0 - eta) : 0.0;
    return eta * eta * e + lost;
}

/// Four CHSH angles (a1, a2, b1, b2) and the value they reach.
struct ChshMax {
    double value = 0.0;
    std::array<double, 4> angles{};
};

struct ChshSearch {
    std::size_t restarts = 64;
    std::uint64_t seed = 7;
    unsigned threads = 1;
};

/// Maximizes a CHSH-type function of four angles.
template <class F>
ChshMax maximize_chsh(const F& chsh_of, const ChshSearch& search = {}) {
    MultiStartOptions ms;
    ms.restarts = search.restarts;
    ms.seed = search.seed;
    ms.threads = search.threads;
    ms.nm.f_tol = 1e-14;
    ms.nm.x_tol = 1e-9;
    ms.nm.record_trace = false;
    auto neg = [&](const std::vector<double>& x) { return -chsh_of(x[0], x[1], x[2], x[3]); };
    auto runs = multi_start(neg, 4, ms);
    const auto& best = runs[best_restart(runs)];
    auto polished = nelder_mead(neg, best.point, 1e-3, ms.nm);
    const auto& pick = polished.value < best.value ? polished : best;
    ChshMax out;
    out.value = -pick.value;
    for (std::size_t i = 0; i < 4; ++i) out.angles[i] = std::remainder(pick.point[i], 2.0 * std::numbers::pi);
    return out;
}

inline double alley_shih_chsh(double psi1, double psi1p, double psi2, double psi2p, double alpha, double eta = 1.0,
                              EfficiencyModel model = EfficiencyModel::CountUndetected) {
    auto e = [&](double a, double b) { return alley_shih_corr(a, b, alpha, eta, model); };
    return chsh(e, psi1, psi1p, psi2, psi2p);
}

/// Angles are (psi1, psi1', psi2, psi2').
inline ChshMax alley_shih_chsh_max(double alpha, double eta = 1.0,
                                   EfficiencyModel model = EfficiencyModel::CountUndetected,
                                   const ChshSearch& search = {}) {
    detail::check_alpha(alpha);
    detail::check_eta(eta);
    return maximize_chsh(
        [&](double a1, double a2, double b1, double b2) { return alley_shih_chsh(a1, a2, b1, b2, alpha, eta, model); },
        search);
}

/// Lowest efficiency at which the CHSH maximum still reaches 2.
inline double alley_shih_eta_threshold(double alpha, EfficiencyModel model = EfficiencyModel::DiscardUndetected,
                                       const ChshSearch& search = {}) {
    const double c = alley_shih_chsh_max(alpha, 1.0, EfficiencyModel::DiscardUndetected, search).value;
    if (c <= 2.0) throw DomainError("no violation even with perfect detectors");
    // undetected pairs add 2 (1 - eta)^2 to CHSH independently of the angles
    return model == EfficiencyModel::DiscardUndetected ? std::sqrt(2.0 / c) : 4.0 / (c + 2.0);
}

// --- entanglement swapping -------------------------------------------------

enum class SwappingVariant { Standard, Modified };

/// Local events at one station as (photons at +, photons at -).
enum class StationEvent : std::size_t { None, Plus, Minus, Both, DoublePlus, DoubleMinus };

inline constexpr std::array<std::string_view, 6> kStationEvents = {"0+ 0-", "1+ 0-", "0+ 1-",
                                                                   "1+ 1-", "2+ 0-", "0+ 2-"};

inline constexpr std::size_t event_index(StationEvent e) { return static_cast<std::size_t>(e); }

/// Joint station-event probabilities conditional on both trigger detectors firing.
inline ProbabilityTable swapping_probs(SwappingVariant v, double theta1, double theta2) {
    using E = StationEvent;
    ProbabilityTable t({6, 6});
    const double s = std::sin(theta1 - theta2), c = std::cos(theta1 - theta2);
    if (v == SwappingVariant::Standard) {
        const double k = 2.0 / 13.0;
        t(event_index(E::Both), event_index(E::None)) = k;
        t(event_index(E::DoublePlus), event_index(E::None)) = k;
        t(event_index(E::DoubleMinus), event_index(E::None)) = k;
        t(event_index(E::None), event_index(E::Both)) = k;
        t(event_index(E::None), event_index(E::DoublePlus)) = k;
        t(event_index(E::None), event_index(E::DoubleMinus)) = k;
        t(event_index(E::Plus), event_index(E::Plus)) = t(event_index(E::Minus), event_index(E::Minus)) = s * s / 26.0;
        t(event_index(E::Plus), event_index(E::Minus)) = t(event_index(E::Minus), event_index(E::Plus)) = c * c / 26.0;
    } else {
        const double c1 = std::cos(2.0 * theta1), c2 = std::cos(2.0 * theta2);
        const double s1 = std::sin(2.0 * theta1), s2 = std::sin(2.0 * theta2);
        t(event_index(E::Both), event_index(E::None)) = 0.4 * c1 * c1;
        t(event_index(E::DoublePlus), event_index(E::None)) = t(event_index(E::DoubleMinus), event_index(E::None)) = 0.2 * s1 * s1;
        t(event_index(E::None), event_index(E::Both)) = 0.4 * c2 * c2;
        t(event_index(E::None), event_index(E::DoublePlus)) = t(event_index(E::None), event_index(E::DoubleMinus)) = 0.2 * s2 * s2;
        t(event_index(E::Plus), event_index(E::Plus)) = t(event_index(E::Minus), event_index(E::Minus)) = s * s / 10.0;
        t(event_index(E::Plus), event_index(E::Minus)) = t(event_index(E::Minus), event_index(E::Plus)) = c * c / 10.0;
    }
    return t;
}

inline double swapping_corr_from_table(const ProbabilityTable& t, double alpha) {
    detail::check_alpha(alpha);
    const std::array<double, 6> v = {1.0, 1.0, -1.0, 1.0, 1.0, detail::misread_value(alpha)};
    double e = 0.0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) e += v[i] * v[j] * t(i, j);
    return e;
}

inline double swapping_corr(SwappingVariant v, double theta1, double theta2, double alpha) {
    detail::check_alpha(alpha);
    const double d = std::cos(2.0 * theta1 - 2.0 * theta2);
    if (v == SwappingVariant::Standard) return -d / 13.0 + 4.0 / 13.0 * (1.0 + 2.0 * alpha);
    const double c1 = std::cos(2.0 * theta1), c2 = std::cos(2.0 * theta2);
    return -d / 5.0 + 0.4 * (1.0 - alpha) * (c1 * c1 + c2 * c2) + 0.8 * alpha;
}

/// Angles are (theta1, theta1', theta2, theta2').
inline ChshMax swapping_chsh_max(SwappingVariant v, double alpha, const ChshSearch& search = {}) {
    detail::check_alpha(alpha);
    auto e = [&](double a, double b) { return swapping_corr(v, a, b, alpha); };
    return maximize_chsh([&](double a1, double a2, double b1, double b2) { return chsh(e, a1, a2, b1, b2); },
                         search);
}

/// Analytic ceiling of the standard-variant CHSH value: the setting-dependent
/// part has amplitude 1/13.
inline double swapping_standard_chsh_bound(double alpha) {
    return 8.0 / 13.0 * (1.0 + 2.0 * alpha) + 2.0 * std::numbers::sqrt2 / 13.0;
}

/// Smallest alpha at which the CHSH maximum reaches 2; empty if it never does,
/// zero if it does for every alpha.
inline std::optional<double> threshold_alpha(SwappingVariant v, const ChshSearch& search = {.restarts = 16}) {
    auto excess = [&](double a) { return swapping_chsh_max(v, a, search).value - 2.0; };
    if (excess(1.0) < 0.0) return std::nullopt;
    if (excess(0.0) >= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace lhvlp
