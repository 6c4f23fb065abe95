#pragma once

// Search over measurement settings for the lowest threshold visibility.

#include <lhvlp/errors.hpp>
#include <lhvlp/nelder_mead.hpp>
#include <lhvlp/quantum.hpp>
#include <lhvlp/threshold.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lhvlp {

enum class Family { QubitCoplanar, QubitSpherical, Ghz3Coplanar, QunitMultiport };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::QubitCoplanar: return "qubit-coplanar";
        case Family::QubitSpherical: return "qubit-spherical";
        case Family::Ghz3Coplanar: return "ghz3-coplanar";
        case Family::QunitMultiport: return "qunit-multiport";
    }
    return "unknown";
}

inline Family parse_family(std::string_view s) {
    if (s == "qubit-coplanar") return Family::QubitCoplanar;
    if (s == "qubit-spherical") return Family::QubitSpherical;
    if (s == "ghz3-coplanar") return Family::Ghz3Coplanar;
    if (s == "qunit-multiport") return Family::QunitMultiport;
    throw DomainError("unknown problem family: " + std::string(s));
}

/// A problem instance: family, settings per observer, multiport dimension.
struct Problem {
    Family family = Family::QubitCoplanar;
    std::vector<std::size_t> counts{2, 2};
    int dim = 2;  // outcome count; only used by the multiport family

    void validate() const {
        const std::size_t parties = family == Family::Ghz3Coplanar ? 3 : 2;
        if (counts.size() != parties) throw DomainError("wrong number of observers for this family");
        for (auto c : counts)
            if (c == 0) throw DomainError("each observer needs at least one setting");
        if (family == Family::QunitMultiport && dim < 2) throw DomainError("multiport dimension must be at least 2");
    }

    std::size_t total_settings() const {
        std::size_t s = 0;
        for (auto c : counts) s += c;
        return s;
    }

    /// Length of the flat settings vector.
    std::size_t dimension() const {
        validate();
        switch (family) {
            case Family::QubitCoplanar:
            case Family::Ghz3Coplanar: return total_settings();
            case Family::QubitSpherical: return 2 * total_settings();
            case Family::QunitMultiport: return total_settings() * static_cast<std::size_t>(dim - 1);
        }
        return 0;
    }
};

/// Phase vectors encoded by a flat settings vector; the first phase of each
/// vector is fixed to zero.
inline std::pair<std::vector<PhaseVector>, std::vector<PhaseVector>> multiport_settings(const Problem& p,
                                                                                       const std::vector<double>& x) {
    if (x.size() != p.dimension()) throw DomainError("settings vector has the wrong length");
    const auto free = static_cast<std::size_t>(p.dim - 1);
    std::vector<PhaseVector> a, b;
    std::size_t pos = 0;
    for (std::size_t o = 0; o < 2; ++o)
        for (std::size_t s = 0; s < p.counts[o]; ++s) {
            PhaseVector v(static_cast<std::size_t>(p.dim), 0.0);
            for (std::size_t k = 0; k < free; ++k) v[k + 1] = x[pos++];
            (o == 0 ? a : b).push_back(std::move(v));
        }
    return {std::move(a), std::move(b)};
}

/// Quantum correlation tensor for a settings vector. For the multiport family
/// this is the Bell-number correlation.
inline CorrelationTensor settings_tensor(const Problem& p, const std::vector<double>& x) {
    if (x.size() != p.dimension()) throw DomainError("settings vector has the wrong length");
    switch (p.family) {
        case Family::QubitCoplanar: {
            CorrelationTensor q({p.counts[0], p.counts[1]});
            for (std::size_t i = 0; i < p.counts[0]; ++i)
                for (std::size_t j = 0; j < p.counts[1]; ++j) q(i, j) = two_qubit_corr(x[i], x[p.counts[0] + j]);
            return q;
        }
        case Family::QubitSpherical: {
            CorrelationTensor q({p.counts[0], p.counts[1]});
            auto vec = [&](std::size_t s) { return unit_vector(x[2 * s], x[2 * s + 1]); };
            for (std::size_t i = 0; i < p.counts[0]; ++i)
                for (std::size_t j = 0; j < p.counts[1]; ++j) q(i, j) = two_qubit_corr(vec(i), vec(p.counts[0] + j));
            return q;
        }
        case Family::Ghz3Coplanar: {
            CorrelationTensor q(p.counts);
            std::vector<std::size_t> idx(3);
            for (std::size_t t = 0; t < q.size(); ++t) {
                detail::unflatten(p.counts, t, idx);
                const double angles[3] = {x[idx[0]], x[p.counts[0] + idx[1]], x[p.counts[0] + p.counts[1] + idx[2]]};
                q.values()[t] = ghz_corr(angles);
            }
            return q;
        }
        case Family::QunitMultiport: {
            auto [a, b] = multiport_settings(p, x);
            return multiport_corr_tensor(p.dim, a, b);
        }
    }
    throw DomainError("unknown problem family");
}

/// Upper cap on V in the optimizer's objective. Settings whose correlations
/// are already local get a value above one instead of a flat plateau.
inline constexpr double kExtendedVisibilityCap = 100.0;

/// Objective minimized over settings. Equals the threshold visibility
/// wherever that is below one, and keeps decreasing toward nonlocal settings
/// elsewhere.
inline double extended_threshold(const Problem& p, const std::vector<double>& x, const SimplexOptions& lp = {}) {
    if (p.family == Family::QunitMultiport) {
        auto [a, b] = multiport_settings(p, x);
        return 1.0 - joint_threshold(multiport_pair_tables(p.dim, a, b), p.dim, -1.0, 1.0, lp).value;
    }
    return correlation_threshold(settings_tensor(p, x), 2, kExtendedVisibilityCap, lp).value;
}

/// Threshold visibility at fixed settings, V in [0, 1]; for the multiport
/// family V = 1 - F.
inline double threshold_at(const Problem& p, const std::vector<double>& x, const SimplexOptions& lp = {}) {
    if (p.family == Family::QunitMultiport) {
        auto [a, b] = multiport_settings(p, x);
        return 1.0 - joint_threshold(multiport_pair_tables(p.dim, a, b), p.dim, 0.0, 1.0, lp).value;
    }
    return correlation_threshold(settings_tensor(p, x), 2, 1.0, lp).value;
}

/// Location of a 2x2 submatrix with all moduli near 1/sqrt(2) and exactly
/// one sign flipped (odd number of negative signs in the product).
struct BellSubmatrix {
    std::size_t row0, row1, col0, col1;
};

inline std::optional<BellSubmatrix> find_bell_submatrix(const CorrelationTensor& q, double tol = 1e-2) {
    if (q.rank() != 2 || !q.is_real(1e-12)) return std::nullopt;
    const double h = std::numbers::sqrt2 / 2.0;
    const auto rows = q.shape()[0], cols = q.shape()[1];
    auto ok = [&](std::size_t i, std::size_t j) { return std::abs(std::abs(q(i, j).real()) - h) <= tol; };
    for (std::size_t i0 = 0; i0 < rows; ++i0)
        for (std::size_t i1 = i0 + 1; i1 < rows; ++i1)
            for (std::size_t j0 = 0; j0 < cols; ++j0)
                for (std::size_t j1 = j0 + 1; j1 < cols; ++j1) {
                    if (!ok(i0, j0) || !ok(i0, j1) || !ok(i1, j0) || !ok(i1, j1)) continue;
                    const double prod = q(i0, j0).real() * q(i0, j1).real() * q(i1, j0).real() * q(i1, j1).real();
                    if (prod < 0.0) return BellSubmatrix{i0, i1, j0, j1};
                }
    return std::nullopt;
}

struct OptimizerConfig {
    std::size_t restarts = 30;
    std::uint64_t seed = 20010501;
    unsigned threads = 0;
    NelderMeadOptions nm{.max_iterations = 4000, .f_tol = 1e-10, .x_tol = 1e-7};
    SimplexOptions lp;
};

struct RestartRecord {
    std::size_t index = 0;
    double value = 0.0;  // objective at the restart's best point
    std::vector<double> point;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
    std::vector<double> trace;
};

struct ThresholdReport {
    Problem problem;
    double visibility = 1.0;  // best threshold visibility found
    double noise = 0.0;       // 1 - visibility
    std::vector<double> settings;
    CorrelationTensor tensor;
    std::optional<BellSubmatrix> bell_submatrix;
    std::size_t best_restart = 0;
    std::vector<RestartRecord> restarts;
};

inline ThresholdReport optimize_threshold(const Problem& p, const OptimizerConfig& cfg = {}) {
    p.validate();
    MultiStartOptions ms;
    ms.restarts = cfg.restarts;
    ms.seed = cfg.seed;
    ms.threads = cfg.threads;
    ms.nm = cfg.nm;
    auto objective = [&](const std::vector<double>& x) { return extended_threshold(p, x, cfg.lp); };
    auto runs = multi_start(objective, p.dimension(), ms);

    ThresholdReport rep;
    rep.problem = p;
    rep.best_restart = best_restart(runs);
    for (std::size_t r = 0; r < runs.size(); ++r) {
        RestartRecord rec;
        rec.index = r;
        rec.value = runs[r].value;
        rec.point = runs[r].point;
        rec.iterations = runs[r].iterations;
        rec.evaluations = runs[r].evaluations;
        rec.converged = runs[r].converged;
        rec.trace = std::move(runs[r].trace);
        rep.restarts.push_back(std::move(rec));
    }
    rep.settings = runs[rep.best_restart].point;
    rep.visibility = threshold_at(p, rep.settings, cfg.lp);
    rep.noise = 1.0 - rep.visibility;
    rep.tensor = settings_tensor(p, rep.settings);
    if (p.family == Family::QubitCoplanar || p.family == Family::QubitSpherical)
        rep.bell_submatrix = find_bell_submatrix(rep.tensor);
    return rep;
}

}  // namespace lhvlp
