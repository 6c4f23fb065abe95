#pragma once

// Threshold linear programs: the correlation form (maximize V such that V Q
// is a mixture of deterministic strategy products) and the joint-probability
// form (minimize the noise F such that all pair tables are marginals of one
// joint distribution).

#include <lhvlp/errors.hpp>
#include <lhvlp/lp.hpp>
#include <lhvlp/quantum.hpp>
#include <lhvlp/strategies.hpp>
#include <lhvlp/tensor.hpp>

#include <cmath>
#include <numbers>
#include <vector>

namespace lhvlp {

inline constexpr double kWeightFloor = 1e-7;

/// A correlation LP together with the bookkeeping needed to read it back.
struct CorrelationLp {
    LinearProgram lp;
    std::vector<StrategySpace> spaces;
    std::vector<std::size_t> shape;  // settings per observer
    std::size_t strategy_columns = 0;
    bool split_complex = false;

    std::size_t v_column() const noexcept { return strategy_columns; }

    /// Per-observer strategy indices of LP column c (last observer fastest).
    std::vector<std::size_t> strategies_of(std::size_t c) const {
        std::vector<std::size_t> s(spaces.size());
        for (std::size_t o = spaces.size(); o-- > 0;) {
            s[o] = c % spaces[o].size();
            c /= spaces[o].size();
        }
        return s;
    }
};

/// Unknowns: one weight per tuple of strategies plus V. One row per settings
/// tuple (two when the problem is complex), one normalization row.
/// `v_upper` bounds V from above; 1 for the physical problem.
inline CorrelationLp build_correlation_lp(const CorrelationTensor& q, std::vector<StrategySpace> spaces,
                                          double v_upper = 1.0) {
    if (spaces.size() != q.rank()) throw DomainError("one strategy space per observer is required");
    const int n = spaces.front().arity();
    for (std::size_t o = 0; o < spaces.size(); ++o) {
        if (spaces[o].arity() != n) throw DomainError("strategy spaces use different arities");
        if (spaces[o].settings() != q.shape()[o]) throw DomainError("tensor shape does not match strategy spaces");
    }
    CorrelationLp out;
    out.shape = q.shape();
    out.split_complex = n > 2 || !q.is_real(1e-15);

    double cols = 1.0;
    for (const auto& s : spaces) cols *= static_cast<double>(s.size());
    const std::size_t tuples = q.size();
    const std::size_t rows = tuples * (out.split_complex ? 2 : 1) + 1;
    const double bytes = (cols + 1.0) * static_cast<double>(rows) * sizeof(double);
    if (cols > static_cast<double>(kMaxStrategies) || bytes > 4e9)
        throw ResourceError("correlation LP too large", static_cast<std::size_t>(std::min(bytes, 1e18)));
    out.strategy_columns = static_cast<std::size_t>(cols);

    out.lp = LinearProgram(rows, out.strategy_columns + 1, LinearProgram::Sense::Maximize);
    auto& lp = out.lp;

    std::vector<std::vector<int>> tables;
    for (const auto& s : spaces) tables.push_back(s.exponent_table());
    std::vector<double> re(n), im(n);
    for (int e = 0; e < n; ++e) {
        const Complex g = bell_number(n, e);
        re[e] = g.real();
        im[e] = g.imag();
    }
    const std::size_t norm_row = rows - 1;
    std::vector<std::size_t> strat(spaces.size()), setting(spaces.size());
    for (std::size_t c = 0; c < out.strategy_columns; ++c) {
        std::size_t rem = c;
        for (std::size_t o = spaces.size(); o-- > 0;) {
            strat[o] = rem % spaces[o].size();
            rem /= spaces[o].size();
        }
        auto col = lp.column(c);
        for (std::size_t t = 0; t < tuples; ++t) {
            detail::unflatten(out.shape, t, setting);
            int e = 0;
            for (std::size_t o = 0; o < spaces.size(); ++o)
                e += tables[o][strat[o] * spaces[o].settings() + setting[o]];
            e %= n;
            if (out.split_complex) {
                col[2 * t] = re[e];
                col[2 * t + 1] = im[e];
            } else {
                col[t] = re[e];
            }
        }
        col[norm_row] = 1.0;
    }
    auto vcol = lp.column(out.v_column());
    for (std::size_t t = 0; t < tuples; ++t) {
        const Complex v = q.values()[t];
        if (out.split_complex) {
            vcol[2 * t] = -v.real();
            vcol[2 * t + 1] = -v.imag();
        } else {
            vcol[t] = -v.real();
        }
    }
    lp.rhs()[norm_row] = 1.0;
    lp.objective()[out.v_column()] = 1.0;
    lp.upper()[out.v_column()] = v_upper;
    out.spaces = std::move(spaces);
    return out;
}

/// Convenience overload with the default reduced spaces.
inline CorrelationLp build_correlation_lp(const CorrelationTensor& q, int arity = 2, double v_upper = 1.0) {
    return build_correlation_lp(q, correlation_spaces(arity, q.shape()), v_upper);
}

/// A joint-probability LP with its layout.
struct JointLp {
    LinearProgram lp;
    int arity = 2;
    std::size_t settings_a = 0;
    std::size_t settings_b = 0;
    std::size_t joint_columns = 0;

    std::size_t f_column() const noexcept { return joint_columns; }
};

/// tables[i][j] holds the pure-state table for settings (A_i, B_j). Every
/// marginal must equal F / N^2 + (1 - F) P. F is bounded to [f_lower, f_upper].
inline JointLp build_joint_lp(const std::vector<std::vector<ProbabilityTable>>& tables, int arity,
                              double f_lower = 0.0, double f_upper = 1.0) {
    if (arity < 2) throw DomainError("outcome arity must be at least 2");
    if (tables.empty() || tables.front().empty()) throw DomainError("at least one pair table is required");
    const std::size_t na = tables.size();
    const std::size_t nb = tables.front().size();
    const auto n = static_cast<std::size_t>(arity);
    for (const auto& row : tables) {
        if (row.size() != nb) throw DomainError("ragged table grid");
        for (const auto& t : row)
            if (t.arity().size() != 2 || t.arity()[0] != n || t.arity()[1] != n)
                throw DomainError("inconsistent outcome arity across tables");
    }
    JointDistribution shape_probe(arity, na, nb);
    JointLp out;
    out.arity = arity;
    out.settings_a = na;
    out.settings_b = nb;
    out.joint_columns = shape_probe.size();
    const std::size_t rows = na * nb * n * n + 1;
    out.lp = LinearProgram(rows, out.joint_columns + 1, LinearProgram::Sense::Minimize);
    auto& lp = out.lp;

    auto row_of = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return ((i * nb + j) * n + k) * n + l;
    };
    std::vector<std::size_t> idx(na + nb);
    for (std::size_t c = 0; c < out.joint_columns; ++c) {
        detail::unflatten(shape_probe.shape(), c, idx);
        auto col = lp.column(c);
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < nb; ++j) col[row_of(i, j, idx[i], idx[na + j])] = 1.0;
        col[rows - 1] = 1.0;
    }
    const double uniform = 1.0 / static_cast<double>(n * n);
    auto fcol = lp.column(out.f_column());
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    const double p = tables[i][j](k, l);
                    fcol[row_of(i, j, k, l)] = p - uniform;
                    lp.rhs()[row_of(i, j, k, l)] = p;
                }
    lp.rhs()[rows - 1] = 1.0;
    lp.objective()[out.f_column()] = 1.0;
    lp.lower()[out.f_column()] = f_lower;
    lp.upper()[out.f_column()] = f_upper;
    return out;
}

/// Pure-state pair tables of two multiports with the given local phase settings.
inline std::vector<std::vector<ProbabilityTable>> multiport_pair_tables(int dim,
                                                                       const std::vector<PhaseVector>& phases_a,
                                                                       const std::vector<PhaseVector>& phases_b) {
    std::vector<std::vector<ProbabilityTable>> t(phases_a.size());
    for (std::size_t i = 0; i < phases_a.size(); ++i)
        for (std::size_t j = 0; j < phases_b.size(); ++j) {
            const std::vector<PhaseVector> pair{phases_a[i], phases_b[j]};
            auto tab = multiport_table(dim, pair);
            t[i].push_back(ProbabilityTable(tab.arity(), {i, j}));
            std::copy(tab.values().begin(), tab.values().end(), t[i].back().values().begin());
        }
    return t;
}

/// Bell-number correlation tensor of two multiports.
inline CorrelationTensor multiport_corr_tensor(int dim, const std::vector<PhaseVector>& phases_a,
                                               const std::vector<PhaseVector>& phases_b) {
    CorrelationTensor q({phases_a.size(), phases_b.size()});
    for (std::size_t i = 0; i < phases_a.size(); ++i)
        for (std::size_t j = 0; j < phases_b.size(); ++j) {
            const std::vector<PhaseVector> pair{phases_a[i], phases_b[j]};
            q(i, j) = multiport_corr(dim, pair);
        }
    return q;
}

// --- reading solutions ---------------------------------------------------

struct ModelTerm {
    std::vector<std::size_t> strategies;       // per observer, index into its space
    std::vector<std::vector<int>> exponents;   // per observer, per setting
    double weight = 0.0;
};

struct LhvModelReport {
    double threshold = 0.0;
    std::vector<ModelTerm> terms;       // weights above the floor
    CorrelationTensor reproduced;       // recomputed from all positive weights
    double weight_sum = 0.0;
    double max_deviation = 0.0;         // |reproduced - threshold * Q|
};

inline LhvModelReport extract_model(const LpSolution& sol, const CorrelationLp& meta, const CorrelationTensor& q,
                                    double floor = kWeightFloor) {
    if (!sol.optimal()) throw NumericalError(std::string("no optimal solution to read a model from: ") + to_string(sol.status));
    LhvModelReport rep;
    rep.threshold = sol.x[meta.v_column()];
    rep.reproduced = CorrelationTensor(meta.shape);
    const int n = meta.spaces.front().arity();
    std::vector<std::size_t> setting(meta.shape.size());
    for (std::size_t c = 0; c < meta.strategy_columns; ++c) {
        const double w = sol.x[c];
        if (w <= 0.0) continue;
        rep.weight_sum += w;
        const auto strat = meta.strategies_of(c);
        std::vector<StrategyOutcomes> outs;
        for (std::size_t o = 0; o < strat.size(); ++o) outs.push_back(meta.spaces[o].outcomes(strat[o]));
        auto vals = rep.reproduced.values();
        for (std::size_t t = 0; t < vals.size(); ++t) {
            detail::unflatten(meta.shape, t, setting);
            long long e = 0;
            for (std::size_t o = 0; o < outs.size(); ++o) e += outs[o].exponents[setting[o]];
            vals[t] += w * bell_number(n, e);
        }
        if (w > floor) {
            ModelTerm term;
            term.strategies = strat;
            term.weight = w;
            for (auto& s : outs) term.exponents.push_back(std::move(s.exponents));
            rep.terms.push_back(std::move(term));
        }
    }
    for (std::size_t t = 0; t < q.size(); ++t)
        rep.max_deviation = std::max(rep.max_deviation, std::abs(rep.reproduced.values()[t] - rep.threshold * q.values()[t]));
    return rep;
}

struct JointModelReport {
    double noise = 0.0;
    JointDistribution joint;
    double max_deviation = 0.0;  // worst marginal mismatch
};

inline JointModelReport extract_joint_model(const LpSolution& sol, const JointLp& meta,
                                            const std::vector<std::vector<ProbabilityTable>>& tables) {
    if (!sol.optimal()) throw NumericalError(std::string("no optimal solution to read a model from: ") + to_string(sol.status));
    JointModelReport rep;
    rep.noise = sol.x[meta.f_column()];
    rep.joint = JointDistribution(meta.arity, meta.settings_a, meta.settings_b);
    auto v = rep.joint.values();
    for (std::size_t c = 0; c < meta.joint_columns; ++c) v[c] = std::max(0.0, sol.x[c]);
    const double uniform = 1.0 / (static_cast<double>(meta.arity) * meta.arity);
    for (std::size_t i = 0; i < meta.settings_a; ++i)
        for (std::size_t j = 0; j < meta.settings_b; ++j) {
            const auto m = joint_to_marginals(rep.joint, i, j);
            for (std::size_t k = 0; k < static_cast<std::size_t>(meta.arity); ++k)
                for (std::size_t l = 0; l < static_cast<std::size_t>(meta.arity); ++l) {
                    const double target = rep.noise * uniform + (1.0 - rep.noise) * tables[i][j](k, l);
                    rep.max_deviation = std::max(rep.max_deviation, std::abs(m(k, l) - target));
                }
        }
    return rep;
}

// --- one-call helpers ----------------------------------------------------

struct ThresholdResult {
    double value = 0.0;
    LpSolution solution;
};

inline ThresholdResult check_solution(LpSolution sol, std::size_t column) {
    if (sol.status == LpStatus::NumericalFailure || sol.status == LpStatus::IterationLimit)
        throw NumericalError(std::string("LP solver failed: ") + to_string(sol.status));
    if (!sol.optimal()) throw NumericalError(std::string("unexpected LP status: ") + to_string(sol.status));
    ThresholdResult r;
    r.value = sol.x[column];
    r.solution = std::move(sol);
    return r;
}

/// Largest V such that V Q has a local model (capped at v_upper).
inline ThresholdResult correlation_threshold(const CorrelationTensor& q, int arity = 2, double v_upper = 1.0,
                                             const SimplexOptions& opt = {}) {
    auto lp = build_correlation_lp(q, arity, v_upper);
    return check_solution(solve_lp(lp.lp, opt), lp.v_column());
}

/// Smallest noise fraction F making all pair tables local.
inline ThresholdResult joint_threshold(const std::vector<std::vector<ProbabilityTable>>& tables, int arity,
                                       double f_lower = 0.0, double f_upper = 1.0, const SimplexOptions& opt = {}) {
    auto lp = build_joint_lp(tables, arity, f_lower, f_upper);
    return check_solution(solve_lp(lp.lp, opt), lp.f_column());
}

/// Factor by which measured correlations must be scaled to admit a local
/// model; values below one mean the data violate local realism.
inline double analyze_measured_tensor(const CorrelationTensor& qexp, const SimplexOptions& opt = {}) {
    if (qexp.size() == 0) throw ValidationError("empty correlation matrix");
    for (const auto& v : qexp.values()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ValidationError("non-finite correlation value");
        if (std::abs(v.imag()) > 1e-9) throw ValidationError("measured qubit correlations must be real");
        if (std::abs(v.real()) > 1.0 + 1e-9) throw ValidationError("correlation value outside [-1, 1]");
    }
    return correlation_threshold(qexp, 2, 1.0, opt).value;
}

}  // namespace lhvlp
