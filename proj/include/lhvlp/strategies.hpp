#pragma once

// Deterministic local strategies and the joint-distribution picture of local
// hidden variables.

#include <lhvlp/errors.hpp>
#include <lhvlp/quantum.hpp>
#include <lhvlp/tensor.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace lhvlp {

/// Largest strategy count a single space may hold.
inline constexpr std::size_t kMaxStrategies = std::size_t{1} << 26;

/// Predetermined outcomes of one observer, stored as Bell-number exponents:
/// exponent e stands for gamma_N^e (for qubits 0 -> +1, 1 -> -1).
struct StrategyOutcomes {
    int arity = 2;
    std::vector<int> exponents;

    std::size_t size() const noexcept { return exponents.size(); }
    Complex value(std::size_t setting) const { return bell_number(arity, exponents.at(setting)); }

    std::vector<Complex> values() const {
        std::vector<Complex> out;
        out.reserve(exponents.size());
        for (int e : exponents) out.push_back(bell_number(arity, e));
        return out;
    }
};

/// All deterministic strategies of one observer with `settings` measurement
/// settings and `arity` outcomes each. Strategy k encodes its outcome for
/// setting i in base-N digit i of k (little-endian).
///
/// A reduced space fixes digit 0 to zero, keeping one representative per
/// global Bell-number phase. This is sound for correlation-type problems as
/// long as at least one other observer keeps its full space.
class StrategySpace {
public:
    StrategySpace() = default;

    StrategySpace(int arity, std::size_t settings, bool reduced = false)
        : arity_(arity), settings_(settings), reduced_(reduced) {
        if (arity < 2) throw DomainError("outcome arity must be at least 2");
        if (settings == 0) throw DomainError("at least one setting is required");
        double full = std::pow(static_cast<double>(arity), static_cast<double>(settings));
        double n = reduced ? full / arity : full;
        if (n > static_cast<double>(kMaxStrategies))
            throw ResourceError("strategy space too large", static_cast<std::size_t>(std::min(n * settings, 1e18)));
        count_ = static_cast<std::size_t>(std::llround(n));
    }

    int arity() const noexcept { return arity_; }
    std::size_t settings() const noexcept { return settings_; }
    bool reduced() const noexcept { return reduced_; }
    std::size_t size() const noexcept { return count_; }

    /// Index into the unreduced space.
    std::uint64_t full_index(std::size_t k) const {
        if (k >= count_) throw DomainError("strategy index out of range");
        return reduced_ ? static_cast<std::uint64_t>(k) * arity_ : k;
    }

    int exponent(std::size_t k, std::size_t setting) const {
        if (setting >= settings_) throw DomainError("setting index out of range");
        std::uint64_t v = full_index(k);
        for (std::size_t i = 0; i < setting; ++i) v /= arity_;
        return static_cast<int>(v % arity_);
    }

    StrategyOutcomes outcomes(std::size_t k) const {
        StrategyOutcomes s{arity_, std::vector<int>(settings_)};
        std::uint64_t v = full_index(k);
        for (std::size_t i = 0; i < settings_; ++i) {
            s.exponents[i] = static_cast<int>(v % arity_);
            v /= arity_;
        }
        return s;
    }

    /// exponents()[k * settings + i] = exponent(k, i).
    std::vector<int> exponent_table() const {
        std::vector<int> t(count_ * settings_);
        for (std::size_t k = 0; k < count_; ++k) {
            std::uint64_t v = full_index(k);
            for (std::size_t i = 0; i < settings_; ++i) {
                t[k * settings_ + i] = static_cast<int>(v % arity_);
                v /= arity_;
            }
        }
        return t;
    }

private:
    int arity_ = 2;
    std::size_t settings_ = 1;
    bool reduced_ = false;
    std::size_t count_ = 2;
};

inline StrategySpace enumerate_qubit_strategies(std::size_t settings, bool reduce = false) {
    return StrategySpace(2, settings, reduce);
}

inline StrategySpace enumerate_bellnumber_strategies(int arity, std::size_t settings, bool reduce = false) {
    return StrategySpace(arity, settings, reduce);
}

/// Spaces for a correlation problem: every observer but the last is reduced.
inline std::vector<StrategySpace> correlation_spaces(int arity, const std::vector<std::size_t>& settings,
                                                     bool reduce = true) {
    std::vector<StrategySpace> out;
    for (std::size_t i = 0; i < settings.size(); ++i)
        out.emplace_back(arity, settings[i], reduce && i + 1 < settings.size());
    return out;
}

/// Outer product M_ij = A_i B_j, computed with exact exponent arithmetic.
inline CorrelationTensor strategy_product(const StrategyOutcomes& a, const StrategyOutcomes& b) {
    if (a.arity != b.arity) throw DomainError("strategies use different outcome alphabets");
    if (a.size() == 0 || b.size() == 0) throw DomainError("empty strategy");
    CorrelationTensor m({a.size(), b.size()});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            m(i, j) = bell_number(a.arity, a.exponents[i] + b.exponents[j]);
    return m;
}

// --- joint distributions -------------------------------------------------

/// Joint distribution of all N_A + N_B observables of a two-observer
/// experiment. Entries are indexed row-major by (k_1..k_NA, l_1..l_NB).
class JointDistribution {
public:
    JointDistribution() = default;

    JointDistribution(int arity, std::size_t settings_a, std::size_t settings_b)
        : arity_(arity), na_(settings_a), nb_(settings_b) {
        if (arity < 2) throw DomainError("outcome arity must be at least 2");
        if (settings_a == 0 || settings_b == 0) throw DomainError("each observer needs at least one setting");
        const double n = std::pow(static_cast<double>(arity), static_cast<double>(settings_a + settings_b));
        if (n > static_cast<double>(kMaxStrategies))
            throw ResourceError("joint distribution too large", static_cast<std::size_t>(std::min(n * 8.0, 1e18)));
        shape_.assign(na_ + nb_, static_cast<std::size_t>(arity));
        p_.assign(static_cast<std::size_t>(std::llround(n)), 0.0);
    }

    int arity() const noexcept { return arity_; }
    std::size_t settings_a() const noexcept { return na_; }
    std::size_t settings_b() const noexcept { return nb_; }
    const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return p_.size(); }
    std::span<const double> values() const noexcept { return p_; }
    std::span<double> values() noexcept { return p_; }

    double& at(std::span<const std::size_t> outcomes) { return p_[detail::flat_offset(shape_, outcomes)]; }
    double at(std::span<const std::size_t> outcomes) const { return p_[detail::flat_offset(shape_, outcomes)]; }

    double sum() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

    bool is_valid(double tol = 1e-12) const {
        for (double v : p_)
            if (v < -tol) return false;
        return std::abs(sum() - 1.0) <= tol;
    }

private:
    int arity_ = 2;
    std::size_t na_ = 0;
    std::size_t nb_ = 0;
    std::vector<std::size_t> shape_;
    std::vector<double> p_;
};

/// N x N table of outcomes of A_i and B_j, summing J over all other observables.
inline ProbabilityTable joint_to_marginals(const JointDistribution& j, std::size_t i, std::size_t jb) {
    if (i >= j.settings_a() || jb >= j.settings_b()) throw DomainError("setting index out of range");
    const auto n = static_cast<std::size_t>(j.arity());
    ProbabilityTable t({n, n}, {i, jb});
    std::vector<std::size_t> idx(j.shape().size());
    const auto vals = j.values();
    for (std::size_t off = 0; off < vals.size(); ++off) {
        detail::unflatten(j.shape(), off, idx);
        t(idx[i], idx[j.settings_a() + jb]) += vals[off];
    }
    return t;
}

/// A discrete local hidden variable model: each atom carries a weight and,
/// per setting, a distribution over the N local outcomes.
struct LhvModel {
    struct Atom {
        double weight = 0.0;
        std::vector<std::vector<double>> response_a;  // [setting][outcome]
        std::vector<std::vector<double>> response_b;
    };

    int arity = 2;
    std::size_t settings_a = 0;
    std::size_t settings_b = 0;
    std::vector<Atom> atoms;

    /// P(k, l | A_i, B_j) predicted by the model.
    ProbabilityTable pair_table(std::size_t i, std::size_t j) const {
        if (i >= settings_a || j >= settings_b) throw DomainError("setting index out of range");
        const auto n = static_cast<std::size_t>(arity);
        ProbabilityTable t({n, n}, {i, j});
        for (const auto& at : atoms)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) t(k, l) += at.weight * at.response_a[i][k] * at.response_b[j][l];
        return t;
    }
};

/// One atom per joint outcome sequence of positive weight, responding
/// deterministically with that sequence.
inline LhvModel lhv_from_joint(const JointDistribution& j) {
    LhvModel m;
    m.arity = j.arity();
    m.settings_a = j.settings_a();
    m.settings_b = j.settings_b();
    const auto n = static_cast<std::size_t>(j.arity());
    std::vector<std::size_t> idx(j.shape().size());
    const auto vals = j.values();
    for (std::size_t off = 0; off < vals.size(); ++off) {
        if (vals[off] <= 0.0) continue;
        detail::unflatten(j.shape(), off, idx);
        LhvModel::Atom a;
        a.weight = vals[off];
        a.response_a.assign(m.settings_a, std::vector<double>(n, 0.0));
        a.response_b.assign(m.settings_b, std::vector<double>(n, 0.0));
        for (std::size_t s = 0; s < m.settings_a; ++s) a.response_a[s][idx[s]] = 1.0;
        for (std::size_t s = 0; s < m.settings_b; ++s) a.response_b[s][idx[m.settings_a + s]] = 1.0;
        m.atoms.push_back(std::move(a));
    }
    return m;
}

/// J(k, l) = sum_lambda w(lambda) prod_i P_i(k_i | lambda) prod_j P_j(l_j | lambda).
inline JointDistribution joint_from_lhv(const LhvModel& m, double tol = 1e-9) {
    if (m.atoms.empty()) throw ValidationError("model has no atoms");
    const auto n = static_cast<std::size_t>(m.arity);
    double wsum = 0.0;
    for (const auto& a : m.atoms) {
        if (a.weight < -tol) throw ValidationError("negative atom weight");
        if (a.response_a.size() != m.settings_a || a.response_b.size() != m.settings_b)
            throw ValidationError("response table does not match settings count");
        for (const auto* side : {&a.response_a, &a.response_b})
            for (const auto& r : *side) {
                if (r.size() != n) throw ValidationError("response distribution has wrong arity");
                double s = 0.0;
                for (double p : r) {
                    if (p < -tol) throw ValidationError("negative response probability");
                    s += p;
                }
                if (std::abs(s - 1.0) > tol) throw ValidationError("response distribution is not normalized");
            }
        wsum += a.weight;
    }
    if (std::abs(wsum - 1.0) > tol) throw ValidationError("atom weights do not sum to one");

    JointDistribution j(m.arity, m.settings_a, m.settings_b);
    std::vector<std::size_t> idx(j.shape().size());
    auto vals = j.values();
    for (std::size_t off = 0; off < vals.size(); ++off) {
        detail::unflatten(j.shape(), off, idx);
        double acc = 0.0;
        for (const auto& a : m.atoms) {
            double p = a.weight;
            for (std::size_t s = 0; s < m.settings_a && p != 0.0; ++s) p *= a.response_a[s][idx[s]];
            for (std::size_t s = 0; s < m.settings_b && p != 0.0; ++s) p *= a.response_b[s][idx[m.settings_a + s]];
            acc += p;
        }
        vals[off] = acc;
    }
    return j;
}

}  // namespace lhvlp
