#pragma once

#include <lhvlp/errors.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace lhvlp {

using Complex = std::complex<double>;

namespace detail {

inline std::size_t shape_size(std::span<const std::size_t> shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

/// Row-major flat offset; the last index runs fastest.
inline std::size_t flat_offset(std::span<const std::size_t> shape, std::span<const std::size_t> index) {
    if (index.size() != shape.size()) throw DomainError("index rank does not match tensor rank");
    std::size_t off = 0;
    for (std::size_t d = 0; d < shape.size(); ++d) {
        if (index[d] >= shape[d]) throw DomainError("tensor index out of range");
        off = off * shape[d] + index[d];
    }
    return off;
}

/// Inverse of flat_offset.
inline void unflatten(std::span<const std::size_t> shape, std::size_t off, std::span<std::size_t> index) {
    for (std::size_t d = shape.size(); d-- > 0;) {
        index[d] = off % shape[d];
        off /= shape[d];
    }
}

}  // namespace detail

/// Correlation values indexed by one setting per observer.
///
/// Qubit problems use real entries (imaginary parts zero); Bell-number
/// correlations of quNits are complex of modulus at most one.
class CorrelationTensor {
public:
    CorrelationTensor() = default;

    explicit CorrelationTensor(std::vector<std::size_t> shape)
        : shape_(std::move(shape)), values_(detail::shape_size(shape_)) {
        if (shape_.empty()) throw DomainError("correlation tensor needs at least one observer");
        for (auto s : shape_)
            if (s == 0) throw DomainError("every observer needs at least one setting");
    }

    CorrelationTensor(std::vector<std::size_t> shape, std::vector<Complex> values)
        : CorrelationTensor(std::move(shape)) {
        if (values.size() != values_.size()) throw DomainError("value count does not match tensor shape");
        values_ = std::move(values);
    }

    /// Two-observer real matrix, rows = settings of the first observer.
    static CorrelationTensor from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty() || rows.front().empty()) throw DomainError("empty matrix");
        CorrelationTensor t({rows.size(), rows.front().size()});
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.front().size()) throw DomainError("ragged matrix");
            for (std::size_t j = 0; j < rows[i].size(); ++j) t(i, j) = rows[i][j];
        }
        return t;
    }

    const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const Complex> values() const noexcept { return values_; }
    std::span<Complex> values() noexcept { return values_; }

    Complex& at(std::span<const std::size_t> index) { return values_[detail::flat_offset(shape_, index)]; }
    const Complex& at(std::span<const std::size_t> index) const {
        return values_[detail::flat_offset(shape_, index)];
    }

    Complex& operator()(std::size_t i, std::size_t j) {
        const std::size_t idx[] = {i, j};
        return at(idx);
    }
    const Complex& operator()(std::size_t i, std::size_t j) const {
        const std::size_t idx[] = {i, j};
        return at(idx);
    }

    bool is_real(double tol = 0.0) const {
        for (const auto& v : values_)
            if (std::abs(v.imag()) > tol) return false;
        return true;
    }

    double max_modulus() const {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    CorrelationTensor scaled(double s) const {
        CorrelationTensor out = *this;
        for (auto& v : out.values_) v *= s;
        return out;
    }

private:
    std::vector<std::size_t> shape_;
    std::vector<Complex> values_;
};

/// Outcome-indexed probabilities for one fixed tuple of settings.
class ProbabilityTable {
public:
    static constexpr double kNegativeTolerance = 1e-14;
    static constexpr double kSumTolerance = 1e-12;

    ProbabilityTable() = default;

    ProbabilityTable(std::vector<std::size_t> arity, std::vector<std::size_t> settings = {})
        : arity_(std::move(arity)), settings_(std::move(settings)), p_(detail::shape_size(arity_), 0.0) {
        if (arity_.empty()) throw DomainError("probability table needs at least one observer");
        for (auto a : arity_)
            if (a == 0) throw DomainError("zero outcome arity");
    }

    const std::vector<std::size_t>& arity() const noexcept { return arity_; }
    const std::vector<std::size_t>& settings() const noexcept { return settings_; }
    std::span<const double> values() const noexcept { return p_; }
    std::span<double> values() noexcept { return p_; }

    double& at(std::span<const std::size_t> outcome) { return p_[detail::flat_offset(arity_, outcome)]; }
    double at(std::span<const std::size_t> outcome) const { return p_[detail::flat_offset(arity_, outcome)]; }

    double& operator()(std::size_t k, std::size_t l) {
        const std::size_t idx[] = {k, l};
        return at(idx);
    }
    double operator()(std::size_t k, std::size_t l) const {
        const std::size_t idx[] = {k, l};
        return at(idx);
    }

    double sum() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

    double min() const {
        double m = p_.empty() ? 0.0 : p_.front();
        for (double v : p_) m = std::min(m, v);
        return m;
    }

    /// Distribution of a single observer's outcome.
    std::vector<double> marginal(std::size_t observer) const {
        if (observer >= arity_.size()) throw DomainError("observer index out of range");
        std::vector<double> out(arity_[observer], 0.0);
        std::vector<std::size_t> idx(arity_.size());
        for (std::size_t off = 0; off < p_.size(); ++off) {
            detail::unflatten(arity_, off, idx);
            out[idx[observer]] += p_[off];
        }
        return out;
    }

    bool is_valid(double neg_tol = kNegativeTolerance, double sum_tol = kSumTolerance) const {
        return min() >= -neg_tol && std::abs(sum() - 1.0) <= sum_tol;
    }

private:
    std::vector<std::size_t> arity_;
    std::vector<std::size_t> settings_;
    std::vector<double> p_;
};

}  // namespace lhvlp
