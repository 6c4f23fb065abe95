#pragma once

// Dense two-phase revised simplex for equality-form linear programs.

#include <lhvlp/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace lhvlp {

/// optimize c.x  subject to  A x = b,  lower <= x <= upper.
///
/// A is stored column-major. Lower bounds must be finite (default 0);
/// upper bounds default to +infinity.
class LinearProgram {
public:
    enum class Sense { Minimize, Maximize };

    LinearProgram() = default;

    LinearProgram(std::size_t rows, std::size_t cols, Sense sense = Sense::Minimize)
        : rows_(rows), cols_(cols), sense_(sense), objective_(cols, 0.0), a_(rows * cols, 0.0), rhs_(rows, 0.0),
          lower_(cols, 0.0), upper_(cols, std::numeric_limits<double>::infinity()) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Sense sense() const noexcept { return sense_; }
    void set_sense(Sense s) noexcept { sense_ = s; }

    double& a(std::size_t r, std::size_t c) { return a_[c * rows_ + r]; }
    double a(std::size_t r, std::size_t c) const { return a_[c * rows_ + r]; }
    std::span<double> column(std::size_t c) { return {a_.data() + c * rows_, rows_}; }
    std::span<const double> column(std::size_t c) const { return {a_.data() + c * rows_, rows_}; }

    std::vector<double>& objective() noexcept { return objective_; }
    const std::vector<double>& objective() const noexcept { return objective_; }
    std::vector<double>& rhs() noexcept { return rhs_; }
    const std::vector<double>& rhs() const noexcept { return rhs_; }
    std::vector<double>& lower() noexcept { return lower_; }
    const std::vector<double>& lower() const noexcept { return lower_; }
    std::vector<double>& upper() noexcept { return upper_; }
    const std::vector<double>& upper() const noexcept { return upper_; }

    void validate() const {
        if (objective_.size() != cols_ || rhs_.size() != rows_ || lower_.size() != cols_ || upper_.size() != cols_ ||
            a_.size() != rows_ * cols_)
            throw DomainError("linear program dimensions are inconsistent");
        for (std::size_t j = 0; j < cols_; ++j) {
            if (!std::isfinite(lower_[j])) throw DomainError("lower bounds must be finite");
            if (upper_[j] < lower_[j]) throw DomainError("upper bound below lower bound");
        }
        for (double v : a_)
            if (!std::isfinite(v)) throw DomainError("non-finite constraint coefficient");
        for (double v : rhs_)
            if (!std::isfinite(v)) throw DomainError("non-finite right-hand side");
    }

    /// max_r |(A x - b)_r|.
    double residual(std::span<const double> x) const {
        std::vector<double> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i) r[i] = -rhs_[i];
        for (std::size_t j = 0; j < cols_; ++j) {
            if (x[j] == 0.0) continue;
            const double* col = a_.data() + j * rows_;
            for (std::size_t i = 0; i < rows_; ++i) r[i] += col[i] * x[j];
        }
        double m = 0.0;
        for (double v : r) m = std::max(m, std::abs(v));
        return m;
    }

    double bound_violation(std::span<const double> x) const {
        double m = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            m = std::max(m, lower_[j] - x[j]);
            m = std::max(m, x[j] - upper_[j]);
        }
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Sense sense_ = Sense::Minimize;
    std::vector<double> objective_;
    std::vector<double> a_;
    std::vector<double> rhs_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

inline const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration-limit";
        case LpStatus::NumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

struct LpSolution {
    LpStatus status = LpStatus::NumericalFailure;
    double objective = 0.0;
    std::vector<double> x;
    double residual = 0.0;
    std::size_t iterations = 0;

    bool optimal() const noexcept { return status == LpStatus::Optimal; }
};

struct SimplexOptions {
    double tol = 1e-9;
    std::size_t max_iterations = 0;  // 0 picks a size-dependent cap
    std::size_t refactor_interval = 64;
    std::size_t degenerate_limit = 50;  // consecutive degenerate pivots before Bland's rule
};

namespace detail {

class Simplex {
public:
    Simplex(const LinearProgram& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt) {
        m0_ = lp.rows();
        n0_ = lp.cols();
        bound_row_.assign(n0_, npos);
        for (std::size_t j = 0; j < n0_; ++j)
            if (std::isfinite(lp.upper()[j])) {
                bound_row_[j] = m0_ + bounded_.size();
                bounded_.push_back(j);
            }
        m_ = m0_ + bounded_.size();
        ns_ = n0_ + bounded_.size();  // structural + slack columns
        nt_ = ns_ + m0_;               // + one artificial per original row

        b_.assign(m_, 0.0);
        sign_.assign(m0_, 1.0);
        for (std::size_t r = 0; r < m0_; ++r) b_[r] = lp.rhs()[r];
        for (std::size_t j = 0; j < n0_; ++j) {
            const double l = lp.lower()[j];
            if (l != 0.0)
                for (std::size_t r = 0; r < m0_; ++r) b_[r] -= lp.a(r, j) * l;
        }
        for (std::size_t k = 0; k < bounded_.size(); ++k) {
            const std::size_t j = bounded_[k];
            b_[m0_ + k] = lp.upper()[j] - lp.lower()[j];
        }
        for (std::size_t r = 0; r < m0_; ++r)
            if (b_[r] < 0.0) {
                sign_[r] = -1.0;
                b_[r] = -b_[r];
            }
        bnorm_ = 0.0;
        for (double v : b_) bnorm_ = std::max(bnorm_, std::abs(v));

        cost_.assign(nt_, 0.0);
        const double s = lp.sense() == LinearProgram::Sense::Maximize ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n0_; ++j) cost_[j] = s * lp.objective()[j];

        max_iter_ = opt.max_iterations ? opt.max_iterations : std::max<std::size_t>(10000, 50 * (m_ + ns_));
    }

    LpSolution run() {
        LpSolution sol;
        // initial basis: artificials on original rows, slacks on bound rows
        basis_.resize(m_);
        in_basis_.assign(nt_, false);
        for (std::size_t r = 0; r < m0_; ++r) basis_[r] = ns_ + r;
        for (std::size_t k = 0; k < bounded_.size(); ++k) basis_[m0_ + k] = n0_ + k;
        for (auto j : basis_) in_basis_[j] = true;
        if (!refactor()) return fail(sol);

        // phase 1
        std::vector<double> c1(nt_, 0.0);
        for (std::size_t r = 0; r < m0_; ++r) c1[ns_ + r] = 1.0;
        auto st = iterate(c1, sol.iterations);
        if (st == LpStatus::NumericalFailure || st == LpStatus::IterationLimit) {
            sol.status = st;
            return sol;
        }
        if (!refactor()) return fail(sol);
        double infeas = 0.0;
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] >= ns_) infeas += xb_[r];
        if (infeas > opt_.tol * (1.0 + bnorm_) * 10.0) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        drive_out_artificials();

        // phase 2
        st = iterate(cost_, sol.iterations);
        if (st != LpStatus::Optimal) {
            sol.status = st;
            return sol;
        }
        if (!refactor()) return fail(sol);

        sol.x.assign(n0_, 0.0);
        std::vector<double> xs(ns_, 0.0);
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] < ns_) xs[basis_[r]] = std::max(0.0, xb_[r]);
        for (std::size_t j = 0; j < n0_; ++j) {
            double v = lp_.lower()[j] + xs[j];
            if (v > lp_.upper()[j]) v = lp_.upper()[j];
            sol.x[j] = v;
        }
        sol.residual = std::max(lp_.residual(sol.x), lp_.bound_violation(sol.x));
        double obj = 0.0;
        for (std::size_t j = 0; j < n0_; ++j) obj += lp_.objective()[j] * sol.x[j];
        sol.objective = obj;
        sol.status = sol.residual <= opt_.tol * (1.0 + bnorm_) * 10.0 ? LpStatus::Optimal : LpStatus::NumericalFailure;
        return sol;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    LpSolution& fail(LpSolution& s) {
        s.status = LpStatus::NumericalFailure;
        return s;
    }

    /// Dense column j of the standard-form matrix.
    void load_column(std::size_t j, std::vector<double>& col) const {
        std::fill(col.begin(), col.end(), 0.0);
        if (j < n0_) {
            const auto a = lp_.column(j);
            for (std::size_t r = 0; r < m0_; ++r) col[r] = sign_[r] * a[r];
            if (bound_row_[j] != npos) col[bound_row_[j]] = 1.0;
        } else if (j < ns_) {
            col[m0_ + (j - n0_)] = 1.0;
        } else {
            col[j - ns_] = 1.0;
        }
    }

    double dot_column(std::size_t j, const std::vector<double>& y) const {
        if (j < n0_) {
            const auto a = lp_.column(j);
            double s = 0.0;
            for (std::size_t r = 0; r < m0_; ++r) s += ys_[r] * a[r];
            if (bound_row_[j] != npos) s += y[bound_row_[j]];
            return s;
        }
        if (j < ns_) return y[m0_ + (j - n0_)];
        return y[j - ns_];
    }

    bool refactor() {
        const std::size_t m = m_;
        std::vector<double> bm(m * m, 0.0);
        std::vector<double> col(m);
        for (std::size_t c = 0; c < m; ++c) {
            load_column(basis_[c], col);
            for (std::size_t r = 0; r < m; ++r) bm[r * m + c] = col[r];
        }
        binv_.assign(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) binv_[i * m + i] = 1.0;
        // Gauss-Jordan with partial pivoting
        for (std::size_t k = 0; k < m; ++k) {
            std::size_t p = k;
            double best = std::abs(bm[k * m + k]);
            for (std::size_t r = k + 1; r < m; ++r)
                if (std::abs(bm[r * m + k]) > best) {
                    best = std::abs(bm[r * m + k]);
                    p = r;
                }
            if (best < 1e-13) return false;
            if (p != k)
                for (std::size_t c = 0; c < m; ++c) {
                    std::swap(bm[k * m + c], bm[p * m + c]);
                    std::swap(binv_[k * m + c], binv_[p * m + c]);
                }
            const double inv = 1.0 / bm[k * m + k];
            for (std::size_t c = 0; c < m; ++c) {
                bm[k * m + c] *= inv;
                binv_[k * m + c] *= inv;
            }
            for (std::size_t r = 0; r < m; ++r) {
                if (r == k) continue;
                const double f = bm[r * m + k];
                if (f == 0.0) continue;
                for (std::size_t c = 0; c < m; ++c) {
                    bm[r * m + c] -= f * bm[k * m + c];
                    binv_[r * m + c] -= f * binv_[k * m + c];
                }
            }
        }
        xb_.assign(m, 0.0);
        for (std::size_t r = 0; r < m; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < m; ++c) s += binv_[r * m + c] * b_[c];
            xb_[r] = s;
        }
        since_refactor_ = 0;
        return true;
    }

    void pivot(std::size_t r, std::size_t q, const std::vector<double>& w, double theta) {
        const std::size_t m = m_;
        for (std::size_t i = 0; i < m; ++i) xb_[i] -= theta * w[i];
        xb_[r] = theta;
        const double inv = 1.0 / w[r];
        double* row_r = binv_.data() + r * m;
        for (std::size_t c = 0; c < m; ++c) row_r[c] *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || w[i] == 0.0) continue;
            const double f = w[i];
            double* row_i = binv_.data() + i * m;
            for (std::size_t c = 0; c < m; ++c) row_i[c] -= f * row_r[c];
        }
        in_basis_[basis_[r]] = false;
        basis_[r] = q;
        in_basis_[q] = true;
        ++since_refactor_;
    }

    LpStatus iterate(const std::vector<double>& c, std::size_t& iterations) {
        const std::size_t m = m_;
        std::vector<double> y(m), w(m), col(m);
        ys_.assign(m0_, 0.0);
        std::size_t degenerate = 0;
        bool bland = false;
        const double dtol = opt_.tol;
        const double ptol = 1e-9;

        for (;;) {
            if (iterations >= max_iter_) return LpStatus::IterationLimit;
            if (since_refactor_ >= opt_.refactor_interval && !refactor()) return LpStatus::NumericalFailure;

            for (std::size_t r = 0; r < m; ++r) {
                double s = 0.0;
                for (std::size_t i = 0; i < m; ++i) s += c[basis_[i]] * binv_[i * m + r];
                y[r] = s;
            }
            for (std::size_t r = 0; r < m0_; ++r) ys_[r] = y[r] * sign_[r];

            std::size_t q = npos;
            double best = -dtol;
            for (std::size_t j = 0; j < ns_; ++j) {
                if (in_basis_[j]) continue;
                const double d = c[j] - dot_column(j, y);
                if (bland) {
                    if (d < -dtol) {
                        q = j;
                        break;
                    }
                } else if (d < best) {
                    best = d;
                    q = j;
                }
            }
            if (q == npos) return LpStatus::Optimal;

            load_column(q, col);
            for (std::size_t i = 0; i < m; ++i) {
                double s = 0.0;
                const double* row = binv_.data() + i * m;
                for (std::size_t k = 0; k < m; ++k) s += row[k] * col[k];
                w[i] = s;
            }

            // Harris two-pass ratio test
            double tmax = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i)
                if (w[i] > ptol) tmax = std::min(tmax, (std::max(xb_[i], 0.0) + opt_.tol) / w[i]);
            if (!std::isfinite(tmax)) return LpStatus::Unbounded;
            std::size_t r = npos;
            double rbest = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (w[i] <= ptol) continue;
                const double ratio = std::max(xb_[i], 0.0) / w[i];
                if (ratio > tmax) continue;
                if (bland) {
                    if (r == npos || ratio < rbest - 1e-12 ||
                        (ratio <= rbest + 1e-12 && basis_[i] < basis_[r])) {
                        r = i;
                        rbest = ratio;
                    }
                } else if (r == npos || w[i] > w[r]) {
                    r = i;
                }
            }
            const double theta = std::max(xb_[r], 0.0) / w[r];
            pivot(r, q, w, theta);
            ++iterations;

            if (theta * std::abs(best) < 1e-14 || theta < 1e-12) {
                if (++degenerate > opt_.degenerate_limit) bland = true;
            } else {
                degenerate = 0;
                bland = false;
            }
        }
    }

    void drive_out_artificials() {
        const std::size_t m = m_;
        std::vector<double> col(m), w(m);
        for (std::size_t r = 0; r < m; ++r) {
            if (basis_[r] < ns_) continue;
            std::size_t q = npos;
            double best = 1e-7;
            const double* row = binv_.data() + r * m;
            for (std::size_t j = 0; j < ns_; ++j) {
                if (in_basis_[j]) continue;
                load_column(j, col);
                double s = 0.0;
                for (std::size_t k = 0; k < m; ++k) s += row[k] * col[k];
                if (std::abs(s) > best) {
                    best = std::abs(s);
                    q = j;
                }
            }
            if (q == npos) continue;  // redundant row, artificial stays at zero
            load_column(q, col);
            for (std::size_t i = 0; i < m; ++i) {
                double s = 0.0;
                const double* bi = binv_.data() + i * m;
                for (std::size_t k = 0; k < m; ++k) s += bi[k] * col[k];
                w[i] = s;
            }
            pivot(r, q, w, xb_[r] / w[r]);
        }
        refactor();
    }

    const LinearProgram& lp_;
    SimplexOptions opt_;
    std::size_t m0_ = 0, n0_ = 0, m_ = 0, ns_ = 0, nt_ = 0;
    std::vector<std::size_t> bound_row_;
    std::vector<std::size_t> bounded_;
    std::vector<double> b_, sign_, cost_;
    double bnorm_ = 0.0;
    std::vector<std::size_t> basis_;
    std::vector<bool> in_basis_;
    std::vector<double> binv_, xb_, ys_;
    std::size_t since_refactor_ = 0;
    std::size_t max_iter_ = 0;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opt = {}) {
    lp.validate();
    if (lp.rows() == 0) throw DomainError("linear program has no constraints");
    detail::Simplex s(lp, opt);
    return s.run();
}

inline LpSolution solve_lp(const LinearProgram& lp, double tol) {
    SimplexOptions o;
    o.tol = tol;
    return solve_lp(lp, o);
}

}  // namespace lhvlp
