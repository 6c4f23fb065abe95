#pragma once

// Reference computations that share no code with the library: exhaustive
// basis enumeration for the correlation LP, explicit state vectors for
// multiports, brute-force maxima of linear forms over local assignments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
/// Returns false if A is (numerically) singular.
inline bool solve_dense(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        if (std::abs(a[p][c]) < 1e-11) return false;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < n; ++k) s -= a[c][k] * x[k];
        x[c] = s / a[c][c];
    }
    return true;
}

/// Largest V in [0, 1] such that V Q is a convex combination of the local
/// deterministic products a_i b_j (a_0 fixed to +1, which loses nothing
/// since b ranges over all signs). Every basic solution of
///   sum_l w_l D_l - V Q = 0, sum_l w_l = 1
/// is visited; the optimum of a bounded LP sits at one of them.
inline double vertex_threshold(const std::vector<std::vector<double>>& q) {
    const std::size_t na = q.size(), nb = q.front().size();
    std::vector<std::vector<double>> cols;
    for (std::uint32_t sa = 0; sa < (1u << (na - 1)); ++sa)
        for (std::uint32_t sb = 0; sb < (1u << nb); ++sb) {
            std::vector<double> col;
            for (std::size_t i = 0; i < na; ++i)
                for (std::size_t j = 0; j < nb; ++j) {
                    const double a = (i == 0 || !((sa >> (i - 1)) & 1u)) ? 1.0 : -1.0;
                    const double b = ((sb >> j) & 1u) ? -1.0 : 1.0;
                    col.push_back(a * b);
                }
            col.push_back(1.0);
            cols.push_back(col);
        }
    std::vector<double> vcol;
    for (const auto& row : q)
        for (double v : row) vcol.push_back(-v);
    vcol.push_back(0.0);
    cols.push_back(vcol);

    const std::size_t m = na * nb + 1, n = cols.size();
    std::vector<double> rhs(m, 0.0);
    rhs.back() = 1.0;
    double best = -1.0;
    std::vector<std::size_t> pick(m);
    for (std::size_t i = 0; i < m; ++i) pick[i] = i;
    std::vector<double> x;
    while (true) {
        std::vector<std::vector<double>> a(m, std::vector<double>(m));
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) a[r][c] = cols[pick[c]][r];
        if (solve_dense(a, rhs, x)) {
            bool feasible = true;
            double v = 0.0;
            for (std::size_t c = 0; c < m; ++c) {
                if (pick[c] == n - 1)
                    v = x[c];
                else if (x[c] < -1e-10)
                    feasible = false;
            }
            if (feasible) best = std::max(best, v);
        }
        // next m-combination of n
        std::size_t i = m;
        while (i > 0 && pick[i - 1] == n - m + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t k = i; k < m; ++k) pick[k] = pick[k - 1] + 1;
    }
    return std::min(best, 1.0);
}

/// Output distribution of M multiports fed by sum_m |m..m> / sqrt(N), built
/// from explicit phase and Fourier matrices on the N^M state vector. Party 0
/// is the most significant digit of the returned index.
inline std::vector<double> multiport_distribution(int n, const std::vector<std::vector<double>>& phases) {
    const std::size_t parties = phases.size();
    std::size_t dim = 1;
    for (std::size_t l = 0; l < parties; ++l) dim *= static_cast<std::size_t>(n);
    std::vector<cplx> psi(dim, 0.0);
    for (int m = 0; m < n; ++m) {
        std::size_t idx = 0;
        for (std::size_t l = 0; l < parties; ++l) idx = idx * n + m;
        psi[idx] = 1.0 / std::sqrt(static_cast<double>(n));
    }
    std::size_t stride = dim;
    for (std::size_t l = 0; l < parties; ++l) {
        stride /= n;
        std::vector<cplx> u(n * n);
        for (int k = 0; k < n; ++k)
            for (int m = 0; m < n; ++m)
                u[k * n + m] = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                                          2.0 * std::numbers::pi * k * m / n + phases[l][m]);
        std::vector<cplx> out(dim, 0.0);
        for (std::size_t s = 0; s < dim; ++s) {
            const int m = static_cast<int>((s / stride) % n);
            const std::size_t base = s - m * stride;
            for (int k = 0; k < n; ++k) out[base + k * stride] += u[k * n + m] * psi[s];
        }
        psi = out;
    }
    std::vector<double> p(dim);
    for (std::size_t s = 0; s < dim; ++s) p[s] = std::norm(psi[s]);
    return p;
}

/// Max over +-1 assignments I_l(setting) of sum_t c[t] prod_l I_l(t_l), with
/// t enumerated over `settings`^M points, party 0 least significant.
inline double brute_force_local_max(const std::vector<double>& c, int parties, int settings) {
    const int bits = parties * settings;
    double best = -1e300;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << bits); ++a) {
        double s = 0.0;
        for (std::size_t t = 0; t < c.size(); ++t) {
            std::size_t v = t;
            double sign = 1.0;
            for (int l = 0; l < parties; ++l) {
                if ((a >> (l * settings + v % settings)) & 1u) sign = -sign;
                v /= settings;
            }
            s += sign * c[t];
        }
        best = std::max(best, s);
    }
    return best;
}

}  // namespace oracle
