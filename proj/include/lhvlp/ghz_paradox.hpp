#pragma once

// GHZ-type contradictions for maximally entangled quNits behind Bell multiports.

#include <lhvlp/errors.hpp>
#include <lhvlp/quantum.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace lhvlp {

enum class ParadoxVariant { NPlusOne, NPartiesOdd, NPartiesEven };

inline const char* to_string(ParadoxVariant v) {
    switch (v) {
        case ParadoxVariant::NPlusOne: return "n-plus-one";
        case ParadoxVariant::NPartiesOdd: return "n-parties-odd";
        case ParadoxVariant::NPartiesEven: return "n-parties-even";
    }
    return "unknown";
}

/// Runs swap one party at a time from phi to phi_prime.
struct ParadoxSpec {
    ParadoxVariant variant = ParadoxVariant::NPlusOne;
    int dim = 3;
    int parties = 4;
    PhaseVector phi;
    PhaseVector phi_prime;
};

inline ParadoxSpec build_paradox(ParadoxVariant v, int n) {
    ParadoxSpec s;
    s.variant = v;
    s.dim = n;
    const double pi = std::numbers::pi;
    double step = 0.0;
    switch (v) {
        case ParadoxVariant::NPlusOne:
            if (n < 2) throw DomainError("multiport dimension must be at least 2");
            s.parties = n + 1;
            step = 2.0 * pi / (static_cast<double>(n) * n);
            break;
        case ParadoxVariant::NPartiesOdd:
            if (n < 3 || n % 2 == 0) throw DomainError("odd-N variant needs odd N >= 3");
            s.parties = n;
            step = pi / n;
            break;
        case ParadoxVariant::NPartiesEven:
            if (n == 2) throw DomainError("no paradox of this type exists for two observers");
            if (n < 4 || n % 2 != 0) throw DomainError("even-N variant needs even N >= 4");
            s.parties = n;
            step = pi / (n - 1);
            break;
    }
    s.phi.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) s.phi[k] = k * step;
    s.phi_prime.assign(static_cast<std::size_t>(n), 0.0);
    return s;
}

/// Settings of run k: party k uses phi_prime, the others phi.
inline std::vector<PhaseVector> swapped_run(const ParadoxSpec& s, int k) {
    if (k < 0 || k >= s.parties) throw DomainError("run index out of range");
    std::vector<PhaseVector> p(static_cast<std::size_t>(s.parties), s.phi);
    p[k] = s.phi_prime;
    return p;
}

/// k with z = gamma_N^k, if |z - gamma_N^k| <= tol for some k.
inline std::optional<int> bell_exponent(Complex z, int n, double tol = 1e-9) {
    const double turns = std::arg(z) * n / (2.0 * std::numbers::pi);
    int k = static_cast<int>(std::lround(turns)) % n;
    if (k < 0) k += n;
    if (std::abs(z - bell_number(n, k)) > tol) return std::nullopt;
    return k;
}

/// The correlation is perfect iff all cyclic phase sums
/// exp(i sum_l (phi_l^m - phi_l^{m+1})) coincide; they then equal gamma_N^k.
inline std::optional<int> perfect_correlation_exponent(int n, const std::vector<PhaseVector>& phases,
                                                       double tol = 1e-9) {
    Complex first{};
    for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (const auto& p : phases) s += p[m] - p[(m + 1) % n];
        const Complex z = std::polar(1.0, s);
        if (m == 0)
            first = z;
        else if (std::abs(z - first) > tol)
            return std::nullopt;
    }
    return bell_exponent(first, n, tol);
}

/// Correlations of all swapped runs; they must be equal and perfect.
inline std::vector<Complex> verify_perfect_correlations(const ParadoxSpec& s) {
    std::vector<Complex> out;
    for (int k = 0; k < s.parties; ++k) out.push_back(multiport_corr(s.dim, swapped_run(s, k)));
    for (const auto& z : out)
        if (std::abs(std::abs(z) - 1.0) > 1e-12 || std::abs(z - out.front()) > 1e-12)
            throw NumericalError("swapped runs are not equal perfect correlations");
    return out;
}

struct RunComparison {
    std::string label;
    Complex quantum;
    std::optional<int> lhv_exponent;  // empty when local realism leaves it open
    double residual = 0.0;            // |gamma^lhv - quantum|, 0 when undetermined

    Complex lhv_value(int n) const { return lhv_exponent ? bell_number(n, *lhv_exponent) : Complex{}; }
};

struct ContradictionReport {
    ParadoxSpec spec;
    std::vector<Complex> runs;
    int run_exponent = 0;
    RunComparison all_phi;
    RunComparison all_phi_prime;
    double residual = 0.0;  // largest residual over both runs
};

namespace detail {

inline int mod(long long a, int n) {
    long long r = a % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

inline std::optional<int> mod_inverse(int a, int n) {
    for (int x = 1; x < n; ++x)
        if (mod(static_cast<long long>(a) * x, n) == 1) return x;
    return std::nullopt;
}

}  // namespace detail

/// Multiplying the M swapped-run identities I_k(phi') prod_{l != k} I_l(phi)
/// = gamma^c gives S' + (M - 1) S = M c (mod N) for the exponent sums S, S'
/// at phi and phi'. All arithmetic on the local realistic side is exact.
inline ContradictionReport lhv_contradiction(const ParadoxSpec& s) {
    ContradictionReport rep;
    rep.spec = s;
    rep.runs = verify_perfect_correlations(s);
    const int n = s.dim, m = s.parties;
    const auto c = bell_exponent(rep.runs.front(), n);
    if (!c) throw NumericalError("swapped-run correlation is not a Bell number");
    rep.run_exponent = *c;

    rep.all_phi.label = "all-phi";
    rep.all_phi.quantum = multiport_corr(n, std::vector<PhaseVector>(m, s.phi));
    rep.all_phi_prime.label = "all-phi-prime";
    rep.all_phi_prime.quantum = multiport_corr(n, std::vector<PhaseVector>(m, s.phi_prime));

    const int rhs = detail::mod(static_cast<long long>(m) * rep.run_exponent, n);
    const int k = detail::mod(m - 1, n);
    if (k == 0) {
        rep.all_phi_prime.lhv_exponent = rhs;
    } else if (auto inv = detail::mod_inverse(k, n)) {
        const auto sp = bell_exponent(rep.all_phi_prime.quantum, n);
        if (!sp) throw DomainError("all-phi-prime run is not perfectly correlated");
        rep.all_phi_prime.lhv_exponent = *sp;
        rep.all_phi.lhv_exponent = detail::mod(static_cast<long long>(rhs - *sp) * *inv, n);
    } else {
        throw DomainError("party count and dimension admit no contradiction of this type");
    }
    for (auto* r : {&rep.all_phi, &rep.all_phi_prime}) {
        if (r->lhv_exponent) r->residual = std::abs(r->lhv_value(n) - r->quantum);
        rep.residual = std::max(rep.residual, r->residual);
    }
    return rep;
}

/// Closed forms of the all-phi quantum value for the N-party variants.
inline Complex paradox_quantum_value_odd(int m) {
    return Complex((1.0 - 2.0 * m) / (2.0 * m + 1.0), 0.0);
}

inline Complex paradox_quantum_value_even(int m) {
    const double k = 2.0 * m - 1.0;
    return ((k) * std::polar(1.0, -2.0 * m * std::numbers::pi / k) + 1.0) / (2.0 * m);
}

}  // namespace lhvlp
