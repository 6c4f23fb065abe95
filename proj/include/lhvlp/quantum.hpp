#pragma once

// Quantum-mechanical predictions for maximally entangled qubits, GHZ states
// and quNits observed through Bell multiports. All functions are pure.

#include <lhvlp/errors.hpp>
#include <lhvlp/tensor.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace lhvlp {

/// Angles are plain radians; callers may pass unreduced values.
using Angle = double;

/// Phase shifter settings in front of one N-port multiport.
using PhaseVector = std::vector<Angle>;

/// Fraction F of white noise admixed to the pure state; visibility V = 1 - F.
class Noise {
public:
    constexpr Noise() = default;

    explicit Noise(double fraction) : fraction_(fraction) {
        if (!(fraction >= 0.0 && fraction <= 1.0)) throw DomainError("noise fraction must lie in [0, 1]");
    }

    static Noise from_visibility(double v) { return Noise(1.0 - v); }

    constexpr double fraction() const noexcept { return fraction_; }
    constexpr double visibility() const noexcept { return 1.0 - fraction_; }

private:
    double fraction_ = 0.0;
};

namespace detail {

inline void check_visibility(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("visibility must lie in [0, 1]");
}

inline void check_outcome(int m) {
    if (m != 1 && m != -1) throw DomainError("dichotomic outcome must be +1 or -1");
}

/// exp(2 pi i k / n) with the exponent reduced first, so integer powers stay exact.
inline Complex root_of_unity(long long k, long long n) {
    long long r = k % n;
    if (r < 0) r += n;
    const double t = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    return {std::cos(t), std::sin(t)};
}

}  // namespace detail

/// Bell number gamma_N^k = exp(2 pi i k / N).
inline Complex bell_number(int dim, long long k) {
    if (dim < 2) throw DomainError("multiport dimension must be at least 2");
    return detail::root_of_unity(k, dim);
}

// --- two qubits (singlet) ------------------------------------------------

/// Singlet correlation for coplanar settings: -(1 - F) cos(phi1 + phi2).
inline double two_qubit_corr(Angle phi1, Angle phi2, Noise noise = {}) {
    return -noise.visibility() * std::cos(phi1 + phi2);
}

/// P(m, m' | phi1, phi2) = (1 - V m m' cos(phi1 + phi2)) / 4.
inline double two_qubit_prob(int m, int m_prime, Angle phi1, Angle phi2, double visibility = 1.0) {
    detail::check_outcome(m);
    detail::check_outcome(m_prime);
    detail::check_visibility(visibility);
    return 0.25 * (1.0 - visibility * m * m_prime * std::cos(phi1 + phi2));
}

using Vec3 = std::array<double, 3>;

/// Unit vector from polar angle theta and azimuth phi.
inline Vec3 unit_vector(Angle theta, Angle phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// Singlet correlation for arbitrary spin directions: -V a.b.
inline double two_qubit_corr(const Vec3& a, const Vec3& b, double visibility = 1.0) {
    detail::check_visibility(visibility);
    return -visibility * dot(a, b);
}

/// P(m, m' | a, b) = (1 - V m m' a.b) / 4.
inline double two_qubit_prob(int m, int m_prime, const Vec3& a, const Vec3& b, double visibility = 1.0) {
    detail::check_outcome(m);
    detail::check_outcome(m_prime);
    detail::check_visibility(visibility);
    return 0.25 * (1.0 - visibility * m * m_prime * dot(a, b));
}

// --- GHZ qubits ------------------------------------------------------------

/// M-qubit GHZ correlation V cos(sum of phases), M >= 2.
inline double ghz_corr(std::span<const Angle> angles, double visibility = 1.0) {
    if (angles.size() < 2) throw DomainError("GHZ correlation needs at least two parties");
    detail::check_visibility(visibility);
    double s = 0.0;
    for (Angle a : angles) s += a;
    return visibility * std::cos(s);
}

/// Three-qubit GHZ probability for coplanar (equatorial) settings.
inline double ghz3_prob(int m, int l, int k, Angle alpha, Angle beta, Angle gamma, double visibility = 1.0) {
    detail::check_outcome(m);
    detail::check_outcome(l);
    detail::check_outcome(k);
    detail::check_visibility(visibility);
    return 0.125 * (1.0 + m * l * k * visibility * std::cos(alpha + beta + gamma));
}

/// Three-qubit GHZ probability for arbitrary directions.
///
/// The three-body tensor has nonzero entries M111 = 1, M122 = M212 = M221 = -1.
inline double ghz3_prob(int m, int l, int k, const Vec3& a, const Vec3& b, const Vec3& c, double visibility = 1.0) {
    detail::check_outcome(m);
    detail::check_outcome(l);
    detail::check_outcome(k);
    detail::check_visibility(visibility);
    const double three_body =
        a[0] * b[0] * c[0] - a[0] * b[1] * c[1] - a[1] * b[0] * c[1] - a[1] * b[1] * c[0];
    return 0.125 * (1.0 + m * l * a[2] * b[2] + m * k * a[2] * c[2] + l * k * b[2] * c[2] +
                    visibility * m * l * k * three_body);
}

// --- Bell multiports -------------------------------------------------------

namespace detail {

inline void check_multiport(int dim, std::span<const PhaseVector> phases) {
    if (dim < 2) throw DomainError("multiport dimension must be at least 2");
    if (phases.empty()) throw DomainError("at least one multiport is required");
    for (const auto& p : phases)
        if (p.size() != static_cast<std::size_t>(dim)) throw DomainError("phase vector length must equal N");
}

}  // namespace detail

/// Probability that multiport l registers its photon at output outputs[l]
/// (0-based), for the M-party state sum_m |m>...|m> / sqrt(N), mixed with a
/// fraction F of white noise contributing F / N^M uniformly.
inline double multiport_prob(int dim, std::span<const PhaseVector> phases, std::span<const int> outputs,
                             double noise_fraction = 0.0) {
    detail::check_multiport(dim, phases);
    if (outputs.size() != phases.size()) throw DomainError("one output index per multiport is required");
    for (int k : outputs)
        if (k < 0 || k >= dim) throw DomainError("output index out of range");
    if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) throw DomainError("noise fraction must lie in [0, 1]");

    long long k_sum = 0;
    for (int k : outputs) k_sum += k;
    Complex amp{0.0, 0.0};
    for (int m = 0; m < dim; ++m) {
        double phase = 0.0;
        for (const auto& p : phases) phase += p[m];
        amp += std::polar(1.0, phase) * detail::root_of_unity(static_cast<long long>(m) * k_sum, dim);
    }
    const double n = dim;
    const double parties = static_cast<double>(phases.size());
    const double pure = std::norm(amp) / std::pow(n, parties + 1.0);
    return noise_fraction / std::pow(n, parties) + (1.0 - noise_fraction) * pure;
}

/// Full outcome table of multiport_prob for all N^M output tuples.
inline ProbabilityTable multiport_table(int dim, std::span<const PhaseVector> phases, double noise_fraction = 0.0) {
    detail::check_multiport(dim, phases);
    ProbabilityTable table(std::vector<std::size_t>(phases.size(), static_cast<std::size_t>(dim)));
    std::vector<std::size_t> idx(phases.size());
    std::vector<int> outputs(phases.size());
    auto vals = table.values();
    for (std::size_t off = 0; off < vals.size(); ++off) {
        detail::unflatten(table.arity(), off, idx);
        for (std::size_t l = 0; l < idx.size(); ++l) outputs[l] = static_cast<int>(idx[l]);
        vals[off] = multiport_prob(dim, phases, outputs, noise_fraction);
    }
    return table;
}

/// Bell-number correlation (1/N) sum_m exp(i sum_l (phi_l^m - phi_l^{m+1})),
/// cyclic in m, scaled by the visibility.
inline Complex multiport_corr(int dim, std::span<const PhaseVector> phases, double visibility = 1.0) {
    detail::check_multiport(dim, phases);
    detail::check_visibility(visibility);
    Complex sum{0.0, 0.0};
    for (int m = 0; m < dim; ++m) {
        const int next = (m + 1) % dim;
        double phase = 0.0;
        for (const auto& p : phases) phase += p[m] - p[next];
        sum += std::polar(1.0, phase);
    }
    return visibility * sum / static_cast<double>(dim);
}

/// The three distinct pair probabilities of two qutrits behind tritters.
///
/// Each value is the probability of any one of the three output pairs whose
/// Bell-number product is 1 (p1), alpha^2 (p2) or alpha (p3), where
/// alpha = exp(2 pi i / 3); with 0-based outputs these are the pairs with
/// (k + l) mod 3 equal to 0, 2 and 1 respectively.
struct QutritGroupProbabilities {
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;
};

/// Group probabilities of a noisy two-qutrit state from its pure-state
/// correlation E; the noisy correlation is (1 - F) E.
inline QutritGroupProbabilities qutrit_probs_from_corr(Complex corr, double noise_fraction = 0.0) {
    if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) throw DomainError("noise fraction must lie in [0, 1]");
    const Complex e = (1.0 - noise_fraction) * corr;
    const double s3 = std::numbers::sqrt3;
    QutritGroupProbabilities g;
    g.p1 = 1.0 / 9.0 + 2.0 / 9.0 * e.real();
    g.p2 = 1.0 / 9.0 - (s3 * e.imag() + e.real()) / 9.0;
    g.p3 = 1.0 / 9.0 + (s3 * e.imag() - e.real()) / 9.0;
    constexpr double tol = 1e-12;
    if (g.p1 < -tol || g.p2 < -tol || g.p3 < -tol)
        throw DomainError("correlation value is not realisable by any two-qutrit distribution");
    return g;
}

/// Inverse of qutrit_probs_from_corr: E = 3 (p1 + alpha^2 p2 + alpha p3).
inline Complex qutrit_corr_from_probs(const QutritGroupProbabilities& g) {
    const Complex alpha = detail::root_of_unity(1, 3);
    return 3.0 * (g.p1 + alpha * alpha * g.p2 + alpha * g.p3);
}

}  // namespace lhvlp
