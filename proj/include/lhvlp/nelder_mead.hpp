#pragma once

// Downhill simplex minimization.

#include <lhvlp/errors.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

namespace lhvlp {

struct NelderMeadOptions {
    std::size_t max_iterations = 5000;
    double f_tol = 1e-10;  // spread of vertex values
    double x_tol = 1e-8;   // max coordinate distance from the best vertex
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    bool record_trace = true;

    void validate() const {
        if (!(reflection > 0.0)) throw DomainError("reflection coefficient must be positive");
        if (!(expansion > 1.0)) throw DomainError("expansion coefficient must exceed 1");
        if (!(contraction > 0.0 && contraction < 1.0)) throw DomainError("contraction coefficient must lie in (0, 1)");
        if (!(shrink > 0.0 && shrink < 1.0)) throw DomainError("shrink coefficient must lie in (0, 1)");
        if (max_iterations == 0) throw DomainError("iteration cap must be positive");
    }
};

struct NelderMeadResult {
    std::vector<double> point;
    double value = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;     // false: stopped at the iteration cap
    std::vector<double> trace;  // best value after each iteration
};

/// Starts from the given Dim+1 vertices.
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<std::vector<double>> simplex, const NelderMeadOptions& opt = {}) {
    opt.validate();
    if (simplex.size() < 2) throw DomainError("simplex needs at least two vertices");
    const std::size_t dim = simplex.front().size();
    if (dim == 0 || simplex.size() != dim + 1) throw DomainError("simplex must have Dim+1 vertices");
    for (const auto& v : simplex)
        if (v.size() != dim) throw DomainError("simplex vertices differ in dimension");

    NelderMeadResult res;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<double> fv(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) fv[i] = eval(simplex[i]);
    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);

    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    };
    auto converged = [&] {
        const std::size_t b = order.front();
        if (fv[order.back()] - fv[b] > opt.f_tol) return false;
        for (std::size_t i = 0; i <= dim; ++i)
            for (std::size_t k = 0; k < dim; ++k)
                if (std::abs(simplex[i][k] - simplex[b][k]) > opt.x_tol) return false;
        return true;
    };

    sort_vertices();
    while (true) {
        if (converged()) {
            res.converged = true;
            break;
        }
        if (res.iterations >= opt.max_iterations) break;
        ++res.iterations;

        const std::size_t worst = order[dim];
        const std::size_t second = order[dim - 1];
        const std::size_t best = order[0];
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[order[i]][k];
        for (auto& c : centroid) c /= static_cast<double>(dim);

        for (std::size_t k = 0; k < dim; ++k) xr[k] = centroid[k] + opt.reflection * (centroid[k] - simplex[worst][k]);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            for (std::size_t k = 0; k < dim; ++k) xe[k] = centroid[k] + opt.expansion * (xr[k] - centroid[k]);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else {
            bool outside = fr < fv[worst];
            const auto& base = outside ? xr : simplex[worst];
            for (std::size_t k = 0; k < dim; ++k) xc[k] = centroid[k] + opt.contraction * (base[k] - centroid[k]);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fv[worst])) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < dim; ++k)
                        simplex[i][k] = simplex[best][k] + opt.shrink * (simplex[i][k] - simplex[best][k]);
                    fv[i] = eval(simplex[i]);
                }
            }
        }
        sort_vertices();
        if (opt.record_trace) res.trace.push_back(fv[order.front()]);
    }
    res.point = simplex[order.front()];
    res.value = fv[order.front()];
    return res;
}

/// Starts from `start` plus `step` along each coordinate axis.
template <class F>
NelderMeadResult nelder_mead(F&& f, const std::vector<double>& start, double step, const NelderMeadOptions& opt = {}) {
    if (start.empty()) throw DomainError("empty start point");
    if (!(step != 0.0) || !std::isfinite(step)) throw DomainError("simplex step must be finite and nonzero");
    std::vector<std::vector<double>> s(start.size() + 1, start);
    for (std::size_t i = 0; i < start.size(); ++i) s[i + 1][i] += step;
    return nelder_mead(std::forward<F>(f), std::move(s), opt);
}

/// splitmix64 finalizer; used to derive independent per-restart seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) with identical output on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Dim+1 vertices drawn uniformly from [lo, hi) per coordinate.
inline std::vector<std::vector<double>> random_simplex(std::size_t dim, std::mt19937_64& rng,
                                                       double lo = 0.0, double hi = 2.0 * std::numbers::pi) {
    std::vector<std::vector<double>> s(dim + 1, std::vector<double>(dim));
    for (auto& v : s)
        for (auto& x : v) x = lo + (hi - lo) * unit_uniform(rng);
    return s;
}

/// Thread count from LHVLP_THREADS, else the hardware concurrency.
inline unsigned default_threads() {
    if (const char* env = std::getenv("LHVLP_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct MultiStartOptions {
    std::size_t restarts = 30;
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = default_threads()
    double lo = 0.0;
    double hi = 2.0 * std::numbers::pi;
    NelderMeadOptions nm;
};

/// Independent Nelder-Mead runs from random simplexes. Restart r always uses
/// the generator seeded with mix_seed(seed, r), so results do not depend on
/// scheduling. `f` must be safe to call concurrently.
template <class F>
std::vector<NelderMeadResult> multi_start(const F& f, std::size_t dim, const MultiStartOptions& opt) {
    if (opt.restarts == 0) throw DomainError("at least one restart is required");
    if (dim == 0) throw DomainError("empty search space");
    opt.nm.validate();
    std::vector<NelderMeadResult> out(opt.restarts);
    auto run_one = [&](std::size_t r) {
        std::mt19937_64 rng(mix_seed(opt.seed, r));
        out[r] = nelder_mead(f, random_simplex(dim, rng, opt.lo, opt.hi), opt.nm);
    };
    const unsigned threads =
        static_cast<unsigned>(std::min<std::size_t>(opt.threads ? opt.threads : default_threads(), opt.restarts));
    if (threads <= 1) {
        for (std::size_t r = 0; r < opt.restarts; ++r) run_one(r);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t r; (r = next.fetch_add(1)) < opt.restarts;) {
                try {
                    run_one(r);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

/// Index of the restart with the lowest value (first on ties).
inline std::size_t best_restart(const std::vector<NelderMeadResult>& runs) {
    std::size_t b = 0;
    for (std::size_t i = 1; i < runs.size(); ++i)
        if (runs[i].value < runs[b].value) b = i;
    return b;
}

}  // namespace lhvlp
