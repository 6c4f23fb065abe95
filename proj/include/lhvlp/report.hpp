#pragma once

// JSON reports. Every report embeds the configuration that produced it so a
// later run can reproduce the headline number.

#include <lhvlp/errors.hpp>
#include <lhvlp/ghz_paradox.hpp>
#include <lhvlp/inequalities.hpp>
#include <lhvlp/io.hpp>
#include <lhvlp/optimizer.hpp>
#include <lhvlp/photonic.hpp>
#include <lhvlp/threshold.hpp>

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace lhvlp {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "lhvlp.report/1";

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string digest_hex(std::string_view data) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

namespace detail {

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json tensor_json(const CorrelationTensor& q) {
    Json values = Json::array();
    for (const auto& v : q.values()) values.push_back(q.is_real(0.0) ? Json(v.real()) : complex_json(v));
    return {{"shape", q.shape()}, {"values", values}};
}

inline double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline Json base_report(std::string_view command, const Json& config) {
    Json r;
    r["schema"] = kReportSchema;
    r["command"] = command;
    r["config"] = config;
    r["input_digest"] = "fnv1a64:" + digest_hex(config.dump());
    return r;
}

}  // namespace detail

// --- threshold -------------------------------------------------------------

struct ThresholdJob {
    Problem problem;
    OptimizerConfig optimizer;
};

inline Json to_json(const ThresholdJob& job) {
    return {{"family", to_string(job.problem.family)},
            {"counts", job.problem.counts},
            {"dim", job.problem.dim},
            {"restarts", job.optimizer.restarts},
            {"seed", job.optimizer.seed},
            {"tol", job.optimizer.lp.tol},
            {"nm_max_iterations", job.optimizer.nm.max_iterations},
            {"nm_f_tol", job.optimizer.nm.f_tol},
            {"nm_x_tol", job.optimizer.nm.x_tol}};
}

inline ThresholdJob threshold_job_from_json(const Json& c) {
    ThresholdJob job;
    try {
        job.problem.family = parse_family(c.at("family").get<std::string>());
        job.problem.counts = c.at("counts").get<std::vector<std::size_t>>();
        job.problem.dim = c.at("dim").get<int>();
        job.optimizer.restarts = c.at("restarts").get<std::size_t>();
        job.optimizer.seed = c.at("seed").get<std::uint64_t>();
        job.optimizer.lp.tol = c.at("tol").get<double>();
        job.optimizer.nm.max_iterations = c.at("nm_max_iterations").get<std::size_t>();
        job.optimizer.nm.f_tol = c.at("nm_f_tol").get<double>();
        job.optimizer.nm.x_tol = c.at("nm_x_tol").get<double>();
        job.problem.validate();
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("bad threshold config: ") + e.what());
    } catch (const DomainError& e) {
        throw ValidationError(std::string("bad threshold config: ") + e.what());
    }
    return job;
}

/// Model at the optimal settings, either as strategy weights or, for the
/// multiport family, as a joint distribution.
inline Json model_json(const Problem& p, const std::vector<double>& x, const SimplexOptions& lp, Json& residuals) {
    Json model = Json::array();
    if (p.family == Family::QunitMultiport) {
        auto [a, b] = multiport_settings(p, x);
        const auto tables = multiport_pair_tables(p.dim, a, b);
        auto meta = build_joint_lp(tables, p.dim, 0.0, 1.0);
        auto sol = solve_lp(meta.lp, lp);
        auto rep = extract_joint_model(sol, meta, tables);
        const auto v = rep.joint.values();
        for (std::size_t c = 0; c < v.size(); ++c)
            if (v[c] > kWeightFloor) model.push_back({{"joint_index", c}, {"weight", v[c]}});
        residuals["lp_residual"] = sol.residual;
        residuals["marginal_deviation"] = rep.max_deviation;
        residuals["lp_iterations"] = sol.iterations;
        return model;
    }
    const auto q = settings_tensor(p, x);
    auto meta = build_correlation_lp(q, 2, 1.0);
    auto sol = solve_lp(meta.lp, lp);
    auto rep = extract_model(sol, meta, q);
    for (const auto& t : rep.terms) model.push_back({{"weight", t.weight}, {"outcomes", t.exponents}});
    residuals["lp_residual"] = sol.residual;
    residuals["model_deviation"] = rep.max_deviation;
    residuals["weight_sum"] = rep.weight_sum;
    residuals["lp_iterations"] = sol.iterations;
    return model;
}

inline Json run_threshold(const ThresholdJob& job) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = optimize_threshold(job.problem, job.optimizer);
    Json r = detail::base_report("threshold", to_json(job));
    r["problem"] = to_string(job.problem.family);
    r["seed"] = job.optimizer.seed;
    r["threshold"] = job.problem.family == Family::QunitMultiport ? rep.noise : rep.visibility;
    r["threshold_kind"] = job.problem.family == Family::QunitMultiport ? "noise" : "visibility";
    r["visibility"] = rep.visibility;
    r["noise"] = rep.noise;
    r["settings"] = rep.settings;
    r["tensor"] = detail::tensor_json(rep.tensor);
    if (rep.bell_submatrix) {
        const auto& b = *rep.bell_submatrix;
        r["bell_submatrix"] = {{"rows", {b.row0, b.row1}}, {"cols", {b.col0, b.col1}}};
    } else {
        r["bell_submatrix"] = nullptr;
    }
    Json residuals;
    r["model"] = model_json(job.problem, rep.settings, job.optimizer.lp, residuals);
    r["residuals"] = residuals;
    r["best_restart"] = rep.best_restart;
    Json restarts = Json::array();
    for (const auto& rr : rep.restarts)
        restarts.push_back({{"index", rr.index},
                            {"value", rr.value},
                            {"iterations", rr.iterations},
                            {"evaluations", rr.evaluations},
                            {"converged", rr.converged}});
    r["restarts"] = restarts;
    r["wall_time_s"] = detail::elapsed_seconds(t0);
    return r;
}

// --- measured data -----------------------------------------------------------

struct AnalyzeJob {
    MatrixFile matrix;
    bool counts = false;  // entries are (+,+) coincidence counts
    CountNormalization normalization = CountNormalization::PerColumn;
    double tol = 1e-9;
};

inline const char* to_string(CountNormalization m) {
    switch (m) {
        case CountNormalization::PerColumn: return "per-column";
        case CountNormalization::PerRow: return "per-row";
        case CountNormalization::Global: return "global";
    }
    return "unknown";
}

inline CountNormalization parse_normalization(std::string_view s) {
    if (s == "per-column") return CountNormalization::PerColumn;
    if (s == "per-row") return CountNormalization::PerRow;
    if (s == "global") return CountNormalization::Global;
    throw ValidationError("unknown normalization: " + std::string(s));
}

inline Json to_json(const AnalyzeJob& job) {
    return {{"matrix", job.matrix.rows},
            {"counts", job.counts},
            {"normalization", to_string(job.normalization)},
            {"tol", job.tol}};
}

inline AnalyzeJob analyze_job_from_json(const Json& c) {
    AnalyzeJob job;
    try {
        job.matrix.rows = c.at("matrix").get<std::vector<std::vector<double>>>();
        job.counts = c.at("counts").get<bool>();
        job.normalization = parse_normalization(c.at("normalization").get<std::string>());
        job.tol = c.at("tol").get<double>();
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("bad analyze config: ") + e.what());
    }
    return job;
}

/// Factor >= 1 - 1e-6 means the data admit a local model.
inline constexpr double kCompatibleFactor = 1.0 - 1e-6;

inline Json run_analyze(const AnalyzeJob& job) {
    const auto t0 = std::chrono::steady_clock::now();
    Json r = detail::base_report("analyze", to_json(job));
    CorrelationTensor q;
    std::size_t clipped = 0;
    if (job.counts) {
        auto n = normalize_counts(job.matrix, job.normalization);
        q = std::move(n.tensor);
        clipped = n.clipped;
    } else {
        q = correlation_matrix(job.matrix);
    }
    SimplexOptions opt;
    opt.tol = job.tol;
    auto meta = build_correlation_lp(q, 2, 1.0);
    auto res = check_solution(solve_lp(meta.lp, opt), meta.v_column());
    auto model = extract_model(res.solution, meta, q);
    r["problem"] = "measured-qubit-matrix";
    r["seed"] = nullptr;
    r["shape"] = q.shape();
    r["clipped"] = clipped;
    r["threshold"] = res.value;
    r["threshold_kind"] = "scaling-factor";
    r["verdict"] = res.value >= kCompatibleFactor ? "LHV-compatible" : "LHV-incompatible";
    r["tensor"] = detail::tensor_json(q);
    Json terms = Json::array();
    for (const auto& t : model.terms) terms.push_back({{"weight", t.weight}, {"outcomes", t.exponents}});
    r["model"] = terms;
    r["residuals"] = {{"lp_residual", res.solution.residual},
                      {"model_deviation", model.max_deviation},
                      {"weight_sum", model.weight_sum},
                      {"lp_iterations", res.solution.iterations}};
    r["wall_time_s"] = detail::elapsed_seconds(t0);
    return r;
}

// --- analytic suites -------------------------------------------------------

inline Json run_inequalities(int m_min, int m_max, std::size_t mc_samples = 0, std::uint64_t seed = 1) {
    if (m_min < 2 || m_max < m_min) throw ValidationError("party range must satisfy 2 <= from <= to");
    const auto t0 = std::chrono::steady_clock::now();
    const Json config = {{"from", m_min}, {"to", m_max}, {"mc_samples", mc_samples}, {"seed", seed}};
    Json r = detail::base_report("inequalities", config);
    r["problem"] = "geometric-ghz";
    r["seed"] = seed;
    Json rows = Json::array();
    for (int m = m_min; m <= m_max; ++m) {
        const auto g = geometric_bound_and_violation(m);
        Json row = {{"parties", m},
                    {"bound", g.bound},
                    {"quantum", g.quantum},
                    {"ratio", g.ratio},
                    {"q_M", q_M(m)},
                    {"visibility_threshold_pct", round_significant(100.0 * geometric_visibility_threshold(m))}};
        try {
            row["efficiency_threshold_pct"] = round_significant(100.0 * geometric_efficiency_threshold(m));
        } catch (const DomainError&) {
            row["efficiency_threshold_pct"] = nullptr;
        }
        rows.push_back(row);
    }
    r["geometric"] = rows;
    const auto f = functional_inequality(1.0);
    Json functional = {{"lhs", f.lhs}, {"rhs", f.rhs}, {"visibility_threshold", 0.75}};
    if (mc_samples > 0) {
        const auto mc = functional_norm_mc(1.0, mc_samples, seed);
        functional["mc_mean"] = mc.mean;
        functional["mc_std_error"] = mc.std_error;
    }
    r["functional"] = functional;
    r["wall_time_s"] = detail::elapsed_seconds(t0);
    return r;
}

inline Json run_ghz_paradox(int n_min, int n_max) {
    if (n_min < 2 || n_max < n_min) throw ValidationError("dimension range must satisfy 2 <= from <= to");
    const auto t0 = std::chrono::steady_clock::now();
    Json r = detail::base_report("ghz-paradox", {{"from", n_min}, {"to", n_max}});
    r["problem"] = "multiport-ghz";
    r["seed"] = nullptr;
    Json rows = Json::array();
    for (int n = n_min; n <= n_max; ++n) {
        std::vector<ParadoxVariant> variants = {ParadoxVariant::NPlusOne};
        if (n >= 3) variants.push_back(n % 2 ? ParadoxVariant::NPartiesOdd : ParadoxVariant::NPartiesEven);
        for (auto v : variants) {
            const auto rep = lhv_contradiction(build_paradox(v, n));
            Json runs = Json::array();
            for (const auto* c : {&rep.all_phi, &rep.all_phi_prime}) {
                Json run = {{"run", c->label}, {"quantum", detail::complex_json(c->quantum)}, {"residual", c->residual}};
                if (c->lhv_exponent) {
                    run["lhv_exponent"] = *c->lhv_exponent;
                    run["lhv"] = detail::complex_json(c->lhv_value(n));
                } else {
                    run["lhv_exponent"] = nullptr;
                }
                runs.push_back(run);
            }
            rows.push_back({{"dim", n},
                            {"variant", to_string(v)},
                            {"parties", rep.spec.parties},
                            {"run_exponent", rep.run_exponent},
                            {"runs", runs},
                            {"residual", rep.residual}});
        }
    }
    r["paradoxes"] = rows;
    r["wall_time_s"] = detail::elapsed_seconds(t0);
    return r;
}

inline Json run_photonic(const ChshSearch& search, std::vector<double> alphas) {
    for (double a : alphas) detail::check_alpha(a);
    const auto t0 = std::chrono::steady_clock::now();
    Json r = detail::base_report(
        "photonic", {{"restarts", search.restarts}, {"seed", search.seed}, {"alphas", alphas}});
    r["problem"] = "photonic";
    r["seed"] = search.seed;
    r["assumption"] = "distinguishability and efficiency treated as independent";
    Json as = Json::array();
    for (double a : alphas) {
        const auto m = alley_shih_chsh_max(a, 1.0, EfficiencyModel::DiscardUndetected, search);
        as.push_back({{"alpha", a},
                      {"chsh_max", m.value},
                      {"angles", m.angles},
                      {"eta_threshold", alley_shih_eta_threshold(a, EfficiencyModel::DiscardUndetected, search)},
                      {"eta_threshold_count_undetected",
                       alley_shih_eta_threshold(a, EfficiencyModel::CountUndetected, search)}});
    }
    r["alley_shih"] = as;
    Json sw = Json::array();
    for (double a : alphas) {
        const auto st = swapping_chsh_max(SwappingVariant::Standard, a, search);
        const auto mo = swapping_chsh_max(SwappingVariant::Modified, a, search);
        sw.push_back({{"alpha", a},
                      {"standard_chsh_max", st.value},
                      {"standard_bound", swapping_standard_chsh_bound(a)},
                      {"modified_chsh_max", mo.value},
                      {"modified_angles", mo.angles}});
    }
    r["swapping"] = sw;
    auto opt_json = [](std::optional<double> v) { return v ? Json(*v) : Json(nullptr); };
    r["alpha_threshold"] = {{"standard", opt_json(threshold_alpha(SwappingVariant::Standard, search))},
                            {"modified", opt_json(threshold_alpha(SwappingVariant::Modified, search))}};
    r["wall_time_s"] = detail::elapsed_seconds(t0);
    return r;
}

// --- replay ----------------------------------------------------------------

/// Reruns the job embedded in a threshold or analyze report.
inline Json replay(const Json& report) {
    if (!report.is_object() || report.value("schema", "") != kReportSchema)
        throw ValidationError(std::string("not a report with schema ") + kReportSchema);
    const auto command = report.value("command", "");
    if (!report.contains("config")) throw ValidationError("report has no embedded config");
    const Json& c = report.at("config");
    if (command == "threshold") return run_threshold(threshold_job_from_json(c));
    if (command == "analyze") return run_analyze(analyze_job_from_json(c));
    throw ValidationError("replay supports threshold and analyze reports, not '" + command + "'");
}

}  // namespace lhvlp
