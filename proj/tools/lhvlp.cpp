// lhvlp command-line frontend.

#include <lhvlp/lhvlp.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using lhvlp::Json;

enum ExitCode { kOk = 0, kInputError = 2, kNumericalFailure = 3 };

std::vector<std::size_t> parse_settings(const std::string& s, std::size_t parties) {
    std::vector<std::size_t> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, 'x')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw lhvlp::ValidationError("--settings must look like 3x3, got '" + s + "'");
        out.push_back(std::stoul(part));
    }
    if (out.size() != parties)
        throw lhvlp::ValidationError("--settings needs " + std::to_string(parties) + " counts, got '" + s + "'");
    return out;
}

std::string num(double v) {
    std::ostringstream o;
    o << std::setprecision(6) << v;
    return o.str();
}

std::string num(const Json& v) {
    if (v.is_null()) return "-";
    if (v.is_array() && v.size() == 2) {
        const double re = v[0].get<double>(), im = v[1].get<double>();
        return num(re) + (im < 0 ? " - " : " + ") + num(std::abs(im)) + "i";
    }
    return num(v.get<double>());
}

void print_threshold_text(const Json& r, std::ostream& o) {
    o << "problem    " << r["problem"].get<std::string>() << "\n";
    o << "threshold  " << num(r["threshold"]) << " (" << r["threshold_kind"].get<std::string>() << ")\n";
    o << "visibility " << num(r["visibility"]) << "\n";
    o << "settings  ";
    for (const auto& x : r["settings"]) o << " " << num(x);
    o << "\n";
    if (r.contains("bell_submatrix")) {
        if (r["bell_submatrix"].is_null()) {
            o << "bell submatrix: none\n";
        } else {
            const auto& b = r["bell_submatrix"];
            o << "bell submatrix: rows " << b["rows"][0] << "," << b["rows"][1] << " cols " << b["cols"][0] << ","
              << b["cols"][1] << "\n";
        }
    }
    o << "model terms " << r["model"].size() << "\n";
    for (const auto& t : r["model"]) {
        o << "  " << num(t["weight"]);
        if (t.contains("outcomes")) o << "  " << t["outcomes"].dump();
        if (t.contains("joint_index")) o << "  joint " << t["joint_index"];
        o << "\n";
    }
    for (const auto& [k, v] : r["residuals"].items()) o << k << " " << num(v.get<double>()) << "\n";
    if (r.contains("restarts")) o << "restarts " << r["restarts"].size() << ", best " << r["best_restart"] << "\n";
    o << "seed " << r["seed"] << ", wall time " << num(r["wall_time_s"]) << " s\n";
}

void print_analyze_text(const Json& r, std::ostream& o) {
    o << "matrix " << r["shape"][0] << "x" << r["shape"][1] << "\n";
    if (r["clipped"].get<std::size_t>() > 0) o << "clipped entries " << r["clipped"] << "\n";
    o << "scaling factor " << num(r["threshold"]) << "\n";
    o << "verdict " << r["verdict"].get<std::string>() << "\n";
    o << "lp residual " << num(r["residuals"]["lp_residual"]) << "\n";
}

void print_inequalities_text(const Json& r, std::ostream& o) {
    o << "M  bound      quantum    ratio      V_tr%   eta_tr%\n";
    for (const auto& row : r["geometric"])
        o << std::left << std::setw(3) << row["parties"].get<int>() << std::setw(11) << num(row["bound"])
          << std::setw(11) << num(row["quantum"]) << std::setw(11) << num(row["ratio"]) << std::setw(8)
          << num(row["visibility_threshold_pct"]) << num(row["efficiency_threshold_pct"]) << "\n";
    const auto& f = r["functional"];
    o << "functional: lhs " << num(f["lhs"]) << ", rhs " << num(f["rhs"]) << ", V_tr " << num(f["visibility_threshold"]);
    if (f.contains("mc_mean")) o << ", mc " << num(f["mc_mean"]) << " +- " << num(f["mc_std_error"]);
    o << "\n";
}

void print_paradox_text(const Json& r, std::ostream& o) {
    for (const auto& p : r["paradoxes"]) {
        o << "N=" << p["dim"] << " " << p["variant"].get<std::string>() << " (" << p["parties"]
          << " parties), swapped runs gamma^" << p["run_exponent"] << "\n";
        for (const auto& run : p["runs"]) {
            o << "  " << std::left << std::setw(14) << run["run"].get<std::string>() << "qm " << num(run["quantum"]);
            if (!run["lhv_exponent"].is_null()) o << "  lhv " << num(run["lhv"]) << "  residual " << num(run["residual"]);
            else o << "  lhv undetermined";
            o << "\n";
        }
    }
}

void print_photonic_text(const Json& r, std::ostream& o) {
    o << "interferometer\n  alpha  chsh_max  eta_tr  eta_tr(count)\n";
    for (const auto& a : r["alley_shih"])
        o << "  " << std::left << std::setw(7) << num(a["alpha"]) << std::setw(10) << num(a["chsh_max"])
          << std::setw(8) << num(a["eta_threshold"]) << num(a["eta_threshold_count_undetected"]) << "\n";
    o << "swapping\n  alpha  standard  bound     modified\n";
    for (const auto& a : r["swapping"])
        o << "  " << std::left << std::setw(7) << num(a["alpha"]) << std::setw(10) << num(a["standard_chsh_max"])
          << std::setw(10) << num(a["standard_bound"]) << num(a["modified_chsh_max"]) << "\n";
    o << "alpha threshold: standard " << num(r["alpha_threshold"]["standard"]) << ", modified "
      << num(r["alpha_threshold"]["modified"]) << "\n";
    o << r["assumption"].get<std::string>() << "\n";
}

void emit(const Json& r, const std::string& format, const std::string& output) {
    std::ostringstream s;
    if (format == "json") {
        s << r.dump(2) << "\n";
    } else {
        const auto cmd = r["command"].get<std::string>();
        if (cmd == "threshold") print_threshold_text(r, s);
        else if (cmd == "analyze") print_analyze_text(r, s);
        else if (cmd == "inequalities") print_inequalities_text(r, s);
        else if (cmd == "ghz-paradox") print_paradox_text(r, s);
        else if (cmd == "photonic") print_photonic_text(r, s);
    }
    if (output.empty()) {
        std::cout << s.str();
    } else {
        std::ofstream f(output);
        if (!f) throw lhvlp::ValidationError("cannot write '" + output + "'");
        f << s.str();
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lhvlp::ValidationError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw lhvlp::ValidationError(path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local hidden variable thresholds by linear programming"};
    app.require_subcommand(1);

    std::string format = "text", output;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("-o,--output", output, "Write the report to a file");
    };

    // threshold
    auto* th = app.add_subcommand("threshold", "Optimize settings for the lowest threshold visibility");
    std::string system, settings = "2x2";
    int dim = 3;
    std::size_t restarts = 30;
    std::uint64_t seed = 20010501;
    double tol = 1e-9;
    unsigned threads = 0;
    bool spherical = false;
    th->add_option("system", system, "qubits, ghz3 or qunits")->required()->check(CLI::IsMember({"qubits", "ghz3", "qunits"}));
    th->add_option("--settings", settings, "Settings per observer, e.g. 3x3");
    th->add_option("--dim", dim, "Multiport dimension for qunits");
    th->add_option("--restarts", restarts, "Optimizer restarts");
    th->add_option("--seed", seed, "Base seed");
    th->add_option("--tol", tol, "LP tolerance");
    th->add_option("--threads", threads, "Worker threads (0 = LHVLP_THREADS or all cores)");
    auto* cop = th->add_flag("--coplanar", "Coplanar qubit settings (default)");
    th->add_flag("--spherical", spherical, "Spherical qubit settings")->excludes(cop);
    common(th);

    // analyze
    auto* an = app.add_subcommand("analyze", "Scaling factor of a measured correlation matrix");
    std::string matrix_path, normalization = "per-column";
    bool counts = false;
    an->add_option("matrix", matrix_path, "Matrix file")->required();
    an->add_flag("--counts", counts, "Entries are (+,+) coincidence counts");
    an->add_option("--normalization", normalization, "Count normalization")
        ->check(CLI::IsMember({"per-column", "per-row", "global"}));
    an->add_option("--tol", tol, "LP tolerance");
    common(an);

    // ghz-paradox
    auto* gp = app.add_subcommand("ghz-paradox", "Multiport GHZ contradictions for a range of N");
    int from = 2, to = 8;
    gp->add_option("--from", from, "Smallest N");
    gp->add_option("--to", to, "Largest N");
    common(gp);

    // inequalities
    auto* iq = app.add_subcommand("inequalities", "Geometric and functional inequality tables");
    int m_from = 2, m_to = 10;
    std::size_t mc = 0;
    std::uint64_t mc_seed = 1;
    iq->add_option("--from", m_from, "Smallest party count");
    iq->add_option("--to", m_to, "Largest party count");
    iq->add_option("--mc-samples", mc, "Monte Carlo samples for the functional norm");
    iq->add_option("--seed", mc_seed, "Monte Carlo seed");
    common(iq);

    // photonic
    auto* ph = app.add_subcommand("photonic", "CHSH maxima and alpha/eta thresholds");
    std::vector<double> alphas = {0.0, 0.5, 0.75, 0.875, 1.0};
    lhvlp::ChshSearch search;
    ph->add_option("--alpha", alphas, "Distinguishability values");
    ph->add_option("--restarts", search.restarts, "Search restarts");
    ph->add_option("--seed", search.seed, "Search seed");
    common(ph);

    // replay
    auto* rp = app.add_subcommand("replay", "Rerun the job embedded in a report and compare");
    std::string report_path;
    rp->add_option("report", report_path, "Report JSON")->required();
    common(rp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    try {
        if (*th) {
            lhvlp::ThresholdJob job;
            if (system == "qubits") {
                job.problem.family = spherical ? lhvlp::Family::QubitSpherical : lhvlp::Family::QubitCoplanar;
                job.problem.counts = parse_settings(settings, 2);
            } else if (system == "ghz3") {
                if (spherical) throw lhvlp::ValidationError("ghz3 supports coplanar settings only");
                job.problem.family = lhvlp::Family::Ghz3Coplanar;
                job.problem.counts = parse_settings(th->count("--settings") ? settings : "2x2x2", 3);
            } else {
                job.problem.family = lhvlp::Family::QunitMultiport;
                job.problem.counts = parse_settings(settings, 2);
                job.problem.dim = dim;
            }
            job.problem.validate();
            job.optimizer.restarts = restarts;
            job.optimizer.seed = seed;
            job.optimizer.threads = threads;
            job.optimizer.lp.tol = tol;
            emit(lhvlp::run_threshold(job), format, output);
        } else if (*an) {
            lhvlp::AnalyzeJob job;
            job.matrix = lhvlp::read_matrix_file(matrix_path);
            job.counts = counts;
            job.normalization = lhvlp::parse_normalization(normalization);
            job.tol = tol;
            emit(lhvlp::run_analyze(job), format, output);
        } else if (*gp) {
            emit(lhvlp::run_ghz_paradox(from, to), format, output);
        } else if (*iq) {
            emit(lhvlp::run_inequalities(m_from, m_to, mc, mc_seed), format, output);
        } else if (*ph) {
            emit(lhvlp::run_photonic(search, alphas), format, output);
        } else if (*rp) {
            const Json old = read_json_file(report_path);
            const Json fresh = lhvlp::replay(old);
            const double a = old.at("threshold").get<double>(), b = fresh.at("threshold").get<double>();
            const bool same = std::abs(a - b) <= 1e-9;
            if (format == "json") {
                Json out = {{"schema", lhvlp::kReportSchema},
                            {"command", "replay"},
                            {"original", a},
                            {"replayed", b},
                            {"difference", std::abs(a - b)},
                            {"reproduced", same},
                            {"report", fresh}};
                emit(out, "json", output);
            } else {
                std::cout << "original " << num(a) << "\nreplayed " << num(b) << "\ndifference " << num(std::abs(a - b))
                          << "\n" << (same ? "reproduced" : "NOT reproduced") << "\n";
            }
            return same ? kOk : kNumericalFailure;
        }
    } catch (const lhvlp::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const lhvlp::ResourceError& e) {
        std::cerr << "error: " << e.what() << " (needs about " << e.required_bytes() << " bytes)\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kOk;
}
