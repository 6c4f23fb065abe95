#include <lhvlp/io.hpp>
#include <lhvlp/report.hpp>

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace lhvlp;

TEST(MatrixFile, ParsesWithComments) {
    const auto m = parse_matrix("# header\n0.5 -0.25\n\n  +1   0\n# tail\n");
    ASSERT_EQ(m.row_count(), 2u);
    EXPECT_EQ(m.col_count(), 2u);
    EXPECT_DOUBLE_EQ(m.rows[0][1], -0.25);
    EXPECT_DOUBLE_EQ(m.rows[1][0], 1.0);
}

TEST(MatrixFile, RejectsRaggedRows) {
    try {
        parse_matrix("1 2\n3\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(MatrixFile, RejectsNonFinite) {
    try {
        parse_matrix("0.1 nan\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_EQ(e.column(), 5u);
    }
    EXPECT_THROW(parse_matrix("0.1 abc\n"), ParseError);
    EXPECT_THROW(parse_matrix("# only comments\n"), ValidationError);
    EXPECT_THROW(correlation_matrix(parse_matrix("1.2 0\n")), ParseError);
}

TEST(Counts, ConstantCountsGiveZero) {
    MatrixFile m{{{50, 50}, {50, 50}, {50, 50}}};
    const auto n = normalize_counts(m);
    for (const auto& v : n.tensor.values()) EXPECT_DOUBLE_EQ(v.real(), 0.0);
    EXPECT_EQ(n.clipped, 0u);
}

TEST(Counts, CosineSquaredScan) {
    // two full periods of alpha for each beta
    const double pi = std::numbers::pi;
    const std::size_t rows = 16;
    const double betas[] = {0.0, pi / 4};
    MatrixFile m;
    for (std::size_t i = 0; i < rows; ++i) {
        const double a = 4 * pi * i / rows;
        std::vector<double> r;
        for (double b : betas) r.push_back(std::round(1e6 * std::pow(std::cos((a + b) / 2), 2)));
        m.rows.push_back(r);
    }
    const auto n = normalize_counts(m);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            EXPECT_NEAR(n.tensor(i, j).real(), std::cos(4 * pi * i / rows + betas[j]), 1e-5);
}

TEST(Counts, SyntheticWeihsColumn) {
    const auto w = read_matrix_file(LHVLP_DATA_DIR "/weihs.txt");
    // counts proportional to (1 + E) / 4, mean of (1 + E) per column rescaled to 1
    MatrixFile counts;
    std::vector<double> mean(w.col_count(), 0.0);
    for (const auto& r : w.rows)
        for (std::size_t j = 0; j < r.size(); ++j) mean[j] += (1 + r[j]) / w.row_count();
    for (const auto& r : w.rows) {
        std::vector<double> c;
        for (std::size_t j = 0; j < r.size(); ++j) c.push_back(std::round(1000 * (1 + r[j]) / mean[j]));
        counts.rows.push_back(c);
    }
    const auto n = normalize_counts(counts);
    for (std::size_t i = 0; i < w.row_count(); ++i) {
        const double e = w.rows[i][0], rescaled = (1 + e) / mean[0] - 1;
        EXPECT_NEAR(n.tensor(i, 0).real(), std::clamp(rescaled, -1.0, 1.0), 0.01);
    }
}

TEST(Counts, ClippingAndErrors) {
    MatrixFile m{{{100, 0}, {0, 0}, {0, 0}}};
    const auto n = normalize_counts(m, CountNormalization::Global);
    EXPECT_DOUBLE_EQ(n.tensor(0, 0).real(), 1.0);
    EXPECT_EQ(n.clipped, 1u);
    EXPECT_THROW(normalize_counts(m), ValidationError);
    EXPECT_THROW(normalize_counts(MatrixFile{{{1.5}}}), ParseError);
    EXPECT_THROW(normalize_counts(MatrixFile{{{-1}}}), ParseError);
}

TEST(Report, DigestIsStable) {
    EXPECT_EQ(digest_hex(""), "cbf29ce484222325");
    EXPECT_EQ(digest_hex("a"), "af63dc4c8601ec8c");
}

TEST(Report, AnalyzeAllZerosIsCompatible) {
    AnalyzeJob job;
    job.matrix = MatrixFile{{{0, 0}, {0, 0}}};
    const auto r = run_analyze(job);
    EXPECT_EQ(r["schema"], kReportSchema);
    EXPECT_NEAR(r["threshold"].get<double>(), 1.0, 1e-12);
    EXPECT_EQ(r["verdict"], "LHV-compatible");
}

TEST(Report, AnalyzeMichler) {
    AnalyzeJob job;
    job.matrix = read_matrix_file(LHVLP_DATA_DIR "/michler.txt");
    const auto r = run_analyze(job);
    EXPECT_NEAR(r["threshold"].get<double>(), 0.796, 0.005);
    EXPECT_EQ(r["verdict"], "LHV-incompatible");
    EXPECT_LT(r["residuals"]["model_deviation"].get<double>(), 1e-9);
    EXPECT_NEAR(replay(r)["threshold"].get<double>(), r["threshold"].get<double>(), 1e-9);
}

TEST(Report, ThresholdRoundTrip) {
    ThresholdJob job;
    job.problem = {Family::QubitCoplanar, {2, 2}, 2};
    job.optimizer.restarts = 3;
    job.optimizer.seed = 5;
    const auto r = run_threshold(job);
    // survives serialization
    const auto back = Json::parse(r.dump());
    const auto again = replay(back);
    EXPECT_NEAR(again["threshold"].get<double>(), r["threshold"].get<double>(), 1e-9);
    EXPECT_EQ(again["input_digest"], r["input_digest"]);
    EXPECT_EQ(r["restarts"].size(), 3u);
    EXPECT_FALSE(r["model"].empty());
}

TEST(Report, QunitRoundTrip) {
    ThresholdJob job;
    job.problem = {Family::QunitMultiport, {2, 2}, 2};
    job.optimizer.restarts = 2;
    const auto r = run_threshold(job);
    EXPECT_EQ(r["threshold_kind"], "noise");
    EXPECT_NEAR(replay(r)["threshold"].get<double>(), r["threshold"].get<double>(), 1e-9);
}

TEST(Report, ReplayRejectsForeignDocuments) {
    EXPECT_THROW(replay(Json::object()), ValidationError);
    EXPECT_THROW(replay(Json{{"schema", kReportSchema}, {"command", "photonic"}, {"config", Json::object()}}),
                 ValidationError);
    EXPECT_THROW(replay(Json{{"schema", kReportSchema}, {"command", "threshold"}, {"config", {{"family", "x"}}}}),
                 ValidationError);
}

TEST(Report, AnalyticSuites) {
    const auto g = run_ghz_paradox(2, 5);
    EXPECT_EQ(g["paradoxes"].size(), 7u);
    const auto i = run_inequalities(2, 4);
    EXPECT_EQ(i["geometric"].size(), 3u);
    EXPECT_EQ(i["geometric"][0]["visibility_threshold_pct"], 77.0);
}
