#pragma once

// Plain-text matrices of measured correlations or coincidence counts.

#include <lhvlp/errors.hpp>
#include <lhvlp/tensor.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace lhvlp {

/// Rows are settings of observer A, columns settings of observer B. Blank
/// lines and lines starting with '#' are skipped.
struct MatrixFile {
    std::vector<std::vector<double>> rows;

    std::size_t row_count() const noexcept { return rows.size(); }
    std::size_t col_count() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
};

inline MatrixFile parse_matrix(std::istream& in) {
    MatrixFile m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::vector<double> row;
        while (pos < line.size()) {
            const std::size_t end = line.find_first_of(" \t\r", pos);
            const std::string tok = line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
            double v = 0.0;
            const char* first = tok.data();
            const char* last = tok.data() + tok.size();
            if (*first == '+') ++first;
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc{} || ptr != last)
                throw ParseError("cannot parse '" + tok + "' as a number", lineno, pos + 1);
            if (!std::isfinite(v)) throw ParseError("non-finite value '" + tok + "'", lineno, pos + 1);
            row.push_back(v);
            pos = end == std::string::npos ? line.size() : line.find_first_not_of(" \t\r", end);
            if (pos == std::string::npos) break;
        }
        if (!m.rows.empty() && row.size() != m.rows.front().size())
            throw ParseError("row has " + std::to_string(row.size()) + " entries, expected " +
                                 std::to_string(m.rows.front().size()),
                             lineno, 1);
        m.rows.push_back(std::move(row));
    }
    if (m.rows.empty()) throw ValidationError("matrix file contains no data");
    return m;
}

inline MatrixFile parse_matrix(const std::string& text) {
    std::istringstream in(text);
    return parse_matrix(in);
}

inline MatrixFile read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return parse_matrix(in);
}

/// Correlation tensor from a matrix whose entries must lie in [-1, 1].
inline CorrelationTensor correlation_matrix(const MatrixFile& m) {
    for (std::size_t i = 0; i < m.rows.size(); ++i)
        for (std::size_t j = 0; j < m.rows[i].size(); ++j)
            if (std::abs(m.rows[i][j]) > 1.0 + 1e-9)
                throw ParseError("correlation value outside [-1, 1]", i + 1, j + 1);
    return CorrelationTensor::from_rows(m.rows);
}

/// Which counts define the level that corresponds to probability 1/4.
enum class CountNormalization {
    PerColumn,  // mean over the rows of each column (rows scan a full period)
    PerRow,     // mean over the columns of each row
    Global,     // mean over the whole matrix
};

struct NormalizedCounts {
    CorrelationTensor tensor;
    std::size_t clipped = 0;  // entries pulled back into [-1, 1]
};

/// E = 4 P(+,+) - 1 with P(+,+) = count / (4 mean), i.e. E = count / mean - 1.
inline NormalizedCounts normalize_counts(const MatrixFile& counts,
                                         CountNormalization mode = CountNormalization::PerColumn) {
    const std::size_t r = counts.row_count(), c = counts.col_count();
    if (r == 0 || c == 0) throw ValidationError("empty count matrix");
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const double v = counts.rows[i][j];
            if (v < 0.0 || v != std::floor(v)) throw ParseError("counts must be nonnegative integers", i + 1, j + 1);
        }
    auto mean_of = [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        std::size_t n = 0;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < c; ++b) {
                const bool use = mode == CountNormalization::Global || (mode == CountNormalization::PerColumn && b == j) ||
                                 (mode == CountNormalization::PerRow && a == i);
                if (use) {
                    s += counts.rows[a][b];
                    ++n;
                }
            }
        return s / static_cast<double>(n);
    };
    NormalizedCounts out{CorrelationTensor({r, c}), 0};
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const double mean = mean_of(i, j);
            if (mean <= 0.0) throw ValidationError("zero total counts in a normalization group");
            double e = counts.rows[i][j] / mean - 1.0;
            if (e > 1.0 || e < -1.0) {
                e = std::clamp(e, -1.0, 1.0);
                ++out.clipped;
            }
            out.tensor(i, j) = e;
        }
    return out;
}

}  // namespace lhvlp
