#include "ftscorr/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace ftscorr {

namespace {

std::optional<double> parse_cell(const std::string& token) {
    if (token.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) return std::nullopt;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> tokenize(const std::string& line, char delim) {
    std::vector<std::string> tokens;
    if (delim == ' ') {
        std::istringstream stream(line);
        std::string tok;
        while (stream >> tok) tokens.push_back(tok);
    } else {
        std::istringstream stream(line);
        std::string tok;
        while (std::getline(stream, tok, delim)) tokens.push_back(trim(tok));
        if (!line.empty() && line.back() == delim) tokens.push_back("");
    }
    return tokens;
}

}  // namespace

CurveTable load_curves(const std::string& path, RowPolicy policy) {
    std::ifstream file(path);
    if (!file) throw io_error("cannot open file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(file, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        lines.push_back(line);
    }
    if (lines.empty()) throw io_error("file contains no data: " + path);

    const char delim = lines[0].find('\t') != std::string::npos ? '\t'
                       : lines[0].find(',') != std::string::npos ? ','
                                                                 : ' ';

    std::vector<std::vector<std::string>> rows;
    rows.reserve(lines.size());
    for (const auto& l : lines) rows.push_back(tokenize(l, delim));

    // A header is a first line with a non-numeric token past the first
    // column (the first column alone may be a row label on a data line).
    std::size_t first_row = 0;
    {
        const auto& r0 = rows[0];
        for (std::size_t c = 1; c < r0.size(); ++c) {
            if (!parse_cell(r0[c])) {
                first_row = 1;
                break;
            }
        }
        if (first_row == 1 && rows.size() == 1)
            throw io_error("file contains a header but no data rows: " + path);
    }
    const bool labeled = !parse_cell(rows[first_row][0]).has_value();
    const std::size_t width = rows[first_row].size() - (labeled ? 1 : 0);
    if (width == 0) throw io_error("rows contain no numeric cells: " + path);

    CurveTable table;
    std::vector<Eigen::RowVectorXd> kept;
    std::vector<std::string> kept_labels;
    for (std::size_t r = first_row; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::size_t data_row = r - first_row + 1;  // 1-based for messages
        std::string label;
        std::size_t offset = 0;
        if (labeled) {
            if (row.empty()) continue;
            label = row[0];
            offset = 1;
        }
        if (row.size() - offset != width) {
            std::ostringstream msg;
            msg << "row " << data_row << " has " << (row.size() - offset)
                << " cells, expected " << width;
            if (policy == RowPolicy::strict) throw io_error(msg.str());
            table.warnings.push_back("dropped " + msg.str());
            continue;
        }
        Eigen::RowVectorXd values(width);
        bool ok = true;
        for (std::size_t c = 0; c < width; ++c) {
            const auto v = parse_cell(row[offset + c]);
            if (!v) {
                std::ostringstream msg;
                msg << "row " << data_row << " column " << (c + 1)
                    << ": cannot parse '" << row[offset + c] << "'";
                if (policy == RowPolicy::strict) throw io_error(msg.str());
                table.warnings.push_back("dropped " + msg.str());
                ok = false;
                break;
            }
            values[static_cast<int>(c)] = *v;
        }
        if (!ok) continue;
        kept.push_back(std::move(values));
        if (labeled) kept_labels.push_back(label);
    }
    if (kept.empty()) throw io_error("no usable rows in file: " + path);

    table.values.resize(static_cast<int>(kept.size()), static_cast<int>(width));
    for (std::size_t r = 0; r < kept.size(); ++r)
        table.values.row(static_cast<int>(r)) = kept[r];
    table.labels = std::move(kept_labels);
    return table;
}

FunctionalSeries to_functional_series(const CurveTable& table) {
    return make_functional_series(table.values,
                                  make_uniform_grid(static_cast<int>(table.values.cols())));
}

void write_curves(std::ostream& out, const FunctionalSeries& series) {
    char buf[40];
    for (int t = 0; t < series.length(); ++t) {
        for (int j = 0; j < series.grid.m; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", series.values(t, j));
            if (j > 0) out << '\t';
            out << buf;
        }
        out << '\n';
    }
}

void write_curves(const std::string& path, const FunctionalSeries& series) {
    std::ofstream file(path);
    if (!file) throw io_error("cannot open file for writing: " + path);
    write_curves(file, series);
    if (!file) throw io_error("write failed: " + path);
}

FunctionalSeries intraday_returns(const CurveTable& prices) {
    const int T = static_cast<int>(prices.values.rows());
    const int m = static_cast<int>(prices.values.cols());
    for (int t = 0; t < T; ++t) {
        for (int j = 0; j < m; ++j) {
            if (!(prices.values(t, j) > 0.0)) {
                std::ostringstream msg;
                msg << "nonpositive price at t=" << (t + 1) << " j=" << (j + 1);
                throw std::domain_error(msg.str());
            }
        }
    }
    Eigen::MatrixXd returns(T, m);
    for (int t = 0; t < T; ++t) {
        const double base = std::log(prices.values(t, 0));
        returns(t, 0) = 0.0;
        for (int j = 1; j < m; ++j)
            returns(t, j) = 100.0 * (std::log(prices.values(t, j)) - base);
    }
    return make_functional_series(std::move(returns), make_uniform_grid(m));
}

FunctionalSeries demean_series(const FunctionalSeries& series, DemeanMode mode, int n) {
    if (mode == DemeanMode::none) return series;
    const int T = series.length();
    Eigen::MatrixXd values = series.values;
    if (mode == DemeanMode::global) {
        const Eigen::RowVectorXd mean = values.colwise().mean();
        values.rowwise() -= mean;
    } else {
        if (n < 1) throw std::invalid_argument("local demeaning needs a positive window");
        Eigen::MatrixXd centered(values.rows(), values.cols());
        for (int t = 0; t < T; ++t) {
            const int lo = std::max(0, t - n);
            const int hi = std::min(T - 1, t + n);
            const Eigen::RowVectorXd mean =
                values.middleRows(lo, hi - lo + 1).colwise().mean();
            centered.row(t) = values.row(t) - mean;
        }
        values = std::move(centered);
    }
    return make_functional_series(std::move(values), series.grid);
}

}  // namespace ftscorr
