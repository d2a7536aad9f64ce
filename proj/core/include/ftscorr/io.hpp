#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftscorr/grid.hpp"

namespace ftscorr {

// Data-level failures (unreadable files, ragged rows, bad cells). The CLI
// maps these to its data-error exit code.
class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Parsed curve table: one curve per row, optional row labels from a leading
// non-numeric column. `warnings` records rows dropped under the drop policy.
struct CurveTable {
    Eigen::MatrixXd values;
    std::vector<std::string> labels;    // empty when the file has none
    std::vector<std::string> warnings;  // one entry per dropped row
};

enum class RowPolicy {
    drop_with_log,  // drop rows with non-numeric or non-finite cells, record a warning
    strict          // any bad cell is an io_error
};

// Reads delimited text (tab, comma, or whitespace; detected from the first
// data line). An optional header line and an optional leading label column
// are detected by parseability. Rows must be rectangular after label
// stripping; a row with the wrong cell count or an unparseable cell is
// handled per policy, with messages naming the row and column.
CurveTable load_curves(const std::string& path, RowPolicy policy = RowPolicy::drop_with_log);

FunctionalSeries to_functional_series(const CurveTable& table);

// Writes curves as TSV with 17 significant digits, one curve per row, so a
// write-read roundtrip reproduces values to binary precision.
void write_curves(std::ostream& out, const FunctionalSeries& series);
void write_curves(const std::string& path, const FunctionalSeries& series);

// Intraday cumulative log-returns: R_t(x_j) = 100 (log P_t(x_j) - log P_t(x_1)).
// The first column is identically zero. Nonpositive prices are a domain
// error identifying (t, j), 1-based.
FunctionalSeries intraday_returns(const CurveTable& prices);

enum class DemeanMode { none, global, local };

// Optional preprocessing: subtracts the global mean curve or a centered
// local-window mean (window half-width n) from every curve.
FunctionalSeries demean_series(const FunctionalSeries& series, DemeanMode mode, int n = 0);

}  // namespace ftscorr
