#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lrcov/core.hpp"
#include "lrcov/simulate.hpp"

namespace lrcov {

/// Reads a rectangular numeric CSV (rows = time). A first row containing a
/// non-numeric cell is treated as a header and skipped. Accepts LF and CRLF.
/// Throws ParseError with the 1-based row/column of the first bad cell.
Matrix parse_csv_matrix(std::istream& in);

TimeSeriesPanel load_panel(const std::filesystem::path& path);

/// Shortest decimal that round-trips, capped at 12 significant digits.
std::string format_number(double value);

/// Shortest round-trip decimal with no cap.
std::string format_full(double value);

/// Matrix as CSV without header, entries via format_number.
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// Column names of the results table.
inline constexpr const char* kResultsHeader =
    "estimator,frob,l1,max,spec,rel_frob,rel_l1,rel_max,rel_spec";

/// Full-precision results table, one row per estimator.
void write_results_csv(std::ostream& out, const std::vector<EstimatorSummary>& rows);

enum class TableFormat { Csv, Markdown };

/// Two-decimal display table, one row per estimator.
void write_results_table(std::ostream& out, const std::vector<EstimatorSummary>& rows,
                         TableFormat format);

}  // namespace lrcov
