#pragma once

#include <istream>
#include <string>
#include <vector>

namespace driftwatch {

/// Column-major table of raw string cells, as read from a CSV with a header.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> cells;  // cells[c][r]

  std::size_t row_count() const { return columns.empty() ? 0 : cells.front().size(); }
  /// Index of a named column, or throws SchemaMismatch.
  std::size_t column_index(const std::string& name) const;
};

/// Parse CSV with a header row. Supports quoted fields with embedded commas
/// and doubled quotes. Throws ParseFailure with the offending line number.
Table read_csv(std::istream& in);
Table read_csv_file(const std::string& path);

/// Parse a cell as double; empty cells and the literals "nan"/"null"/"na"
/// come back as NaN (treated as missing upstream).
double parse_numeric(const std::string& cell, std::size_t line_for_error);

}  // namespace driftwatch
