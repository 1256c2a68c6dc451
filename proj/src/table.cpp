#include "driftwatch/table.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "driftwatch/errors.hpp"

namespace driftwatch {

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!field.empty()) throw ParseFailure("line " + std::to_string(line_no) + ": stray quote");
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseFailure("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::size_t Table::column_index(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw SchemaMismatch("column '" + name + "' not found");
  return static_cast<std::size_t>(it - columns.begin());
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line, line_no);
    if (t.columns.empty()) {
      t.columns = std::move(fields);
      t.cells.resize(t.columns.size());
      continue;
    }
    if (fields.size() != t.columns.size()) {
      throw ParseFailure("line " + std::to_string(line_no) + ": expected " +
                         std::to_string(t.columns.size()) + " fields, got " +
                         std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) t.cells[c].push_back(std::move(fields[c]));
  }
  if (t.columns.empty()) throw EmptyInput("read_csv: no header row");
  return t;
}

Table read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  return read_csv(in);
}

double parse_numeric(const std::string& cell, std::size_t line_for_error) {
  const std::string low = lower(cell);
  if (cell.empty() || low == "nan" || low == "null" || low == "na") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseFailure("line " + std::to_string(line_for_error) + ": not a number: '" + cell + "'");
  }
  return value;
}

}  // namespace driftwatch
