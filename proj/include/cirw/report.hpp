#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace cirw {

/// Tabular command output.  Cells are preformatted strings (doubles via
/// format_double) so CSV and JSON carry identical values and reports are
/// byte-reproducible for a fixed config and seed.
struct Report {
  int schema_version = 1;
  std::string command;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  bool pass = true;
  std::string summary;
  double wall_seconds = 0.0;  // excluded from byte comparisons
};

/// Shortest-faithful decimal form (%.17g).
std::string format_double(double v);
std::string format_bool(bool b);

/// Metadata as leading '# key = value' lines, then a header row, then one
/// line per row; cells containing commas, quotes, or newlines are quoted.
void write_csv(const Report& r, std::ostream& os);

/// Same content as a JSON object with a `rows` array (cells as strings).
void write_json(const Report& r, std::ostream& os);

/// Inverse of write_csv; throws std::runtime_error on malformed input.
Report parse_csv_report(std::istream& is);

}  // namespace cirw
