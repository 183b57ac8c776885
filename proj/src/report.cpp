#include "cirw/report.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace cirw {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

namespace {

bool needs_quoting(const std::string& cell) {
  return cell.find_first_of(",\"\n") != std::string::npos;
}

std::string quote(const std::string& cell) {
  if (!needs_quoting(cell)) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(const std::vector<std::string>& cells, std::ostream& os) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << quote(cells[i]);
  }
  os << '\n';
}

std::vector<std::string> parse_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw std::runtime_error("report: unterminated quote");
  cells.push_back(std::move(cell));
  return cells;
}

}  // namespace

void write_csv(const Report& r, std::ostream& os) {
  os << "# schema_version = " << r.schema_version << '\n';
  os << "# command = " << r.command << '\n';
  for (const auto& [key, value] : r.config_echo) {
    os << "# config." << key << " = " << value << '\n';
  }
  os << "# pass = " << format_bool(r.pass) << '\n';
  if (!r.summary.empty()) os << "# summary = " << r.summary << '\n';
  os << "# wall_seconds = " << format_double(r.wall_seconds) << '\n';
  write_row(r.columns, os);
  for (const auto& row : r.rows) write_row(row, os);
}

void write_json(const Report& r, std::ostream& os) {
  nlohmann::json j;
  j["schema_version"] = r.schema_version;
  j["command"] = r.command;
  nlohmann::json config = nlohmann::json::array();
  for (const auto& [key, value] : r.config_echo) {
    config.push_back({{"key", key}, {"value", value}});
  }
  j["config"] = std::move(config);
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  j["pass"] = r.pass;
  j["summary"] = r.summary;
  j["wall_seconds"] = r.wall_seconds;
  os << j.dump(2) << '\n';
}

Report parse_csv_report(std::istream& is) {
  Report r;
  r.pass = false;
  std::string line;
  bool have_columns = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string meta = line.substr(1);
      const std::size_t eq = meta.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error("report: malformed metadata line");
      }
      auto strip = [](std::string s) {
        while (!s.empty() && s.front() == ' ') s.erase(s.begin());
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s;
      };
      const std::string key = strip(meta.substr(0, eq));
      const std::string value = strip(meta.substr(eq + 1));
      if (key == "schema_version") {
        r.schema_version = std::stoi(value);
      } else if (key == "command") {
        r.command = value;
      } else if (key == "pass") {
        r.pass = value == "true";
      } else if (key == "summary") {
        r.summary = value;
      } else if (key == "wall_seconds") {
        r.wall_seconds = std::stod(value);
      } else if (key.rfind("config.", 0) == 0) {
        r.config_echo.emplace_back(key.substr(7), value);
      } else {
        throw std::runtime_error("report: unknown metadata key '" + key + "'");
      }
      continue;
    }
    if (!have_columns) {
      r.columns = parse_row(line);
      have_columns = true;
    } else {
      r.rows.push_back(parse_row(line));
    }
  }
  if (!have_columns) throw std::runtime_error("report: missing header row");
  return r;
}

}  // namespace cirw
