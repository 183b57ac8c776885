#include "cirw/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cirw/numeric.hpp"

namespace cirw {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream os;
  os << "line " << line << ": " << msg;
  throw ConfigError(os.str());
}

double parse_double(const std::string& text, int line, const char* what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    fail(line, std::string("cannot parse ") + what + " '" + t + "'");
  }
  if (used != t.size()) {
    fail(line, std::string("trailing characters in ") + what + " '" + t + "'");
  }
  return v;
}

/// Plain double or exact-looking fraction "p/q".
double parse_rate(const std::string& text, int line) {
  const std::string t = trim(text);
  const std::size_t slash = t.find('/');
  if (slash == std::string::npos) return parse_double(t, line, "rate");
  const double num = parse_double(t.substr(0, slash), line, "rate numerator");
  const double den =
      parse_double(t.substr(slash + 1), line, "rate denominator");
  if (den == 0.0) fail(line, "rate denominator is zero");
  return num / den;
}

std::int64_t parse_int(const std::string& text, int line, const char* what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    fail(line, std::string("cannot parse ") + what + " '" + t + "'");
  }
  if (used != t.size()) {
    fail(line, std::string("trailing characters in ") + what + " '" + t + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

GroupSpec parse_group_at(const std::string& text, int line) {
  const std::string t = trim(text);
  const std::size_t open = t.find('(');
  if (open == std::string::npos || t.back() != ')') {
    fail(line, "group descriptor must look like family(args)");
  }
  const std::string family = trim(t.substr(0, open));
  const std::string args = t.substr(open + 1, t.size() - open - 2);

  if (family == "lattice") {
    std::vector<std::int64_t> moduli;
    for (const std::string& part : split(args, ',')) {
      moduli.push_back(parse_int(part, line, "lattice modulus"));
    }
    return GroupSpec::lattice(std::move(moduli));
  }
  const std::int64_t n = parse_int(args, line, "group parameter");
  if (family == "hypercube") return GroupSpec::hypercube(static_cast<int>(n));
  if (family == "symmetric") return GroupSpec::symmetric(static_cast<int>(n));
  if (family == "dihedral") return GroupSpec::dihedral(static_cast<int>(n));
  fail(line, "unknown group family '" + family + "'");
}

Element parse_lattice_generator(const GroupSpec& g, const std::string& t,
                                int line) {
  std::string s = t;
  std::int64_t sign = 1;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    sign = s[0] == '-' ? -1 : 1;
    s = trim(s.substr(1));
  }
  if (s.size() < 2 || s[0] != 'e') {
    fail(line, "lattice generator must be a signed unit vector like +e1");
  }
  const std::int64_t k = parse_int(s.substr(1), line, "coordinate index");
  const auto& moduli = g.moduli();
  if (k < 1 || static_cast<std::size_t>(k) > moduli.size()) {
    fail(line, "coordinate index out of range");
  }
  Element e(moduli.size(), 0);
  const std::int64_t m = moduli[static_cast<std::size_t>(k - 1)];
  e[static_cast<std::size_t>(k - 1)] = sign == 1 ? 1 : (m > 0 ? m - 1 : -1);
  return e;
}

Element parse_symmetric_generator(const GroupSpec& g, const std::string& t,
                                  int line) {
  const int n = g.degree();
  Element perm(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < perm.size(); ++i) {
    perm[i] = static_cast<std::int64_t>(i);
  }
  std::size_t pos = 0;
  bool any = false;
  while (pos < t.size()) {
    if (std::isspace(static_cast<unsigned char>(t[pos]))) {
      ++pos;
      continue;
    }
    if (t[pos] != '(') fail(line, "expected '(' in cycle notation");
    const std::size_t close = t.find(')', pos);
    if (close == std::string::npos) fail(line, "unclosed cycle");
    std::string inner = t.substr(pos + 1, close - pos - 1);
    std::replace(inner.begin(), inner.end(), ',', ' ');
    std::istringstream is(inner);
    std::vector<std::int64_t> cycle;
    std::int64_t sym = 0;
    while (is >> sym) {
      if (sym < 1 || sym > n) fail(line, "cycle symbol out of range");
      cycle.push_back(sym - 1);
    }
    if (!is.eof()) fail(line, "bad cycle symbol");
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const std::int64_t from = cycle[i];
      const std::int64_t to = cycle[(i + 1) % cycle.size()];
      if (perm[static_cast<std::size_t>(from)] != from) {
        fail(line, "cycles are not disjoint");
      }
      perm[static_cast<std::size_t>(from)] = to;
    }
    any = true;
    pos = close + 1;
  }
  if (!any) fail(line, "empty permutation descriptor");
  return perm;
}

Element parse_dihedral_generator(const GroupSpec& g, const std::string& t,
                                 int line) {
  const std::int64_t n = g.degree();
  std::size_t pos = 0;
  std::int64_t rot = 0;
  std::int64_t flip = 0;
  if (pos < t.size() && t[pos] == 'r') {
    ++pos;
    std::size_t digits = pos;
    while (digits < t.size() &&
           std::isdigit(static_cast<unsigned char>(t[digits]))) {
      ++digits;
    }
    rot = digits == pos ? 1 : parse_int(t.substr(pos, digits - pos), line,
                                        "rotation exponent");
    pos = digits;
  }
  if (pos < t.size() && t[pos] == 's') {
    flip = 1;
    ++pos;
  }
  if (pos != t.size() || (rot == 0 && flip == 0)) {
    fail(line, "dihedral generator must be a word like r, r2, s, r3s");
  }
  rot = ((rot % n) + n) % n;
  return Element{rot, flip};
}

}  // namespace

GroupSpec parse_group_descriptor(const std::string& text) {
  return parse_group_at(text, 0);
}

Element parse_generator_descriptor(const GroupSpec& g,
                                   const std::string& text) {
  const std::string t = trim(text);
  switch (g.family()) {
    case GroupFamily::lattice:
      return parse_lattice_generator(g, t, 0);
    case GroupFamily::symmetric:
      return parse_symmetric_generator(g, t, 0);
    case GroupFamily::dihedral:
      return parse_dihedral_generator(g, t, 0);
  }
  throw ConfigError("unreachable group family");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  std::vector<std::string> seen;

  while (std::getline(is, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;

    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for '" + key + "'");

    if (key != "generator") {
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
        fail(line, "duplicate key '" + key + "'");
      }
      seen.push_back(key);
    }
    cfg.echo.emplace_back(key, value);

    if (key == "group") {
      cfg.group = parse_group_at(value, line);
    } else if (key == "generator") {
      if (!cfg.group) fail(line, "generator before group");
      const std::size_t colon = value.rfind(':');
      if (colon == std::string::npos) {
        fail(line, "generator line must be '<descriptor> : <rate>'");
      }
      const std::string desc = trim(value.substr(0, colon));
      Element e;
      switch (cfg.group->family()) {
        case GroupFamily::lattice:
          e = parse_lattice_generator(*cfg.group, desc, line);
          break;
        case GroupFamily::symmetric:
          e = parse_symmetric_generator(*cfg.group, desc, line);
          break;
        case GroupFamily::dihedral:
          e = parse_dihedral_generator(*cfg.group, desc, line);
          break;
      }
      const double rate = parse_rate(value.substr(colon + 1), line);
      if (!(rate > 0.0)) fail(line, "generator rate must be > 0");
      cfg.generators.emplace_back(std::move(e), rate);
    } else if (key == "t_grid") {
      if (value.rfind("log(", 0) == 0 && value.back() == ')') {
        const auto parts =
            split(value.substr(4, value.size() - 5), ',');
        if (parts.size() != 3) fail(line, "t_grid log range needs 3 args");
        const double lo = parse_double(parts[0], line, "t_grid min");
        const double hi = parse_double(parts[1], line, "t_grid max");
        const std::int64_t n = parse_int(parts[2], line, "t_grid points");
        if (!(lo > 0.0) || hi < lo || n < 1) fail(line, "bad t_grid range");
        cfg.t_grid = log_spaced(lo, hi, static_cast<std::size_t>(n));
      } else {
        for (const std::string& part : split(value, ',')) {
          cfg.t_grid.push_back(parse_double(part, line, "t_grid entry"));
        }
      }
    } else if (key == "kernel_tol") {
      cfg.kernel_tol = parse_double(value, line, "kernel_tol");
      if (!(cfg.kernel_tol > 0.0 && cfg.kernel_tol <= 1e-6)) {
        fail(line, "kernel_tol must be in (0, 1e-6]");
      }
    } else if (key == "lemma_tol") {
      cfg.lemma_tol = parse_double(value, line, "lemma_tol");
      if (!(cfg.lemma_tol > 0.0)) fail(line, "lemma_tol must be > 0");
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(value, line, "seed"));
    } else if (key == "threads") {
      const std::int64_t v = parse_int(value, line, "threads");
      if (v < 1) fail(line, "threads must be >= 1");
      cfg.threads = static_cast<int>(v);
    } else if (key == "eps") {
      cfg.eps = parse_double(value, line, "eps");
      if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) {
        fail(line, "eps must be in (0, 1)");
      }
    } else if (key == "insertion_n") {
      const std::int64_t v = parse_int(value, line, "insertion_n");
      if (v < 0) fail(line, "insertion_n must be >= 0");
      cfg.insertion_n = static_cast<std::size_t>(v);
    } else if (key == "out_format") {
      if (value != "csv" && value != "json") {
        fail(line, "out_format must be csv or json");
      }
      cfg.out_format = value;
    } else if (key == "out_path") {
      cfg.out_path = value;
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }

  if (!cfg.group) throw ConfigError("config is missing a group line");
  if (cfg.generators.empty()) {
    throw ConfigError("config has no generator lines");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse_config_text(buffer.str());
}

RateMeasure build_measure(const ExperimentConfig& cfg) {
  return RateMeasure::from_generators(*cfg.group, cfg.generators);
}

}  // namespace cirw
