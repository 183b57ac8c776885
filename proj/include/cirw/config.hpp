#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cirw/group.hpp"
#include "cirw/rate_measure.hpp"

namespace cirw {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed experiment description.  Flat `key = value` text; `generator`
/// lines repeat, everything else appears at most once.
struct ExperimentConfig {
  std::optional<GroupSpec> group;
  /// One entry per generator line; rate applies to the element and its
  /// inverse (once when the element is an involution).
  std::vector<std::pair<Element, double>> generators;
  std::vector<double> t_grid;
  double kernel_tol = 1e-12;
  double lemma_tol = 1e-10;
  std::uint64_t seed = 1;
  int threads = 1;
  double eps = 0.25;       // TV threshold for mixing-time commands
  std::size_t insertion_n = 3;  // word length for the insertion check
  std::string out_format = "csv";  // csv | json
  std::string out_path;            // empty = stdout

  /// Raw (key, value) lines in file order, echoed into reports.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Group descriptor: lattice(m1,...,md) with 0 for an infinite factor,
/// hypercube(d), symmetric(n), dihedral(n).
GroupSpec parse_group_descriptor(const std::string& text);

/// Generator descriptor, family-specific:
///  - lattice/hypercube: signed unit vector "+e1", "-e2", "e3";
///  - symmetric: cycle notation "(1 2)" or "(1 2 3)(4 5)", 1-based;
///  - dihedral: words "r", "r2", "s", "r3s".
Element parse_generator_descriptor(const GroupSpec& g, const std::string& text);

/// Throws ConfigError with a "line N:" prefix on any malformed input.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Rate measure from the generator lines (inverses filled in).
RateMeasure build_measure(const ExperimentConfig& cfg);

}  // namespace cirw
