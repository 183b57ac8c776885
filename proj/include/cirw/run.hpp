#pragma once

#include <string>

#include "cirw/config.hpp"
#include "cirw/report.hpp"

namespace cirw {

/// Commands: validate, heat, stats, curvature, verify-lemmas, bound-report,
/// sharpness, cutoff-report.
struct RunResult {
  Report report;
  int exit_code = 0;  // 0 all checks pass, 1 a check failed
};

/// Executes one command against a parsed config.  Malformed requests and
/// module failures propagate as exceptions (the CLI maps them to exit 2).
RunResult run_command(const std::string& command, const ExperimentConfig& cfg);

}  // namespace cirw
