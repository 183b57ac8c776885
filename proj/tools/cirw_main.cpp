#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cirw/config.hpp"
#include "cirw/report.hpp"
#include "cirw/run.hpp"

namespace {

void emit(const cirw::Report& report, const cirw::ExperimentConfig& cfg) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      throw std::runtime_error("cannot write to '" + cfg.out_path + "'");
    }
    os = &file;
  }
  if (cfg.out_format == "json") {
    cirw::write_json(report, *os);
  } else {
    cirw::write_csv(report, *os);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conjugacy-invariant random walks: exact kernels, curvature, "
               "and bound reports"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  int threads = 0;

  const std::vector<std::string> commands = {
      "validate",      "heat",         "stats",     "curvature",
      "verify-lemmas", "bound-report", "sharpness", "cutoff-report"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config file")
        ->required();
    sub->add_option("--out", out_path, "output path (default from config)");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "override the config thread count");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    cirw::ExperimentConfig cfg = cirw::parse_config_file(config_path);
    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--out")) cfg.out_path = out_path;
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--threads")) cfg.threads = threads;

    const cirw::RunResult result = cirw::run_command(sub->get_name(), cfg);
    emit(result.report, cfg);
    std::cerr << sub->get_name() << ": "
              << (result.report.pass ? "pass" : "FAIL") << " ("
              << result.report.rows.size() << " rows, "
              << result.report.wall_seconds << " s)\n";
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
