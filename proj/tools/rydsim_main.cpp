#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rydsim/errors.hpp"
#include "rydsim/figures.hpp"
#include "rydsim/version.hpp"

namespace {

int run_selftest() {
  const rydsim::SelfTestReport rep = rydsim::run_self_test();
  std::printf("%-64s %12s %9s  %s\n", "check", "value", "bound", "status");
  for (const auto& c : rep.checks)
    std::printf("%-64s %12.4e %9.1e  %s\n", c.name.c_str(), c.value, c.bound, c.pass ? "pass" : "FAIL");
  const std::size_t passed = static_cast<std::size_t>(
      std::count_if(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.pass; }));
  std::printf("%zu/%zu checks passed\n", passed, rep.checks.size());
  return rep.all_pass() ? 0 : 2;
}

void announce(const rydsim::RunArtifacts& art) {
  for (const auto& f : art.files) std::cout << "wrote " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(rydsim::kToolName) +
               ": rotating-frame simulator for off-resonant pair drives, single-site "
               "addressing echoes, and blockade-gate error budgets"};
  app.require_subcommand(0, 1);

  std::string out_dir = ".";
  if (const char* env = std::getenv("RYDSIM_OUT"); env != nullptr && env[0] != '\0') out_dir = env;
  int threads = 1;
  double tolerance = 0.0;
  std::string format = "csv";

  app.add_option("--out", out_dir, "Output directory (overrides env RYDSIM_OUT)")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for sweep workloads; <=0 uses all cores")
      ->capture_default_str();
  app.add_option("--tolerance", tolerance, "Integrator relative tolerance; 0 keeps per-workload defaults");
  app.add_option("--format", format, "Data table format: csv|json")->capture_default_str();
  app.set_version_flag("--version", std::string(rydsim::kToolName) + " " + rydsim::kVersion);

  CLI::App* fig_cmd = app.add_subcommand("figure", "Write one of the bundled reference datasets");
  std::string fig_id;
  fig_cmd->add_option("id", fig_id, "One of: fig1a fig1b fig3 fig4 fig4mu fig5 fig6 fig7")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario configuration file");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "Scenario config (sectioned key=value text or JSON)")
      ->required();

  CLI::App* selftest_cmd = app.add_subcommand("selftest", "Run the fast invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints the message; 0 for --help/--version
    return rc == 0 ? 0 : 1;
  }

  const rydsim::RunOptions opt{out_dir, threads, tolerance, format};
  try {
    if (fig_cmd->parsed()) {
      announce(rydsim::run_figure(fig_id, opt));
      return 0;
    }
    if (run_cmd->parsed()) {
      const rydsim::RunArtifacts art = rydsim::run_scenario_file(config_path, opt);
      std::cout << "scenario: " << art.metrics.scenario << "\n";
      announce(art);
      return 0;
    }
    if (selftest_cmd->parsed()) return run_selftest();
    std::cout << app.help();
    return 1;
  } catch (const rydsim::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const rydsim::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
}
