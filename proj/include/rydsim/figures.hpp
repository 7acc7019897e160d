#pragma once

#include <string>
#include <vector>

#include "rydsim/report.hpp"
#include "rydsim/scenario.hpp"

namespace rydsim {

// Options shared by every figure/scenario entry point.
struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;             // workers for sweep/grid workloads; <= 0 uses all cores
  double tolerance = 0.0;      // integrator relative tolerance; 0 = per-workload default
  std::string format = "csv";  // data tables: "csv" or "json"
};

// Paths written by a run (data tables first, metrics file last) together with
// the metrics that were written.
struct RunArtifacts {
  std::vector<std::string> files;
  MetricsReport metrics;
};

// Bundled reference datasets.  Each id runs a fixed, documented parameter set
// end to end and writes one data table per curve plus a metrics JSON:
//
//   fig1a   single detuned tone at the ceiling-maximizing ratio delta/omega = 2/pi
//   fig1b   cos-pair drive at the full-transfer threshold omega/delta = pi/2
//   fig3    Method 1 addressing, (delta, omega)/2pi = (4, pi) MHz, target + echoed nontarget
//   fig4    Method 2 addressing, same detuning, target + echoed nontarget
//   fig4mu  Method 2 with the microwave interaction echo, kappa = -52.6/56.2
//   fig5    end-of-step leakage vs interaction deviation for both gate schemes
//   fig6    leakage during the gate step at the design interaction strength
//   fig7    leakage averaged over Gaussian tone-timing jitter (ramped envelope)
const std::vector<std::string>& known_figure_ids();

RunArtifacts run_figure(const std::string& id, const RunOptions& opt);

// Dispatch a parsed scenario to the matching protocol and write its
// trajectory/table and metrics JSON into opt.out_dir.
RunArtifacts run_scenario(const ScenarioConfig& cfg, const RunOptions& opt);
RunArtifacts run_scenario_file(const std::string& config_path, const RunOptions& opt);

// Fast invariant suite behind the `selftest` command.  Each check compares a
// measured figure of merit against a fixed bound; the sabotage check verifies
// that an injected sign error is actually caught (its pass condition is that
// the echo breaks).
struct SelfTestCheck {
  std::string name;
  double value = 0.0;  // measured
  double bound = 0.0;  // threshold compared against
  bool pass = false;
};

struct SelfTestReport {
  std::vector<SelfTestCheck> checks;
  bool all_pass() const;
};

SelfTestReport run_self_test();

}  // namespace rydsim
