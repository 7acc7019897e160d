#include "rydsim/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <utility>

#include "rydsim/addressing.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/gate.hpp"
#include "rydsim/geometry.hpp"
#include "rydsim/orir.hpp"
#include "rydsim/pulse.hpp"
#include "rydsim/units.hpp"
#include "rydsim/version.hpp"

namespace rydsim {
namespace {

// Single-trajectory workloads default to the tightest practical tolerances.
IntegratorConfig precise_cfg(const RunOptions& opt) {
  IntegratorConfig cfg;
  if (opt.tolerance > 0.0) {
    cfg.rtol = opt.tolerance;
    cfg.atol = opt.tolerance * 1e-2;
    cfg.norm_tolerance = std::max(1e-10, opt.tolerance * 1e3);
  }
  return cfg;
}

// Grid workloads (hundreds to tens of thousands of integrations) default to
// slightly relaxed tolerances; an explicit --tolerance overrides either way.
IntegratorConfig sweep_cfg(const RunOptions& opt) {
  RunOptions defaults = opt;
  if (defaults.tolerance <= 0.0) defaults.tolerance = 1e-10;
  return precise_cfg(defaults);
}

std::string param_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json")
    throw ValidationError("unknown data format '" + format + "' (expected csv|json)");
}

std::string write_table(const CsvTable& table, const RunOptions& opt, const std::string& stem) {
  table.validate();
  const std::string path = opt.out_dir + "/" + stem + (opt.format == "json" ? ".json" : ".csv");
  if (opt.format == "json")
    write_table_json(table, path);
  else
    write_csv(table, path);
  return path;
}

MetricsReport base_report(const std::string& scenario, const IntegratorConfig& cfg) {
  MetricsReport rep;
  rep.scenario = scenario;
  rep.rtol = cfg.rtol;
  rep.atol = cfg.atol;
  rep.tool_version = kVersion;
  return rep;
}

void finish(RunArtifacts& art, const RunOptions& opt, const std::string& stem) {
  art.metrics.validate();
  const std::string path = opt.out_dir + "/" + stem + "_metrics.json";
  write_metrics(art.metrics, path);
  art.files.push_back(path);
}

// Leakages start at exactly zero, so log columns use a floor well below
// anything resolvable at the integration tolerances.
double log10_floored(double v) { return std::log10(std::max(v, 1e-16)); }

std::size_t nearest_index(const std::vector<double>& times, double t) {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  auto i = static_cast<std::size_t>(it - times.begin());
  if (i > 0 && std::abs(times[i - 1] - t) < std::abs(times[i] - t)) --i;
  return i;
}

// t_us column followed by the population of each label at every sample.
void fill_population_table(CsvTable& table, const Trajectory& traj, const std::vector<std::string>& labels) {
  std::vector<std::vector<double>> series;
  series.reserve(labels.size());
  for (const auto& l : labels) series.push_back(traj.population_series(l));
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<double> row{traj.times[k]};
    for (const auto& s : series) row.push_back(s[k]);
    table.add_row(std::move(row));
  }
}

double max_analytic_amplitude_error(const OrirDriveSpec& drive, const Trajectory& traj) {
  double err = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const TwoLevelAmplitudes ana = orir_analytic(drive, traj.times[k]);
    err = std::max(err, std::abs(traj.states[k](0) - ana.ground));
    err = std::max(err, std::abs(traj.states[k](1) - ana.excited));
  }
  return err;
}

// ---------------------------------------------------------------------------
// Figure datasets
// ---------------------------------------------------------------------------

RunArtifacts fig1(const RunOptions& opt, bool pair_drive) {
  const IntegratorConfig cfg = precise_cfg(opt);

  OrirDriveSpec drive;
  drive.omega = units::mhz(1.0);
  double duration = 0.0;
  if (pair_drive) {
    // cos-pair at the full-transfer threshold; run up to the transfer time.
    drive.kind = OrirKind::cos_pair;
    drive.delta = 2.0 * drive.omega / units::pi;
    duration = complete_transfer_time(drive).value();
  } else {
    // Single tone at the ceiling-maximizing ratio delta/omega = 2/pi.
    drive.kind = OrirKind::single_detuned_plus;
    drive.delta = drive.omega * 2.0 / units::pi;
    duration = 4.0 * units::pi / drive.delta;  // t*delta/pi spans [0, 4]
  }

  IntegratorConfig local = cfg;
  local.sample_interval = duration / 400.0;
  const Trajectory traj = simulate_orir(drive, duration, local);

  CsvTable table;
  table.columns = {"t_us", "t_norm", "pop_g", "pop_e"};
  double peak_pop_e = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    const double pg = std::norm(traj.states[k](0));
    const double pe = std::norm(traj.states[k](1));
    peak_pop_e = std::max(peak_pop_e, pe);
    table.add_row({t, t * drive.delta / units::pi, pg, pe});
  }

  const std::string stem = pair_drive ? "fig1b" : "fig1a";
  RunArtifacts art;
  art.files.push_back(write_table(table, opt, stem));
  art.metrics = base_report(stem, cfg);
  art.metrics.parameters = {{"kind", to_string(drive.kind)},
                            {"omega_mhz", param_str(units::to_mhz(drive.omega))},
                            {"delta_mhz", param_str(units::to_mhz(drive.delta))},
                            {"duration_us", param_str(duration)}};
  art.metrics.metrics["analytic_max_amplitude_error"] = max_analytic_amplitude_error(drive, traj);
  art.metrics.metrics["peak_pop_e"] = peak_pop_e;
  if (pair_drive) {
    art.metrics.metrics["final_pop_e"] = std::norm(traj.states.back()(1));
    art.metrics.metrics["transfer_time_us"] = duration;
  } else {
    art.metrics.metrics["ceiling"] = single_detuned_ceiling(drive.omega, drive.delta);
    // The mirrored tone must produce the identical population history.
    OrirDriveSpec mirrored = drive;
    mirrored.kind = OrirKind::single_detuned_minus;
    const Trajectory other = simulate_orir(mirrored, duration, local);
    double gap = 0.0;
    const std::size_t n = std::min(other.times.size(), traj.times.size());
    for (std::size_t k = 0; k < n; ++k)
      gap = std::max(gap, std::abs(std::norm(other.states[k](1)) - std::norm(traj.states[k](1))));
    art.metrics.metrics["opposite_tone_max_pop_gap"] = gap;
  }
  finish(art, opt, stem);
  return art;
}

void add_echo_metrics(MetricsReport& rep, const std::string& tag, const EchoReport& report) {
  rep.metrics["restoration_" + tag] = report.restoration;
  rep.metrics["t_de_" + tag + "_us"] = report.t_de;
  rep.metrics["decay_error_" + tag] = report.decay_error;
  rep.metrics["peak_rydberg_" + tag] = report.peak_rydberg;
}

RunArtifacts fig3(const RunOptions& opt) {
  const IntegratorConfig cfg = precise_cfg(opt);
  const double delta = units::mhz(4.0);
  const AddressingParams params = AddressingParams::method1(delta);  // omega = pi*delta/4, wait 2*pi/delta
  const Sequence seq = method1_sequence(params);

  const EchoResult nontarget = simulate_role(seq, AtomRole::nontarget_perp, 0.73, cfg);
  const EchoResult target = simulate_role(seq, AtomRole::target, 1.0, cfg);
  const EchoResult weak = simulate_role(seq, AtomRole::nontarget_perp, 0.30, cfg);

  RunArtifacts art;
  CsvTable tn, tt;
  tn.columns = tt.columns = {"t_us", "pop_1", "pop_r"};
  fill_population_table(tn, nontarget.trajectory, {"1", "r"});
  fill_population_table(tt, target.trajectory, {"1", "r"});
  art.files.push_back(write_table(tn, opt, "fig3_nontarget"));
  art.files.push_back(write_table(tt, opt, "fig3_target"));

  art.metrics = base_report("fig3", cfg);
  art.metrics.parameters = {{"delta_mhz", param_str(units::to_mhz(delta))},
                            {"omega_mhz", param_str(units::to_mhz(params.omega))},
                            {"t_mu_us", param_str(params.t_mu)},
                            {"tau_us", param_str(params.tau)},
                            {"omega_scale_nontarget", "0.73"}};
  add_echo_metrics(art.metrics, "nontarget", nontarget.report);
  add_echo_metrics(art.metrics, "target", target.report);
  // Rydberg population halfway through the wait (the flat stretch between pulses).
  const double t_mid = params.t0() + 0.5 * params.t_mu;
  const auto pr = nontarget.trajectory.population_series("r");
  art.metrics.metrics["plateau_r_nontarget"] = pr[nearest_index(nontarget.trajectory.times, t_mid)];
  art.metrics.metrics["final_arg_target_rad"] = std::arg(target.report.final_amplitude);
  art.metrics.metrics["t_de_nontarget_scale_030_us"] = weak.report.t_de;
  finish(art, opt, "fig3");
  return art;
}

RunArtifacts fig4(const RunOptions& opt) {
  const IntegratorConfig cfg = precise_cfg(opt);
  const double delta = units::mhz(4.0);
  const AddressingParams params = AddressingParams::method2(delta);  // omega = sqrt(3/2)*delta, no wait
  const Sequence seq = method2_sequence(params);

  const EchoResult nontarget = simulate_role(seq, AtomRole::nontarget_perp, 0.73, cfg);
  const EchoResult target = simulate_role(seq, AtomRole::target, 1.0, cfg);

  RunArtifacts art;
  CsvTable tn, tt;
  tn.columns = {"t_us", "pop_1", "pop_r"};
  tt.columns = {"t_us", "pop_1", "pop_r", "pop_R"};
  fill_population_table(tn, nontarget.trajectory, {"1", "r"});
  fill_population_table(tt, target.trajectory, {"1", "r", "R"});
  art.files.push_back(write_table(tn, opt, "fig4_nontarget"));
  art.files.push_back(write_table(tt, opt, "fig4_target"));

  // A second pass through the same program advances i|R> to -|1>.
  IntegratorConfig coarse = cfg;
  coarse.sample_interval = 0.0;
  const Trajectory second =
      simulate_sequence(seq, target.trajectory.final_state(), selector_for(AtomRole::target), coarse);
  const Complex amp_1_twice = second.final_state().amplitude("1");

  art.metrics = base_report("fig4", cfg);
  art.metrics.parameters = {{"delta_mhz", param_str(units::to_mhz(delta))},
                            {"omega_mhz", param_str(units::to_mhz(params.omega))},
                            {"tau_us", param_str(params.tau)},
                            {"omega_scale_nontarget", "0.73"}};
  add_echo_metrics(art.metrics, "nontarget", nontarget.report);
  add_echo_metrics(art.metrics, "target", target.report);
  const StateVector target_end = target.trajectory.final_state();
  art.metrics.metrics["residual_target"] = target_end.population("1") + target_end.population("r");
  art.metrics.metrics["target_R_pop"] = target_end.population("R");
  art.metrics.metrics["final_arg_target_rad"] = std::arg(target.report.final_amplitude);
  art.metrics.metrics["double_pass_amp_1_re"] = amp_1_twice.real();
  art.metrics.metrics["double_pass_error"] = std::abs(amp_1_twice - Complex(-1.0, 0.0));
  finish(art, opt, "fig4");
  return art;
}

RunArtifacts fig4mu(const RunOptions& opt) {
  const IntegratorConfig cfg = precise_cfg(opt);
  const double delta = units::mhz(4.0);
  const double kappa = -52.6 / 56.2;
  const AddressingParams params = AddressingParams::method2(delta);
  const MicrowaveEchoParams echo = microwave_echo_schedule(kappa, delta);

  const EchoResult nontarget = simulate_microwave_echo_method2(params, echo, AtomRole::nontarget_perp, 0.73, cfg);
  const EchoResult target = simulate_microwave_echo_method2(params, echo, AtomRole::target, 1.0, cfg);

  RunArtifacts art;
  CsvTable tn, tt;
  tn.columns = {"t_us", "pop_1", "pop_r", "pop_rp"};
  tt.columns = {"t_us", "pop_1", "pop_r", "pop_rp", "pop_R"};
  fill_population_table(tn, nontarget.trajectory, {"1", "r", "rp"});
  fill_population_table(tt, target.trajectory, {"1", "r", "rp", "R"});
  art.files.push_back(write_table(tn, opt, "fig4mu_nontarget"));
  art.files.push_back(write_table(tt, opt, "fig4mu_target"));

  art.metrics = base_report("fig4mu", cfg);
  art.metrics.parameters = {{"delta_mhz", param_str(units::to_mhz(delta))},
                            {"omega_mhz", param_str(units::to_mhz(params.omega))},
                            {"kappa", param_str(kappa)},
                            {"omega_mu_mhz", param_str(units::to_mhz(echo.omega_mu))},
                            {"t_mu_us", param_str(echo.t_mu)},
                            {"t_wait_us", param_str(echo.t_wait)},
                            {"winding", param_str(echo.winding)},
                            {"omega_scale_nontarget", "0.73"}};
  add_echo_metrics(art.metrics, "nontarget", nontarget.report);
  add_echo_metrics(art.metrics, "target", target.report);
  const StateVector target_end = target.trajectory.final_state();
  art.metrics.metrics["target_R_pop"] = target_end.population("R");
  art.metrics.metrics["final_arg_target_rad"] = std::arg(target.report.final_amplitude);
  finish(art, opt, "fig4mu");
  return art;
}

RunArtifacts fig5(const RunOptions& opt) {
  const IntegratorConfig cfg = sweep_cfg(opt);
  const double omega = units::mhz(2.0);
  const GateParams orir = GateParams::orir(omega, 12.0);
  const GateParams trad = GateParams::traditional(omega, 12.0);
  const PulseEdge edge = PulseEdge::rectangular();

  const SweepResult orir_q = blockade_sweep(orir, -0.25, 0.25, 201, edge, opt.threads, cfg);
  const SweepResult trad_q = blockade_sweep(trad, -0.25, 0.25, 201, edge, opt.threads, cfg);
  const SweepResult orir_h = blockade_sweep(orir, -0.50, 0.50, 201, edge, opt.threads, cfg);
  const SweepResult trad_h = blockade_sweep(trad, -0.50, 0.50, 201, edge, opt.threads, cfg);

  CsvTable table;
  table.columns = {"v_rel", "leak_orir_log10", "leak_trad_log10"};
  for (std::size_t i = 0; i < orir_q.v_rel.size(); ++i)
    table.add_row({orir_q.v_rel[i], log10_floored(orir_q.leakage[i]), log10_floored(trad_q.leakage[i])});

  RunArtifacts art;
  art.files.push_back(write_table(table, opt, "fig5"));
  art.metrics = base_report("fig5", cfg);
  art.metrics.parameters = {{"omega_mhz", param_str(units::to_mhz(omega))},
                            {"v0_over_omega", "12"},
                            {"points", "201"}};
  art.metrics.metrics["avg_leak_orir_quarter"] = orir_q.average;
  art.metrics.metrics["avg_leak_trad_quarter"] = trad_q.average;
  art.metrics.metrics["suppression_quarter"] = trad_q.average / orir_q.average;
  art.metrics.metrics["avg_leak_orir_half"] = orir_h.average;
  art.metrics.metrics["avg_leak_trad_half"] = trad_h.average;
  art.metrics.metrics["suppression_half"] = trad_h.average / orir_h.average;
  finish(art, opt, "fig5");
  return art;
}

RunArtifacts fig6(const RunOptions& opt) {
  const IntegratorConfig cfg = precise_cfg(opt);
  const double omega = units::mhz(2.0);
  const PulseEdge edge = PulseEdge::rectangular();
  const GateParams orir = GateParams::orir(omega, 12.0);  // v = v0 exactly
  const GateParams trad = GateParams::traditional(omega, 12.0);

  RunArtifacts art;
  double finals[2] = {0.0, 0.0};
  const char* stems[2] = {"fig6_orir", "fig6_traditional"};
  const GateParams* sets[2] = {&orir, &trad};
  for (int i = 0; i < 2; ++i) {
    const LeakageTrajectory lt = leakage_trajectory(*sets[i], edge, 400, cfg);
    CsvTable table;
    table.columns = {"t_us", "leakage", "leak_log10"};
    for (std::size_t k = 0; k < lt.times.size(); ++k)
      table.add_row({lt.times[k], lt.leakage[k], log10_floored(lt.leakage[k])});
    art.files.push_back(write_table(table, opt, stems[i]));
    finals[i] = lt.leakage.back();
  }

  art.metrics = base_report("fig6", cfg);
  art.metrics.parameters = {{"omega_mhz", param_str(units::to_mhz(omega))}, {"v0_over_omega", "12"}};
  art.metrics.metrics["final_leak_orir"] = finals[0];
  art.metrics.metrics["final_leak_trad"] = finals[1];
  art.metrics.metrics["suppression"] = finals[1] / finals[0];
  finish(art, opt, "fig6");
  return art;
}

RunArtifacts fig7(const RunOptions& opt) {
  const IntegratorConfig cfg = sweep_cfg(opt);
  const GateParams params = GateParams::orir(units::mhz(2.0), 12.0, -0.03);
  const PulseEdge edge = PulseEdge::symmetric(EdgeShape::cosine_squared, units::ns(20.0));

  const DurationOptimum tuned = optimize_duration(params, edge, -1.0, -1.0, cfg);

  CsvTable table;
  table.columns = {"sigma_t_ns", "avg_leak_01", "avg_leak_r1"};
  const std::vector<double> sigmas_ns = {0.2, 1.0, 2.0, 3.0, 4.0, 5.0};
  TimingErrorResult last;
  for (double s : sigmas_ns) {
    last = timing_error_average(params, edge, tuned.t_star, units::ns(s), opt.threads, cfg,
                                TimingWindowMode::truncate_to_slot);
    table.add_row({s, last.avg_leakage_01, last.avg_leakage_11});
  }

  RunArtifacts art;
  art.files.push_back(write_table(table, opt, "fig7"));
  art.metrics = base_report("fig7", cfg);
  art.metrics.parameters = {{"omega_mhz", "2"},
                            {"v0_over_omega", "12"},
                            {"v_rel", "-0.03"},
                            {"edge_shape", to_string(EdgeShape::cosine_squared)},
                            {"ramp_ns", "20"},
                            {"window_mode", "truncate-to-slot"}};
  art.metrics.metrics["t_star_ns"] = tuned.t_star * 1e3;
  art.metrics.metrics["leak_01_zero_offset"] = tuned.leakage_01;
  art.metrics.metrics["leak_11_zero_offset"] = tuned.leakage_11;
  art.metrics.metrics["surrogate_gap"] = tuned.surrogate_gap;
  art.metrics.metrics["avg_leak_01_sigma_max"] = last.avg_leakage_01;
  art.metrics.metrics["avg_leak_11_sigma_max"] = last.avg_leakage_11;
  art.metrics.metrics["evaluations_per_sigma"] = static_cast<double>(last.evaluations);
  finish(art, opt, "fig7");
  return art;
}

// ---------------------------------------------------------------------------
// Scenario protocols
// ---------------------------------------------------------------------------

bool bool_or(const ScenarioConfig& cfg, const std::string& section, const std::string& key, bool fallback) {
  if (!cfg.has(section, key)) return fallback;
  const std::string v = cfg.text(section, key);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ValidationError("[" + section + "] " + key + ": expected a boolean, got '" + v + "'");
}

long samples_or(const ScenarioConfig& cfg, long fallback) {
  const long n = cfg.integer_or("output", "samples", fallback);
  if (n < 2 || n > 2000000) throw ValidationError("[output] samples: must lie in [2, 2000000]");
  return n;
}

std::string file_safe(std::string s) {
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

RunArtifacts scenario_orir_two_level(const ScenarioConfig& cfg, const RunOptions& opt) {
  OrirDriveSpec drive;
  drive.kind = orir_kind_from_string(cfg.text_or("drive", "kind", "cos-pair"));
  drive.omega = units::mhz(cfg.number("drive", "omega_mhz"));
  drive.delta = units::mhz(cfg.number("drive", "delta_mhz"));
  drive.phase = cfg.number_or("drive", "phase_rad", 0.0);
  drive.validate();

  double duration = cfg.number_or("drive", "duration_us", 0.0);
  if (duration <= 0.0) {
    const auto transfer = drive.phase == 0.0 ? complete_transfer_time(drive) : std::nullopt;
    duration = transfer ? *transfer : 4.0 * units::pi / drive.delta;
  }
  const long samples = samples_or(cfg, 400);

  IntegratorConfig icfg = precise_cfg(opt);
  icfg.sample_interval = duration / static_cast<double>(samples);
  const Trajectory traj = simulate_orir(drive, duration, icfg);

  CsvTable table;
  table.columns = {"t_us", "t_norm", "pop_g", "pop_e"};
  double peak_pop_e = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double pe = std::norm(traj.states[k](1));
    peak_pop_e = std::max(peak_pop_e, pe);
    table.add_row({traj.times[k], traj.times[k] * drive.delta / units::pi, std::norm(traj.states[k](0)), pe});
  }

  RunArtifacts art;
  art.files.push_back(write_table(table, opt, "orir_two_level"));
  art.metrics = base_report("orir-two-level", icfg);
  art.metrics.parameters = {{"kind", to_string(drive.kind)},
                            {"omega_mhz", param_str(units::to_mhz(drive.omega))},
                            {"delta_mhz", param_str(units::to_mhz(drive.delta))},
                            {"phase_rad", param_str(drive.phase)},
                            {"duration_us", param_str(duration)}};
  art.metrics.metrics["final_pop_g"] = std::norm(traj.states.back()(0));
  art.metrics.metrics["final_pop_e"] = std::norm(traj.states.back()(1));
  art.metrics.metrics["peak_pop_e"] = peak_pop_e;
  art.metrics.metrics["excited_ceiling"] = excited_ceiling(drive);
  if (drive.phase == 0.0)
    art.metrics.metrics["analytic_max_amplitude_error"] = max_analytic_amplitude_error(drive, traj);
  finish(art, opt, "orir_two_level");
  return art;
}

struct AddressingInputs {
  AddressingParams params;
  AtomRole role = AtomRole::nontarget_perp;
  double scale = 0.73;
};

AddressingInputs read_addressing(const ScenarioConfig& cfg, bool method1) {
  AddressingInputs in;
  const double delta = units::mhz(cfg.number_or("addressing", "delta_mhz", 4.0));
  if (method1) {
    in.params = cfg.has("addressing", "t_mu_us")
                    ? AddressingParams::method1(delta, cfg.number("addressing", "t_mu_us"))
                    : AddressingParams::method1(delta);
  } else {
    in.params = AddressingParams::method2(delta, cfg.number_or("addressing", "t_mu_us", 0.0));
  }
  in.params.tau = cfg.number_or("addressing", "tau_us", in.params.tau);
  in.role = atom_role_from_string(cfg.text_or("addressing", "role", "nontarget-perp"));
  in.scale = cfg.number_or("addressing", "omega_scale", in.role == AtomRole::target ? 1.0 : 0.73);
  in.params.validate();
  return in;
}

void echo_scenario_metrics(MetricsReport& rep, const AddressingInputs& in, const EchoResult& res) {
  rep.parameters = {{"delta_mhz", param_str(units::to_mhz(in.params.delta))},
                    {"omega_mhz", param_str(units::to_mhz(in.params.omega))},
                    {"t_mu_us", param_str(in.params.t_mu)},
                    {"tau_us", param_str(in.params.tau)},
                    {"role", to_string(in.role)},
                    {"omega_scale", param_str(in.scale)}};
  rep.metrics["restoration"] = res.report.restoration;
  rep.metrics["t_de_us"] = res.report.t_de;
  rep.metrics["decay_error"] = res.report.decay_error;
  rep.metrics["peak_rydberg"] = res.report.peak_rydberg;
  rep.metrics["final_amp_re"] = res.report.final_amplitude.real();
  rep.metrics["final_amp_im"] = res.report.final_amplitude.imag();
  rep.metrics["final_arg_rad"] = std::arg(res.report.final_amplitude);
}

RunArtifacts scenario_method1(const ScenarioConfig& cfg, const RunOptions& opt) {
  const AddressingInputs in = read_addressing(cfg, true);
  const IntegratorConfig icfg = precise_cfg(opt);
  const EchoResult res = simulate_role(method1_sequence(in.params), in.role, in.scale, icfg);

  CsvTable table;
  table.columns = {"t_us", "pop_1", "pop_r"};
  fill_population_table(table, res.trajectory, {"1", "r"});

  const std::string stem = "method1_" + file_safe(to_string(in.role));
  RunArtifacts art;
  art.files.push_back(write_table(table, opt, stem));
  art.metrics = base_report("method1", icfg);
  echo_scenario_metrics(art.metrics, in, res);
  finish(art, opt, stem);
  return art;
}

RunArtifacts scenario_method2(const ScenarioConfig& cfg, const RunOptions& opt) {
  const AddressingInputs in = read_addressing(cfg, false);
  const IntegratorConfig icfg = precise_cfg(opt);
  const EchoResult res = simulate_role(method2_sequence(in.params), in.role, in.scale, icfg);

  CsvTable table;
  table.columns = {"t_us", "pop_1", "pop_r", "pop_R"};
  fill_population_table(table, res.trajectory, {"1", "r", "R"});

  const std::string stem = "method2_" + file_safe(to_string(in.role));
  RunArtifacts art;
  art.files.push_back(write_table(table, opt, stem));
  art.metrics = base_report("method2", icfg);
  echo_scenario_metrics(art.metrics, in, res);
  const StateVector end = res.trajectory.final_state();
  art.metrics.metrics["final_pop_R"] = end.population("R");
  art.metrics.metrics["residual_short_lived"] = end.population("1") + end.population("r");
  finish(art, opt, stem);
  return art;
}

RunArtifacts scenario_method2_microwave(const ScenarioConfig& cfg, const RunOptions& opt) {
  AddressingInputs in = read_addressing(cfg, false);
  const double kappa = cfg.number("microwave", "kappa");
  const double omega_mu = units::mhz(cfg.number_or("microwave", "omega_mu_mhz", 0.0));
  MicrowaveEchoParams echo = microwave_echo_schedule(kappa, in.params.delta, omega_mu);
  echo.phase_error_perp = cfg.number_or("microwave", "phase_error_perp_rad", 0.0);
  echo.phase_error_par = cfg.number_or("microwave", "phase_error_parallel_rad", 0.0);

  const IntegratorConfig icfg = precise_cfg(opt);
  const EchoResult res = simulate_microwave_echo_method2(in.params, echo, in.role, in.scale, icfg);

  CsvTable table;
  table.columns = {"t_us", "pop_1", "pop_r", "pop_rp", "pop_R"};
  fill_population_table(table, res.trajectory, {"1", "r", "rp", "R"});

  const std::string stem = "method2_microwave_" + file_safe(to_string(in.role));
  RunArtifacts art;
  art.files.push_back(write_table(table, opt, stem));
  art.metrics = base_report("method2-microwave", icfg);
  echo_scenario_metrics(art.metrics, in, res);
  art.metrics.parameters["kappa"] = param_str(kappa);
  art.metrics.parameters["omega_mu_mhz"] = param_str(units::to_mhz(echo.omega_mu));
  art.metrics.parameters["t_mu_us"] = param_str(echo.t_mu);
  art.metrics.parameters["t_wait_us"] = param_str(echo.t_wait);
  art.metrics.parameters["winding"] = param_str(echo.winding);
  const StateVector end = res.trajectory.final_state();
  art.metrics.metrics["final_pop_R"] = end.population("R");
  finish(art, opt, stem);
  return art;
}

struct GateInputs {
  GateParams params;
  PulseEdge edge;
};

GateInputs read_gate(const ScenarioConfig& cfg, const std::string& default_shape, double default_ramp_ns,
                     double default_v_rel) {
  GateInputs in;
  const GateScheme scheme = gate_scheme_from_string(cfg.text_or("gate", "scheme", "orir"));
  const double omega = units::mhz(cfg.number_or("gate", "omega_mhz", 2.0));
  const double v0_over_omega = cfg.number_or("gate", "v0_over_omega", 12.0);
  const double v_rel = cfg.number_or("gate", "v_rel", default_v_rel);
  in.params = scheme == GateScheme::orir ? GateParams::orir(omega, v0_over_omega, v_rel)
                                         : GateParams::traditional(omega, v0_over_omega, v_rel);

  const EdgeShape shape = edge_shape_from_string(cfg.text_or("gate", "edge_shape", default_shape));
  const double ramp_ns = cfg.number_or("gate", "ramp_ns", default_ramp_ns);
  const double rise_ns = cfg.number_or("gate", "rise_ns", ramp_ns);
  const double fall_ns = cfg.number_or("gate", "fall_ns", ramp_ns);
  in.edge = PulseEdge{shape, units::ns(rise_ns), units::ns(fall_ns)};
  return in;
}

void gate_parameter_echo(MetricsReport& rep, const GateInputs& in) {
  rep.parameters["scheme"] = to_string(in.params.scheme);
  rep.parameters["omega_mhz"] = param_str(units::to_mhz(in.params.omega));
  rep.parameters["v0_over_omega"] = param_str(in.params.v0 / in.params.omega);
  rep.parameters["v_rel"] = param_str(in.params.v0 > 0.0 ? in.params.v / in.params.v0 - 1.0 : 0.0);
  rep.parameters["edge_shape"] = to_string(in.edge.shape);
  rep.parameters["rise_ns"] = param_str(in.edge.rise * 1e3);
  rep.parameters["fall_ns"] = param_str(in.edge.fall * 1e3);
}

RunArtifacts scenario_gate_step2(const ScenarioConfig& cfg, const RunOptions& opt) {
  const GateInputs in = read_gate(cfg, "rectangular", 0.0, 0.0);
  const std::string input_name = cfg.text_or("gate", "input", "11");
  GateInput input;
  if (input_name == "11")
    input = GateInput::in11;
  else if (input_name == "01")
    input = GateInput::in01;
  else
    throw ValidationError("[gate] input: expected 01 or 11, got '" + input_name + "'");
  const double duration_ns = cfg.number_or("gate", "duration_ns", 0.0);
  const double duration = duration_ns > 0.0 ? units::ns(duration_ns) : -1.0;

  TimingOffsets offsets;
  offsets.start_plus = units::ns(cfg.number_or("timing", "start_plus_ns", 0.0));
  offsets.start_minus = units::ns(cfg.number_or("timing", "start_minus_ns", 0.0));
  offsets.end_plus = units::ns(cfg.number_or("timing", "end_plus_ns", 0.0));
  offsets.end_minus = units::ns(cfg.number_or("timing", "end_minus_ns", 0.0));

  const IntegratorConfig icfg = precise_cfg(opt);
  const GateRunResult run = step2_evolve(in.params, input, in.edge, duration, offsets, icfg);

  // Time-resolved leakage at the nominal windows for the same branch
  // (the |01> branch is the interaction-free limit v = 0).
  GateParams traj_params = in.params;
  if (input == GateInput::in01) traj_params.v = 0.0;
  const LeakageTrajectory lt =
      leakage_trajectory(traj_params, in.edge, static_cast<std::size_t>(samples_or(cfg, 400)), icfg);
  CsvTable table;
  table.columns = {"t_us", "leakage"};
  for (std::size_t k = 0; k < lt.times.size(); ++k) table.add_row({lt.times[k], lt.leakage[k]});

  RunArtifacts art;
  art.files.push_back(write_table(table, opt, "gate_step2"));
  art.metrics = base_report("gate-step2", icfg);
  gate_parameter_echo(art.metrics, in);
  art.metrics.parameters["input"] = input_name;
  art.metrics.metrics["leakage"] = run.leakage;
  art.metrics.metrics["retained_re"] = run.retained.real();
  art.metrics.metrics["retained_im"] = run.retained.imag();
  art.metrics.metrics["excited_pop"] = std::norm(run.excited);
  art.metrics.metrics["end_time_us"] = run.end_time;
  art.metrics.metrics["nominal_duration_us"] = in.params.nominal_duration();
  finish(art, opt, "gate_step2");
  return art;
}

RunArtifacts scenario_gate_sweep(const ScenarioConfig& cfg, const RunOptions& opt) {
  const double omega = units::mhz(cfg.number_or("gate", "omega_mhz", 2.0));
  const double v0_over_omega = cfg.number_or("gate", "v0_over_omega", 12.0);
  const double v_min = cfg.number_or("sweep", "v_rel_min", -0.25);
  const double v_max = cfg.number_or("sweep", "v_rel_max", 0.25);
  const long points = cfg.integer_or("sweep", "points", 201);
  if (points < 2 || points > 100000) throw ValidationError("[sweep] points: must lie in [2, 100000]");

  const IntegratorConfig icfg = sweep_cfg(opt);
  const PulseEdge edge = PulseEdge::rectangular();
  const SweepResult orir = blockade_sweep(GateParams::orir(omega, v0_over_omega), v_min, v_max,
                                          static_cast<std::size_t>(points), edge, opt.threads, icfg);
  const SweepResult trad = blockade_sweep(GateParams::traditional(omega, v0_over_omega), v_min, v_max,
                                          static_cast<std::size_t>(points), edge, opt.threads, icfg);

  CsvTable table;
  table.columns = {"v_rel", "leakage_orir", "leakage_traditional"};
  for (std::size_t i = 0; i < orir.v_rel.size(); ++i)
    table.add_row({orir.v_rel[i], orir.leakage[i], trad.leakage[i]});

  RunArtifacts art;
  art.files.push_back(write_table(table, opt, "gate_sweep"));
  art.metrics = base_report("gate-sweep", icfg);
  art.metrics.parameters = {{"omega_mhz", param_str(units::to_mhz(omega))},
                            {"v0_over_omega", param_str(v0_over_omega)},
                            {"v_rel_min", param_str(v_min)},
                            {"v_rel_max", param_str(v_max)},
                            {"points", param_str(static_cast<double>(points))}};
  art.metrics.metrics["avg_leakage_orir"] = orir.average;
  art.metrics.metrics["avg_leakage_traditional"] = trad.average;
  art.metrics.metrics["suppression"] = trad.average / orir.average;
  finish(art, opt, "gate_sweep");
  return art;
}

RunArtifacts scenario_gate_timing(const ScenarioConfig& cfg, const RunOptions& opt) {
  const GateInputs in = read_gate(cfg, "cosine_squared", 20.0, -0.03);
  const double sigma_ns = cfg.number("timing", "sigma_ns");
  if (!(sigma_ns >= 0.0)) throw ValidationError("[timing] sigma_ns: must be nonnegative");
  const std::string mode_name = cfg.text_or("timing", "window_mode", "extended");
  TimingWindowMode mode;
  if (mode_name == "extended")
    mode = TimingWindowMode::extended;
  else if (mode_name == "truncate-to-slot" || mode_name == "truncate_to_slot")
    mode = TimingWindowMode::truncate_to_slot;
  else
    throw ValidationError("[timing] window_mode: expected extended|truncate-to-slot, got '" + mode_name + "'");

  const bool optimize = bool_or(cfg, "timing", "optimize", in.params.scheme == GateScheme::orir);
  if (optimize && in.params.scheme != GateScheme::orir)
    throw ValidationError("[timing] optimize: duration tuning applies to the orir scheme only");

  const IntegratorConfig icfg = sweep_cfg(opt);
  double duration = 0.0;
  double zero01 = 0.0, zero11 = 0.0;
  RunArtifacts art;
  art.metrics = base_report("gate-timing", icfg);
  if (optimize) {
    const DurationOptimum tuned = optimize_duration(in.params, in.edge, -1.0, -1.0, icfg);
    duration = tuned.t_star;
    zero01 = tuned.leakage_01;
    zero11 = tuned.leakage_11;
    art.metrics.metrics["surrogate_gap"] = tuned.surrogate_gap;
  } else {
    const double duration_ns = cfg.number_or("timing", "duration_ns", 0.0);
    duration = duration_ns > 0.0 ? units::ns(duration_ns) : in.params.nominal_duration();
    zero01 = step2_evolve(in.params, GateInput::in01, in.edge, duration, {}, icfg).leakage;
    zero11 = step2_evolve(in.params, GateInput::in11, in.edge, duration, {}, icfg).leakage;
  }

  const TimingErrorResult avg =
      timing_error_average(in.params, in.edge, duration, units::ns(sigma_ns), opt.threads, icfg, mode);

  CsvTable table;
  table.columns = {"sigma_t_ns", "avg_leak_01", "avg_leak_r1"};
  table.add_row({sigma_ns, avg.avg_leakage_01, avg.avg_leakage_11});
  art.files.push_back(write_table(table, opt, "gate_timing"));

  gate_parameter_echo(art.metrics, in);
  art.metrics.parameters["window_mode"] = mode_name;
  art.metrics.parameters["sigma_ns"] = param_str(sigma_ns);
  art.metrics.metrics["duration_us"] = duration;
  art.metrics.metrics["leak_01_zero_offset"] = zero01;
  art.metrics.metrics["leak_11_zero_offset"] = zero11;
  art.metrics.metrics["avg_leak_01"] = avg.avg_leakage_01;
  art.metrics.metrics["avg_leak_11"] = avg.avg_leakage_11;
  art.metrics.metrics["evaluations"] = static_cast<double>(avg.evaluations);
  finish(art, opt, "gate_timing");
  return art;
}

RunArtifacts scenario_geometry(const ScenarioConfig& cfg, const RunOptions& opt) {
  const double spacing = cfg.number_or("lattice", "spacing_um", 16.5);
  const double wavelength = cfg.number_or("lattice", "wavelength_um", 0.78);
  const Lattice lattice = Lattice::cubic(spacing, wavelength);

  GaussianBeam beam;
  beam.waist = cfg.number_or("beam", "waist_um", 2.54);
  beam.wavelength = wavelength;
  beam.focus = lattice.target();
  beam.validate();

  const auto records = site_records(lattice, beam);

  CsvTable table;
  table.columns = {"site", "x_um", "y_um", "z_um", "axial_um", "transverse_um",
                   "rabi_scale", "distance_um", "vdw_relative"};
  double max_offsite_scale = 0.0;
  for (const auto& r : records) {
    table.add_row({static_cast<double>(r.index), r.position.x, r.position.y, r.position.z, r.axial,
                   r.transverse, r.rabi_scale, r.distance, r.vdw_relative});
    if (r.index != lattice.target_index) max_offsite_scale = std::max(max_offsite_scale, r.rabi_scale);
  }

  RunArtifacts art;
  const IntegratorConfig icfg = precise_cfg(opt);  // provenance only; nothing is integrated
  art.files.push_back(write_table(table, opt, "geometry_sites"));
  art.metrics = base_report("geometry", icfg);
  art.metrics.parameters = {{"spacing_um", param_str(spacing)},
                            {"wavelength_um", param_str(wavelength)},
                            {"waist_um", param_str(beam.waist)}};
  art.metrics.metrics["dim_x"] = lattice.nx;
  art.metrics.metrics["dim_y"] = lattice.ny;
  art.metrics.metrics["dim_z"] = lattice.nz;
  art.metrics.metrics["n_sites"] = static_cast<double>(lattice.sites.size());
  art.metrics.metrics["rayleigh_um"] = beam.rayleigh_range();
  art.metrics.metrics["distance_bound_um"] = addressing_distance_bound_default(spacing, wavelength);
  art.metrics.metrics["max_offsite_rabi_scale"] = max_offsite_scale;
  finish(art, opt, "geometry_sites");
  return art;
}

}  // namespace

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

const std::vector<std::string>& known_figure_ids() {
  static const std::vector<std::string> ids = {"fig1a", "fig1b", "fig3", "fig4",
                                               "fig4mu", "fig5", "fig6", "fig7"};
  return ids;
}

RunArtifacts run_figure(const std::string& id, const RunOptions& opt) {
  check_format(opt.format);
  ensure_directory(opt.out_dir);
  if (id == "fig1a") return fig1(opt, false);
  if (id == "fig1b") return fig1(opt, true);
  if (id == "fig3") return fig3(opt);
  if (id == "fig4") return fig4(opt);
  if (id == "fig4mu") return fig4mu(opt);
  if (id == "fig5") return fig5(opt);
  if (id == "fig6") return fig6(opt);
  if (id == "fig7") return fig7(opt);
  throw ValidationError("unknown figure id '" + id + "' (expected fig1a|fig1b|fig3|fig4|fig4mu|fig5|fig6|fig7)");
}

RunArtifacts run_scenario(const ScenarioConfig& cfg, const RunOptions& opt) {
  check_format(opt.format);
  ensure_directory(opt.out_dir);
  const std::string protocol = cfg.protocol();
  if (protocol == "orir-two-level") return scenario_orir_two_level(cfg, opt);
  if (protocol == "method1") return scenario_method1(cfg, opt);
  if (protocol == "method2") return scenario_method2(cfg, opt);
  if (protocol == "method2-microwave") return scenario_method2_microwave(cfg, opt);
  if (protocol == "gate-step2") return scenario_gate_step2(cfg, opt);
  if (protocol == "gate-sweep") return scenario_gate_sweep(cfg, opt);
  if (protocol == "gate-timing") return scenario_gate_timing(cfg, opt);
  if (protocol == "geometry") return scenario_geometry(cfg, opt);
  throw ValidationError("unhandled protocol '" + protocol + "'");
}

RunArtifacts run_scenario_file(const std::string& config_path, const RunOptions& opt) {
  return run_scenario(parse_config_file(config_path), opt);
}

// ---------------------------------------------------------------------------
// Self test
// ---------------------------------------------------------------------------

bool SelfTestReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

double oracle_max_error(const IntegratorConfig& cfg) {
  OrirDriveSpec drive;
  drive.kind = OrirKind::cos_pair;
  drive.omega = units::mhz(1.7);
  drive.delta = units::mhz(0.6);
  const double duration = 3.0 * units::pi / drive.delta;
  IntegratorConfig local = cfg;
  local.sample_interval = duration / 64.0;
  return max_analytic_amplitude_error(drive, simulate_orir(drive, duration, local));
}

double method1_target_error(const IntegratorConfig& cfg) {
  const AddressingParams params = AddressingParams::method1(units::mhz(4.0));
  const EchoResult res = simulate_role(method1_sequence(params), AtomRole::target, 1.0, cfg);
  return std::abs(res.report.final_amplitude - Complex(1.0, 0.0));
}

double method1_echo_deficit(const IntegratorConfig& cfg) {
  const AddressingParams params = AddressingParams::method1(units::mhz(4.0));
  const EchoResult res = simulate_role(method1_sequence(params), AtomRole::nontarget_perp, 0.73, cfg);
  return 1.0 - res.report.restoration;
}

}  // namespace

SelfTestReport run_self_test() {
  SelfTestReport rep;
  auto add = [&rep](const std::string& name, double value, double bound) {
    rep.checks.push_back({name, value, bound, value < bound});
  };

  IntegratorConfig cfg;  // library defaults: rtol 1e-12, atol 1e-14

  add("two-level closed form, max amplitude error", oracle_max_error(cfg), 1e-9);

  {
    OrirDriveSpec drive;
    drive.kind = OrirKind::single_detuned_plus;
    drive.omega = units::mhz(1.1);
    drive.delta = units::mhz(0.8);
    const double w = std::sqrt(drive.omega * drive.omega + drive.delta * drive.delta);
    const Trajectory traj = simulate_orir(drive, units::pi / w, cfg);
    const double ceiling = single_detuned_ceiling(drive.omega, drive.delta);
    add("single-tone ceiling reached at half the generalized Rabi period",
        std::abs(std::norm(traj.states.back()(1)) - ceiling), 1e-8);
  }

  add("method1 target return amplitude error", method1_target_error(cfg), 1e-8);
  add("method1 echo restoration deficit (scale 0.73)", method1_echo_deficit(cfg), 1e-10);

  {
    const AddressingParams params = AddressingParams::method2(units::mhz(4.0));
    const Sequence seq = method2_sequence(params);
    const EchoResult target = simulate_role(seq, AtomRole::target, 1.0, cfg);
    add("method2 target transfer error vs i|R>",
        std::abs(target.report.final_amplitude - Complex(0.0, 1.0)), 1e-8);
    const EchoResult nontarget = simulate_role(seq, AtomRole::nontarget_perp, 0.73, cfg);
    add("method2 echo restoration deficit (scale 0.73)", 1.0 - nontarget.report.restoration, 1e-10);
  }

  {
    const AddressingParams params = AddressingParams::method2(units::mhz(4.0));
    const MicrowaveEchoParams echo = microwave_echo_schedule(-0.936, params.delta);
    const EchoResult res = simulate_microwave_echo_method2(params, echo, AtomRole::nontarget_perp, 0.73, cfg);
    add("microwave echo restoration deficit (kappa -0.936)", 1.0 - res.report.restoration, 1e-6);
  }

  {
    const GateRunResult orir = step2_evolve(GateParams::orir(units::mhz(2.0), 12.0), GateInput::in01,
                                            PulseEdge::rectangular(), -1.0, {}, cfg);
    add("unblocked branch 2pi return error (orir)", std::abs(orir.retained - Complex(-1.0, 0.0)), 1e-9);
    const GateRunResult trad = step2_evolve(GateParams::traditional(units::mhz(2.0), 12.0), GateInput::in01,
                                            PulseEdge::rectangular(), -1.0, {}, cfg);
    add("unblocked branch 2pi return error (traditional)", std::abs(trad.retained - Complex(-1.0, 0.0)), 1e-9);
  }

  {
    // Sabotage detection: flipping the sign of one second-pulse coupling must
    // break the echo, or the restoration checks above prove nothing.
    const AddressingParams params = AddressingParams::method1(units::mhz(4.0));
    Sequence seq = method1_sequence(params);
    seq.stages.back().couplings.front().rabi *= -1.0;
    const EchoResult res = simulate_role(seq, AtomRole::nontarget_perp, 0.73, cfg);
    add("sabotaged echo restoration (must stay below bound)", res.report.restoration, 0.99);
  }

  {
    IntegratorConfig tight = cfg;
    tight.rtol = 1e-13;
    tight.atol = 1e-15;
    add("closed-form error at 10x tighter tolerances", oracle_max_error(tight), 1e-9);
    add("method1 echo deficit at 10x tighter tolerances", method1_echo_deficit(tight), 1e-10);
  }

  return rep;
}

}  // namespace rydsim
