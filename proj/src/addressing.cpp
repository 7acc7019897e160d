#include "rydsim/addressing.hpp"

#include <algorithm>
#include <cmath>

namespace rydsim {

AddressingParams AddressingParams::method1(double delta, double t_mu) {
  AddressingParams p;
  p.delta = delta;
  p.omega = 0.25 * units::pi * delta;
  p.t_mu = t_mu;
  return p;
}

AddressingParams AddressingParams::method1(double delta) {
  return method1(delta, 2.0 * units::pi / delta);
}

AddressingParams AddressingParams::method2(double delta, double t_mu) {
  AddressingParams p;
  p.delta = delta;
  p.omega = std::sqrt(1.5) * delta;
  p.t_mu = t_mu;
  return p;
}

void AddressingParams::validate() const {
  if (!(delta > 0.0)) throw ValidationError("AddressingParams: delta must be positive");
  if (!(omega > 0.0)) throw ValidationError("AddressingParams: omega must be positive");
  if (t_mu < 0.0) throw ValidationError("AddressingParams: negative wait");
  if (tau < 0.0) throw ValidationError("AddressingParams: negative lifetime");
}

AtomRole atom_role_from_string(const std::string& name) {
  if (name == "target") return AtomRole::target;
  if (name == "nontarget-perp" || name == "nontarget_perp") return AtomRole::nontarget_perp;
  if (name == "nontarget-parallel" || name == "nontarget_parallel") return AtomRole::nontarget_parallel;
  throw ValidationError("unknown atom role '" + name + "' (expected target|nontarget-perp|nontarget-parallel)");
}

std::string to_string(AtomRole role) {
  switch (role) {
    case AtomRole::target: return "target";
    case AtomRole::nontarget_perp: return "nontarget-perp";
    case AtomRole::nontarget_parallel: return "nontarget-parallel";
  }
  return "?";
}

CouplingSelector selector_for(AtomRole role, double rabi_scale) {
  if (rabi_scale < 0.0 || rabi_scale > 1.0)
    throw ValidationError("selector_for: rabi scale must lie in [0, 1]");
  CouplingSelector sel;
  switch (role) {
    case AtomRole::target:
      break;  // both beams at full strength
    case AtomRole::nontarget_perp:
      sel.include_parallel = false;
      sel.perp_scale = rabi_scale;
      break;
    case AtomRole::nontarget_parallel:
      sel.include_perp = false;
      sel.parallel_scale = rabi_scale;
      break;
  }
  return sel;
}

Sequence method1_sequence(const AddressingParams& p) {
  p.validate();
  if (std::abs(p.omega - 0.25 * units::pi * p.delta) > 1e-9 * p.delta)
    throw ValidationError("method1_sequence: full transfer requires omega = pi*delta/4");
  const double t0 = p.t0();
  const double chi = p.delta * p.t_mu;

  Sequence seq;
  seq.basis = LevelBasis({"1", "r"});
  seq.intended_level = "1";
  seq.decay_levels = {"r"};
  seq.tau = p.tau;

  SequenceStage s1{0.0, t0, {}, "pulse 1"};
  s1.couplings.push_back({"r", "1", p.omega, p.delta, 0.0, DrivePath::lower_perp});
  s1.couplings.push_back({"r", "1", -p.omega, -p.delta, 0.0, DrivePath::lower_parallel});

  SequenceStage wait{t0, t0 + p.t_mu, {}, "wait"};

  SequenceStage s3{t0 + p.t_mu, 2.0 * t0 + p.t_mu, {}, "pulse 2"};
  s3.couplings.push_back({"r", "1", -p.omega, -p.delta, chi, DrivePath::lower_perp});
  s3.couplings.push_back({"r", "1", p.omega, p.delta, -chi, DrivePath::lower_parallel});

  seq.stages = {s1, wait, s3};
  return seq;
}

Sequence method2_sequence(const AddressingParams& p) {
  p.validate();
  const double t0 = p.t0();
  const double chi = p.delta * p.t_mu;

  Sequence seq;
  seq.basis = LevelBasis({"1", "r", "R"});
  seq.intended_level = "R";
  seq.decay_levels = {"r"};
  seq.tau = p.tau;

  SequenceStage s1{0.0, t0, {}, "pulse 1"};
  s1.couplings.push_back({"r", "1", p.omega, p.delta, 0.0, DrivePath::lower_perp});
  s1.couplings.push_back({"R", "r", p.omega, -p.delta, 0.0, DrivePath::lower_parallel});

  SequenceStage wait{t0, t0 + p.t_mu, {}, "wait"};

  SequenceStage s3{t0 + p.t_mu, 2.0 * t0 + p.t_mu, {}, "pulse 2"};
  s3.couplings.push_back({"r", "1", -p.omega, -p.delta, chi, DrivePath::lower_perp});
  s3.couplings.push_back({"R", "r", p.omega, p.delta, -chi, DrivePath::lower_parallel});

  seq.stages = {s1, wait, s3};
  return seq;
}

EchoReport make_echo_report(const Sequence& seq, const Trajectory& traj) {
  EchoReport rep;
  rep.restoration = fidelity(traj.at(0), traj.final_state());
  const auto last = traj.final_state();
  rep.final_amplitude = last.amplitude(seq.intended_level);
  for (const auto& label : seq.basis.labels()) rep.final_amplitudes[label] = last.amplitude(label);
  if (!seq.decay_levels.empty()) {
    rep.t_de = compute_T_de(traj, seq.decay_levels);
    rep.decay_error = seq.tau > 0.0 ? rep.t_de / seq.tau : 0.0;
    const auto pop = traj.population_series(seq.decay_levels);
    rep.peak_rydberg = *std::max_element(pop.begin(), pop.end());
  }
  return rep;
}

EchoResult simulate_role(const Sequence& seq, AtomRole role, double rabi_scale, const IntegratorConfig& cfg) {
  EchoResult result;
  const auto init = StateVector::ket(seq.basis, "1");
  IntegratorConfig local = cfg;
  if (local.sample_interval <= 0.0) {
    // Dwell-time integrals are trapezoids over the sampled trajectory; stage
    // endpoints alone are far too coarse, so default to a dense grid.
    local.sample_interval = seq.total_duration() / 4000.0;
  }
  result.trajectory = simulate_sequence(seq, init, selector_for(role, rabi_scale), local);
  result.report = make_echo_report(seq, result.trajectory);
  return result;
}

double compute_T_de(const Trajectory& traj, const std::vector<std::string>& rydberg_levels) {
  return integrated_population(traj, rydberg_levels);
}

void MicrowaveEchoParams::validate(double delta) const {
  if (kappa == 0.0) throw ValidationError("MicrowaveEchoParams: kappa cannot be zero");
  if (!(delta > 0.0)) throw ValidationError("MicrowaveEchoParams: delta must be positive");
  if (t_mu < 0.0 || t_wait < 0.0) throw ValidationError("MicrowaveEchoParams: negative durations");
  if (winding < 1) throw ValidationError("MicrowaveEchoParams: winding index must be positive");
  const double t0 = units::pi / delta;
  const double a = std::abs(kappa);
  if (std::abs(t1 - t0 / a) > 1e-9 * t0)
    throw ValidationError("MicrowaveEchoParams: second-pulse duration must be t0/|kappa|");
  if (t_mu > 0.0 && std::abs(omega_mu * t_mu - units::pi) > 1e-9)
    throw ValidationError("MicrowaveEchoParams: microwave pulse area must be pi");
  const double mismatch = a * delta * (t_wait + t_mu + t0) + t0 * delta - 2.0 * units::pi * winding;
  if (std::abs(mismatch) > 1e-9)
    throw ValidationError("MicrowaveEchoParams: wait does not satisfy the phase-matching condition (residual " +
                          std::to_string(mismatch) + " rad)");
}

MicrowaveEchoParams microwave_echo_schedule(double kappa, double delta, double omega_mu) {
  if (!(kappa < 0.0))
    throw ValidationError("microwave_echo_schedule: kappa must be negative (opposite-sign pair interactions)");
  if (!(delta > 0.0)) throw ValidationError("microwave_echo_schedule: delta must be positive");
  const double t0 = units::pi / delta;
  const double a = std::abs(kappa);

  MicrowaveEchoParams p;
  p.kappa = kappa;
  p.t1 = t0 / a;

  auto budget = [&](int n) { return 2.0 * n * units::pi / (a * delta) - t0 * (1.0 + 1.0 / a); };
  if (omega_mu <= 0.0) {
    // The whole wait budget becomes the pi pulse.
    int n = 1;
    while (budget(n) < -1e-12) ++n;
    p.winding = n;
    p.t_mu = std::max(budget(n), 0.0);
    p.t_wait = 0.0;
    p.omega_mu = p.t_mu > 0.0 ? units::pi / p.t_mu : 0.0;
  } else {
    p.omega_mu = omega_mu;
    p.t_mu = units::pi / omega_mu;
    int n = 1;
    while (budget(n) < p.t_mu - 1e-12) ++n;
    p.winding = n;
    p.t_wait = std::max(budget(n) - p.t_mu, 0.0);
  }
  p.validate(delta);
  return p;
}

Sequence method2_microwave_sequence(const AddressingParams& params, const MicrowaveEchoParams& echo) {
  params.validate();
  echo.validate(params.delta);
  const double t0 = params.t0();
  const double w1 = 0.5 * echo.t_wait;
  const double w2 = echo.t_wait - w1;

  Sequence seq;
  seq.basis = LevelBasis({"1", "r", "rp", "R"});
  seq.intended_level = "R";
  seq.decay_levels = {"r", "rp"};
  seq.tau = params.tau;

  SequenceStage s1{0.0, t0, {}, "pulse 1"};
  s1.couplings.push_back({"r", "1", params.omega, params.delta, 0.0, DrivePath::lower_perp});
  s1.couplings.push_back({"R", "r", params.omega, -params.delta, 0.0, DrivePath::lower_parallel});

  SequenceStage wait_a{t0, t0 + w1, {}, "wait"};

  SequenceStage mw{t0 + w1, t0 + w1 + echo.t_mu, {}, "microwave pi"};
  const double mu_rabi = echo.t_mu > 0.0 ? echo.omega_mu : 1.0;  // instantaneous pulses only use the sign
  mw.couplings.push_back({"rp", "r", Complex(0.0, mu_rabi), 0.0, 0.0, DrivePath::microwave});

  SequenceStage wait_b{mw.end, mw.end + w2, {}, "wait"};

  // Second optical pulse through |r'>, scaled by kappa.  For kappa < 0 the
  // couplings are (-|k|Omega, -|k|Delta) and (+|k|Omega, +|k|Delta): the
  // sign flip reverses the first pulse's rotation.  Writing them as
  // (kappa*Omega, kappa*Delta) keeps the (unphysical) kappa > 0 case
  // expressible for sanity anti-tests.
  const double t_s = wait_b.end;
  SequenceStage s5{t_s, t_s + echo.t1, {}, "pulse 2"};
  s5.couplings.push_back(
      {"rp", "1", echo.kappa * params.omega, echo.kappa * params.delta, echo.phase_error_perp, DrivePath::lower_perp});
  s5.couplings.push_back({"R", "rp", -echo.kappa * params.omega, -echo.kappa * params.delta, echo.phase_error_par,
                          DrivePath::lower_parallel});

  seq.stages = {s1, wait_a, mw, wait_b, s5};
  return seq;
}

EchoResult simulate_microwave_echo_method2(const AddressingParams& params, const MicrowaveEchoParams& echo,
                                           AtomRole role, double rabi_scale, const IntegratorConfig& cfg) {
  const auto seq = method2_microwave_sequence(params, echo);
  return simulate_role(seq, role, rabi_scale, cfg);
}

namespace {

// Hamiltonian terms of one single-atom coupling embedded into the n-atom
// product space: one term per spectator configuration.
void embed_coupling(const ProductBasis& prod, int atom, const StageCoupling& c, double scale,
                    std::vector<HamiltonianTerm>& out) {
  const int up = prod.single().index(c.upper);
  const int lo = prod.single().index(c.lower);
  const Complex rabi = scale * c.rabi;
  if (std::abs(rabi) == 0.0) return;
  for (int s = 0; s < prod.dim(); ++s) {
    if (prod.level_of(s, atom) != lo) continue;
    int stride = 1;
    for (int k = atom + 1; k < prod.n_atoms(); ++k) stride *= prod.single().dim();
    const int s_up = s + (up - lo) * stride;
    out.push_back(HamiltonianTerm::tone(s_up, s, rabi, c.detuning, c.phase));
  }
}

}  // namespace

ManyBodyEchoResult simulate_many_body_echo(int n_atoms, const Eigen::MatrixXd& v, double kappa,
                                           const std::vector<double>& omega_scales,
                                           const AddressingParams& params, const MicrowaveEchoParams& echo,
                                           const IntegratorConfig& cfg) {
  if (n_atoms < 1 || n_atoms > 4)
    throw ValidationError("simulate_many_body_echo: n_atoms must lie in [1, 4] (3^n state cap)");
  if (v.rows() < n_atoms || v.cols() < n_atoms)
    throw ValidationError("simulate_many_body_echo: interaction matrix too small");
  if (static_cast<int>(omega_scales.size()) != n_atoms)
    throw ValidationError("simulate_many_body_echo: need one rabi scale per atom");
  cfg.validate();

  // The atoms are nontargets on the lower-leg beam: reuse the single-atom
  // program but keep only its lower-leg and microwave couplings, so each
  // atom evolves in {1, r, r'} and |R> never enters.
  MicrowaveEchoParams echo_signed = echo;
  echo_signed.kappa = kappa;
  const auto single_seq = method2_microwave_sequence(params, echo_signed);
  const LevelBasis single({"1", "r", "rp"});
  const ProductBasis prod(single, n_atoms);

  // Interaction diagonal, present during every stage.
  std::vector<HamiltonianTerm> interaction_terms;
  const int idx_r = single.index("r");
  const int idx_rp = single.index("rp");
  for (int s = 0; s < prod.dim(); ++s) {
    double val = 0.0;
    for (int i = 0; i < n_atoms; ++i) {
      const int li = prod.level_of(s, i);
      if (li != idx_r && li != idx_rp) continue;
      for (int j = i + 1; j < n_atoms; ++j) {
        const int lj = prod.level_of(s, j);
        if (lj != idx_r && lj != idx_rp) continue;
        const double vij = v(i, j) != 0.0 ? v(i, j) : v(j, i);
        if (li == idx_r && lj == idx_r) val += vij;
        else if (li == idx_rp && lj == idx_rp) val += kappa * vij;
        else val += echo_signed.cross_scale * vij;
      }
    }
    if (val != 0.0) interaction_terms.push_back(HamiltonianTerm::constant(s, s, val));
  }

  std::vector<int> all_ones(static_cast<std::size_t>(n_atoms), single.index("1"));
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(prod.dim());
  x(prod.index(all_ones)) = 1.0;
  ManyBodyEchoResult result;
  LevelBasis flat_basis = [&] {  // product labels "11", "1r", ... for reporting
    std::vector<std::string> labels;
    for (int s = 0; s < prod.dim(); ++s) {
      std::string l;
      for (int atomi = 0; atomi < n_atoms; ++atomi) l += single.label(prod.level_of(s, atomi));
      labels.push_back(l);
    }
    return LevelBasis(labels);
  }();
  result.initial = StateVector{flat_basis, x};

  const double norm0 = x.norm();
  for (const auto& stage : single_seq.stages) {
    std::vector<HamiltonianTerm> terms = interaction_terms;
    std::vector<StageCoupling> included;
    for (const auto& c : stage.couplings) {
      if (c.path == DrivePath::lower_parallel) continue;
      included.push_back(c);
      for (int atomi = 0; atomi < n_atoms; ++atomi)
        embed_coupling(prod, atomi, c, c.path == DrivePath::microwave ? 1.0 : omega_scales[static_cast<std::size_t>(atomi)],
                       terms);
    }
    if (stage.duration() <= 1e-15) {
      // Instantaneous global microwave pi pulse: rotate each atom's (r, r')
      // pair; the per-atom rotations act on disjoint coordinates and commute.
      for (const auto& c : included) {
        if (c.path != DrivePath::microwave) continue;
        const Complex u = c.rabi / std::abs(c.rabi);
        const Complex minus_i(0.0, -1.0);
        for (int atomi = 0; atomi < n_atoms; ++atomi) {
          int stride = 1;
          for (int k = atomi + 1; k < n_atoms; ++k) stride *= single.dim();
          const int up = single.index(c.upper), lo = single.index(c.lower);
          for (int s = 0; s < prod.dim(); ++s) {
            if (prod.level_of(s, atomi) != lo) continue;
            const int s_up = s + (up - lo) * stride;
            const Complex pl = x(s), pu = x(s_up);
            x(s_up) = minus_i * u * pl;
            x(s) = minus_i * std::conj(u) * pu;
          }
        }
      }
      continue;
    }
    TermRhs rhs(terms, prod.dim());
    integrate_adaptive(rhs, x, stage.start, stage.end, cfg);
  }
  if (std::abs(x.norm() - norm0) > cfg.norm_tolerance)
    throw NumericalError("simulate_many_body_echo: norm drift exceeds tolerance");

  result.final_state = StateVector{flat_basis, x};
  result.fidelity = fidelity(result.initial, result.final_state);
  return result;
}

}  // namespace rydsim
