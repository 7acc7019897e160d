#include "rydsim/pulse.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace rydsim {

EdgeShape edge_shape_from_string(const std::string& name) {
  if (name == "rectangular" || name == "rect") return EdgeShape::rectangular;
  if (name == "cosine_squared" || name == "cos2") return EdgeShape::cosine_squared;
  if (name == "linear") return EdgeShape::linear;
  throw ValidationError("unknown edge shape '" + name + "' (expected rectangular|cosine_squared|linear)");
}

std::string to_string(EdgeShape shape) {
  switch (shape) {
    case EdgeShape::rectangular: return "rectangular";
    case EdgeShape::cosine_squared: return "cosine_squared";
    case EdgeShape::linear: return "linear";
  }
  return "?";
}

double pulse_envelope(double t, double t_on, double t_off, const PulseEdge& edge) {
  if (t_off <= t_on) throw ValidationError("pulse_envelope: t_off must exceed t_on");
  if (t <= t_on || t >= t_off) return (t == t_on || t == t_off) && edge.shape == EdgeShape::rectangular ? 1.0 : 0.0;
  if (edge.shape == EdgeShape::rectangular) return 1.0;
  double rise_len = std::max(edge.rise, 0.0);
  double fall_len = std::max(edge.fall, 0.0);
  const double window = t_off - t_on;
  if (rise_len + fall_len > window) {  // clip proportionally for very short windows
    const double shrink = window / (rise_len + fall_len);
    rise_len *= shrink;
    fall_len *= shrink;
  }
  auto shape_value = [&](double u) {  // u in [0, 1], 0 -> off, 1 -> plateau
    switch (edge.shape) {
      case EdgeShape::linear: return u;
      case EdgeShape::cosine_squared: {
        const double s = std::sin(0.5 * units::pi * u);
        return s * s;
      }
      default: return 1.0;
    }
  };
  if (rise_len > 0.0 && t < t_on + rise_len) return shape_value((t - t_on) / rise_len);
  if (fall_len > 0.0 && t > t_off - fall_len) return shape_value((t_off - t) / fall_len);
  return 1.0;
}

std::vector<double> envelope_breakpoints(double t_on, double t_off, const PulseEdge& edge) {
  if (t_off <= t_on) throw ValidationError("envelope_breakpoints: t_off must exceed t_on");
  std::vector<double> pts{t_on, t_off};
  if (edge.shape != EdgeShape::rectangular) {
    double rise_len = std::max(edge.rise, 0.0);
    double fall_len = std::max(edge.fall, 0.0);
    const double window = t_off - t_on;
    if (rise_len + fall_len > window) {
      const double shrink = window / (rise_len + fall_len);
      rise_len *= shrink;
      fall_len *= shrink;
    }
    if (rise_len > 0.0) pts.push_back(t_on + rise_len);
    if (fall_len > 0.0) pts.push_back(t_off - fall_len);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](double a, double b) { return std::abs(a - b) < 1e-15 * std::max(1.0, std::abs(b)); }),
            pts.end());
  return pts;
}

double CouplingSelector::scale_for(DrivePath path) const {
  switch (path) {
    case DrivePath::lower_perp: return perp_scale;
    case DrivePath::lower_parallel: return parallel_scale;
    case DrivePath::microwave: return microwave_scale;
  }
  return 0.0;
}

bool CouplingSelector::included(DrivePath path) const {
  switch (path) {
    case DrivePath::lower_perp: return include_perp;
    case DrivePath::lower_parallel: return include_parallel;
    case DrivePath::microwave: return include_microwave;
  }
  return false;
}

void Sequence::validate() const {
  if (stages.empty()) throw ValidationError("Sequence: no stages");
  double t = stages.front().start;
  for (const auto& stage : stages) {
    if (stage.end < stage.start - 1e-15)
      throw ValidationError("Sequence: stage ends before it starts (" + stage.note + ")");
    if (std::abs(stage.start - t) > 1e-12)
      throw ValidationError("Sequence: stages are not contiguous near t = " + std::to_string(stage.start));
    t = stage.end;
    for (const auto& c : stage.couplings) {
      basis.index(c.upper);
      basis.index(c.lower);
      if (c.upper == c.lower) throw ValidationError("Sequence: coupling connects a level to itself");
    }
  }
  basis.index(intended_level);
  for (const auto& l : decay_levels) basis.index(l);
  if (tau < 0.0) throw ValidationError("Sequence: negative lifetime");
}

std::vector<HamiltonianTerm> stage_terms(const SequenceStage& stage, const LevelBasis& basis,
                                         const CouplingSelector& selector) {
  std::vector<HamiltonianTerm> terms;
  for (const auto& c : stage.couplings) {
    if (!selector.included(c.path)) continue;
    const Complex rabi = selector.scale_for(c.path) * c.rabi;
    if (std::abs(rabi) == 0.0) continue;
    terms.push_back(HamiltonianTerm::tone(basis.index(c.upper), basis.index(c.lower), rabi, c.detuning, c.phase));
  }
  return terms;
}

namespace {

// Exact rotation for a zero-duration microwave stage: the hard-pulse limit
// Omega -> inf at fixed pulse area pi.  With u = rabi/|rabi| the generator
// M = u|up><lo| + u*|lo><up| squares to the identity on the pair, so
// exp(-i*(pi/2)*M) = -i*M.  For rabi = i*Omega this maps |lo> -> |up> and
// |up> -> -|lo>, exactly the limit of integrating the finite-duration pulse.
void apply_instant_pi(const SequenceStage& stage, const LevelBasis& basis, const CouplingSelector& selector,
                      Eigen::VectorXcd& psi) {
  for (const auto& c : stage.couplings) {
    if (!selector.included(c.path)) continue;
    if (std::abs(c.rabi) == 0.0) continue;
    const int iu = basis.index(c.upper);
    const int il = basis.index(c.lower);
    const Complex u = c.rabi / std::abs(c.rabi);
    const Complex minus_i(0.0, -1.0);
    const Complex pl = psi(il), pu = psi(iu);
    // exp(-i*(pi/2)*(u|u><l| + u*|l><u|)) = -i*(u|u><l| + u*|l><u|) on the pair
    psi(iu) = minus_i * u * pl;
    psi(il) = minus_i * std::conj(u) * pu;
  }
}

}  // namespace

Trajectory simulate_sequence(const Sequence& seq, const StateVector& initial, const CouplingSelector& selector,
                             const IntegratorConfig& cfg) {
  seq.validate();
  if (initial.basis != seq.basis) throw ValidationError("simulate_sequence: initial state basis mismatch");
  cfg.validate();

  Trajectory traj;
  traj.basis = seq.basis;
  traj.times.push_back(seq.stages.front().start);
  traj.states.push_back(initial.amplitudes);

  Eigen::VectorXcd x = initial.amplitudes;
  const double norm0 = x.norm();
  double worst_drift = 0.0;
  auto record = [&](double t, const Eigen::VectorXcd& y) {
    if (!traj.times.empty() && traj.times.back() == t) {
      traj.states.back() = y;  // instantaneous rotation: keep times strictly increasing
    } else {
      traj.times.push_back(t);
      traj.states.push_back(y);
    }
    worst_drift = std::max(worst_drift, std::abs(y.norm() - norm0));
  };
  for (const auto& stage : seq.stages) {
    const bool has_microwave = std::any_of(stage.couplings.begin(), stage.couplings.end(), [](const StageCoupling& c) {
      return c.path == DrivePath::microwave;
    });
    if (stage.duration() <= 1e-15) {
      if (has_microwave) {
        apply_instant_pi(stage, seq.basis, selector, x);
        record(stage.end, x);
      }
      continue;
    }
    const auto terms = stage_terms(stage, seq.basis, selector);
    TermRhs rhs(terms, seq.basis.dim());
    integrate_adaptive(rhs, x, stage.start, stage.end, cfg, record);
    if (traj.times.back() != stage.end) record(stage.end, x);
  }

  if (worst_drift > cfg.norm_tolerance * std::max(1.0, norm0))
    throw NumericalError("simulate_sequence: norm drift " + std::to_string(worst_drift) + " exceeds tolerance");
  return traj;
}

}  // namespace rydsim
