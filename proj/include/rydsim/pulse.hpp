#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "rydsim/basis.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/hamiltonian.hpp"
#include "rydsim/integrator.hpp"
#include "rydsim/state.hpp"
#include "rydsim/units.hpp"

namespace rydsim {

// Switching profile of a pulse edge.
enum class EdgeShape { rectangular, cosine_squared, linear };

EdgeShape edge_shape_from_string(const std::string& name);
std::string to_string(EdgeShape shape);

struct PulseEdge {
  EdgeShape shape = EdgeShape::rectangular;
  double rise = 0.0;  // us (ignored for rectangular)
  double fall = 0.0;  // us

  static PulseEdge rectangular() { return {EdgeShape::rectangular, 0.0, 0.0}; }
  static PulseEdge symmetric(EdgeShape shape, double ramp) { return {shape, ramp, ramp}; }
};

// Dimensionless envelope of a pulse switched on at t_on and off at t_off.
// The envelope rises over [t_on, t_on+rise] and falls over [t_off-fall,
// t_off], clipped if the window is shorter than rise+fall.  Outside
// [t_on, t_off] the envelope is exactly zero; on the plateau it is 1.
double pulse_envelope(double t, double t_on, double t_off, const PulseEdge& edge);

// Sorted times in [t_on, t_off] where the envelope's slope is discontinuous
// (window ends and ramp corners, after the same clipping as pulse_envelope).
// Integrating between consecutive breakpoints keeps adaptive steppers off
// the corners.
std::vector<double> envelope_breakpoints(double t_on, double t_off, const PulseEdge& edge);

// Which physical drive a coupling belongs to; lets a simulation include or
// rescale individual beams (e.g. an atom sitting off-focus of one beam).
enum class DrivePath { lower_perp, lower_parallel, microwave };

// One rotating drive tone connecting two levels during a stage:
//   <upper| H(t) |lower> = (rabi/2) * exp(i*(detuning*t + phase)),
// with t the absolute time since the start of the sequence.  `rabi` may be
// complex to encode fixed drive phases.
struct StageCoupling {
  std::string upper;
  std::string lower;
  Complex rabi = 0.0;      // rad/us
  double detuning = 0.0;   // rad/us
  double phase = 0.0;      // rad, constant offset
  DrivePath path = DrivePath::lower_perp;
};

// Contiguous time slice of a sequence.  A stage with no couplings is a free
// wait.  A zero-duration stage containing microwave couplings is applied as
// an instantaneous rotation (the limit of a hard pi pulse).
struct SequenceStage {
  double start = 0.0;  // us, absolute
  double end = 0.0;    // us, absolute
  std::vector<StageCoupling> couplings;
  std::string note;

  double duration() const { return end - start; }
};

// Full pulse program acting on one atom.
struct Sequence {
  LevelBasis basis;
  std::vector<SequenceStage> stages;
  std::string intended_level = "1";          // level the protocol is designed to leave the target in
  std::vector<std::string> decay_levels;     // short-lived levels whose dwell time is tracked
  double tau = 0.0;                          // us; lifetime of the decay levels, 0 = not tracked

  double total_duration() const { return stages.empty() ? 0.0 : stages.back().end; }
  void validate() const;
};

// Per-path inclusion and amplitude scaling applied when lowering a sequence
// to Hamiltonian terms.  An atom outside one beam's focus sees that beam
// scaled (or absent); scales multiply the coupling `rabi`.
struct CouplingSelector {
  double perp_scale = 1.0;
  double parallel_scale = 1.0;
  double microwave_scale = 1.0;
  bool include_perp = true;
  bool include_parallel = true;
  bool include_microwave = true;

  double scale_for(DrivePath path) const;
  bool included(DrivePath path) const;
};

// Hamiltonian terms for one stage under a selector (absolute-time phases).
std::vector<HamiltonianTerm> stage_terms(const SequenceStage& stage, const LevelBasis& basis,
                                         const CouplingSelector& selector);

// Integrate a sequence stage by stage.  Sampling is uniform within each
// stage; every stage boundary is always a sample point.  Zero-duration
// microwave stages are applied as exact rotations.
Trajectory simulate_sequence(const Sequence& seq, const StateVector& initial,
                             const CouplingSelector& selector = {}, const IntegratorConfig& cfg = {});

}  // namespace rydsim
