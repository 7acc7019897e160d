#pragma once

#include <string>
#include <vector>

#include "rydsim/integrator.hpp"
#include "rydsim/pulse.hpp"
#include "rydsim/state.hpp"

namespace rydsim {

// Which drive is applied during the Rydberg-Rydberg interaction step of the
// controlled-Z gate (the step where the target atom is driven while the
// control atom may already occupy |r>).
enum class GateScheme {
  orir,        // two-tone drive +/-(omega/4) e^{+/- i delta t}; duration pi/delta
  traditional  // single resonant tone omega/2; duration 2*pi/omega
};

GateScheme gate_scheme_from_string(const std::string& name);
std::string to_string(GateScheme scheme);

// Input branch of the interaction step, reduced to the two levels that the
// drive couples.  For |01> the control stays in |0> so the target sees no
// blockade; for |11> the control sits in |r> and |rr> carries the
// interaction shift v.
enum class GateInput {
  in01,  // basis {|1>, |r>}, no interaction
  in11   // basis {|r1>, |rr>}, diagonal v on |rr>
};

struct GateParams {
  GateScheme scheme = GateScheme::orir;
  double omega = 0.0;  // drive strength (rad/us)
  double delta = 0.0;  // tone offset (rad/us); unused by the traditional scheme
  double v0 = 0.0;     // design interaction strength (rad/us)
  double v = 0.0;      // actual interaction strength (rad/us)

  // Deviation-free gate-step duration: pi/delta (orir), 2*pi/omega (traditional).
  double nominal_duration() const;

  // orir scheme locked to omega/delta = pi so the two-tone pulse area closes.
  static GateParams orir(double omega, double v0_over_omega, double v_rel = 0.0);
  static GateParams traditional(double omega, double v0_over_omega, double v_rel = 0.0);

  void validate() const;
};

// Start/end timing offsets (us) applied independently to the two orir tones.
// A tone's field is on over [start, duration + end] of its window.  For the
// traditional scheme only the *_plus pair is used.
struct TimingOffsets {
  double start_plus = 0.0;
  double start_minus = 0.0;
  double end_plus = 0.0;
  double end_minus = 0.0;
};

struct GateRunResult {
  Complex retained;    // amplitude on the level that should survive (|1> or |r1>)
  Complex excited;     // amplitude on the driven upper level (|r> or |rr>)
  double leakage = 0;  // 1 - |retained|^2
  double end_time = 0; // time at which amplitudes were read out (us)
};

// Integrate the interaction step for one input branch.  duration <= 0 selects
// the nominal duration.  Envelope edges and per-tone timing offsets extend or
// shrink each tone's window; integration covers the union of all windows and
// is split at envelope breakpoints so the controlled stepper never straddles
// a slope discontinuity.
GateRunResult step2_evolve(const GateParams& params, GateInput input,
                           const PulseEdge& edge = PulseEdge::rectangular(),
                           double duration = -1.0,
                           const TimingOffsets& offsets = {},
                           const IntegratorConfig& cfg = {});

// Population record of the |11> branch over the gate step.
struct LeakageTrajectory {
  std::vector<double> times;
  std::vector<double> leakage;  // 1 - |c_r1|^2 at each time
};

LeakageTrajectory leakage_trajectory(const GateParams& params,
                                     const PulseEdge& edge = PulseEdge::rectangular(),
                                     std::size_t samples = 400,
                                     const IntegratorConfig& cfg = {});

// Sweep the relative interaction deviation v_rel = v/v0 - 1 over a uniform
// grid and record the |11>-branch leakage at the end of the step.
struct SweepResult {
  std::vector<double> v_rel;
  std::vector<double> leakage;
  double average = 0.0;
};

SweepResult blockade_sweep(const GateParams& params, double v_rel_min,
                           double v_rel_max, std::size_t points,
                           const PulseEdge& edge = PulseEdge::rectangular(),
                           int threads = 1, const IntegratorConfig& cfg = {});

// Result of tuning the step duration for a ramped (non-rectangular) envelope.
struct DurationOptimum {
  double t_star = 0.0;        // tuned duration (us)
  double leakage_01 = 0.0;    // |01> branch leakage at t_star (full integration)
  double leakage_11 = 0.0;    // |11> branch leakage at t_star (full integration)
  double surrogate_leak = 0.0;  // closed-form |01> leakage at t_star
  double surrogate_gap = 0.0;   // |leakage_01 - surrogate_leak|
  std::size_t evaluations = 0;  // surrogate evaluations spent in the search
};

// Pulse-area surrogate for the |01> branch of the orir scheme: with both
// tones sharing one envelope the Hamiltonian commutes with itself at all
// times, so the retained amplitude is exactly cos(theta(T)) with
// theta(T) = (omega/2) * integral env(t; 0, T) sin(delta t) dt.
double orir_pulse_area(const GateParams& params, const PulseEdge& edge, double duration);

// Minimize the |01>-branch leakage over the duration via the pulse-area
// surrogate (golden-section search), then verify with full integrations of
// both branches.  Throws NumericalError when the minimum pins to a bracket
// edge or the surrogate disagrees with the integrated leakage.
DurationOptimum optimize_duration(const GateParams& params, const PulseEdge& edge,
                                  double bracket_low = -1.0, double bracket_high = -1.0,
                                  const IntegratorConfig& cfg = {});

// How a jittered tone window relates to the nominal gate slot [0, T].
//   extended: each tone is on over its own shifted window [t_s, T + t_e];
//             the state is read out after the last field switches off.
//   truncate_to_slot: jitter can only shorten a tone from either end
//             (window [max(0, t_s), T + min(0, t_e)]), e.g. a master gate
//             transmits light only inside the slot.
enum class TimingWindowMode { extended, truncate_to_slot };

// Weighted average of end-of-step leakage over independent Gaussian timing
// offsets on the four tone edges.  Each offset is discretized on the
// 11-point grid {0, +/-sigma, ..., +/-5 sigma} with renormalized Gaussian
// weights; the 11^4 grid is evaluated in parallel and reduced in a fixed
// canonical order so the result is independent of the thread count.
struct TimingErrorResult {
  double sigma_t = 0.0;      // offset standard deviation (us)
  double avg_leakage_01 = 0.0;
  double avg_leakage_11 = 0.0;
  std::size_t evaluations = 0;  // integrations performed (both branches)
};

TimingErrorResult timing_error_average(const GateParams& params, const PulseEdge& edge,
                                       double duration, double sigma_t,
                                       int threads = 1, const IntegratorConfig& cfg = {},
                                       TimingWindowMode mode = TimingWindowMode::extended);

}  // namespace rydsim
