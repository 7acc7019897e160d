#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "rydsim/pulse.hpp"
#include "rydsim/state.hpp"
#include "rydsim/units.hpp"

namespace rydsim {

// Parameters of the single-site addressing protocols.  Two beams cross at
// the target site; "perp" and "parallel" label the two propagation paths.
// Both protocols use two optical pulses of duration t0 = pi/delta separated
// by a wait t_mu:
//
//   Method 1 drives |1> <-> |r> with both beams; their interference gives
//   the target an effective coupling i*Omega*sin(delta*t), which excites at
//   t0 and, with the sign-reversed second pulse, de-excites back to |1>.
//   Full transfer needs omega = pi*delta/4.
//
//   Method 2 drives the ladder |1> -> |r> -> |R> two-photon-resonantly with
//   |r> detuned by delta; omega = sqrt(3/2)*delta (= 1.2247*delta) closes
//   the bright-state phases so one pulse pair leaves the target exactly in
//   i|R>.  Weaker couplings omega = delta/sqrt(N) excite over N pulse-pair
//   cycles instead.
//
// Either way, a nontarget atom sees only one beam (at reduced strength), and
// the second pulse exactly reverses its first-pulse evolution regardless of
// that strength: an optical spin echo.
struct AddressingParams {
  double delta = units::mhz(4.0);  // rad/us
  double omega = 0.0;              // rad/us; coupling of each beam at the target
  double t_mu = 0.0;               // us; wait between the two optical pulses
  double tau = 320.0;              // us; lifetime of the short-lived Rydberg level(s)

  double t0() const { return units::pi / delta; }

  static AddressingParams method1(double delta, double t_mu);  // omega = pi*delta/4
  static AddressingParams method1(double delta);               // default wait 2*pi/delta
  static AddressingParams method2(double delta, double t_mu = 0.0);  // omega = sqrt(3/2)*delta

  void validate() const;
};

enum class AtomRole { target, nontarget_perp, nontarget_parallel };

AtomRole atom_role_from_string(const std::string& name);
std::string to_string(AtomRole role);

// Beam visibility for a role: the target sits at both foci; a nontarget on
// one beam's axis sees only that beam, scaled by `rabi_scale`.
CouplingSelector selector_for(AtomRole role, double rabi_scale = 1.0);

struct EchoReport {
  double restoration = 0.0;                     // |<psi(0)|psi(end)>|^2
  Complex final_amplitude;                      // on the sequence's intended level
  std::map<std::string, Complex> final_amplitudes;  // every level
  double t_de = 0.0;                            // us; integrated short-lived population
  double decay_error = 0.0;                     // t_de / tau
  double peak_rydberg = 0.0;                    // max over time of the short-lived population
};

struct EchoResult {
  Trajectory trajectory;
  EchoReport report;
};

// Three-stage Method 1 program on basis {"1","r"}: pulse (Omega e^{i delta t},
// -Omega e^{-i delta t}), wait t_mu, pulse (-Omega e^{-i delta t} e^{+i chi},
// +Omega e^{+i delta t} e^{-i chi}) with chi = delta*t_mu compensating the
// phase wound up during the wait.
Sequence method1_sequence(const AddressingParams& params);

// Two-pulse Method 2 program on basis {"1","r","R"}: pulse 1 couples
// (Omega e^{i delta t} on |r><1|, Omega e^{-i delta t} on |R><r|); pulse 2
// reverses to (-Omega e^{-i delta t}, +Omega e^{i delta t}), with the same
// chi = delta*t_mu wait compensation.
Sequence method2_sequence(const AddressingParams& params);

// Simulate one atom's view of a sequence and summarize it.
EchoResult simulate_role(const Sequence& seq, AtomRole role, double rabi_scale,
                         const IntegratorConfig& cfg = {});

// Integrated population of the given levels over the trajectory (us).
double compute_T_de(const Trajectory& traj, const std::vector<std::string>& rydberg_levels);

// Schedule of the microwave-echo variant of Method 2.  The first optical
// pulse excites via |r>; a microwave pi pulse moves |r> -> |r'>; the second
// optical pulse, scaled to (|kappa| Omega, |kappa| Delta) and lasting
// t1 = t0/|kappa|, completes the transfer through |r'>.  kappa is the signed
// ratio of the pair-interaction coefficients of |r'> and |r> and must be
// negative for the interaction-phase echo.  The rotating phases of the two
// optical pulses realign only when
//
//   |kappa|*delta*(t_w + t_mu + t0) + t0*delta = 2*pi*n,
//
// which fixes the total wait budget t_w + t_mu for the minimal feasible
// positive integer n.
struct MicrowaveEchoParams {
  double kappa = -1.0;
  double omega_mu = 0.0;  // rad/us; 0 together with t_mu = 0 means an ideal instantaneous pulse
  double t_mu = 0.0;      // us; microwave pi-pulse duration
  double t_wait = 0.0;    // us; free wait, split symmetrically around the pi pulse
  int winding = 1;        // n in the phase-matching condition
  double t1 = 0.0;        // us; second optical pulse duration t0/|kappa|
  double cross_scale = 0.0;       // |r r'> pair interaction relative to V (many-body)
  double phase_error_perp = 0.0;  // rad; static compensation error on the second-pulse lower leg
  double phase_error_par = 0.0;   // rad; ... and on the upper leg

  void validate(double delta) const;
};

// Compute the schedule for a given kappa < 0.  With omega_mu = 0 the whole
// wait budget becomes the pi pulse (t_w = 0, omega_mu = pi/t_mu); a budget of
// zero (kappa = -1) yields an ideal instantaneous pulse.  With omega_mu > 0
// the pulse lasts pi/omega_mu and n grows until the remaining wait is >= 0.
MicrowaveEchoParams microwave_echo_schedule(double kappa, double delta, double omega_mu = 0.0);

// Full microwave-echo program on basis {"1","r","rp","R"}.
Sequence method2_microwave_sequence(const AddressingParams& params, const MicrowaveEchoParams& echo);

EchoResult simulate_microwave_echo_method2(const AddressingParams& params, const MicrowaveEchoParams& echo,
                                           AtomRole role, double rabi_scale,
                                           const IntegratorConfig& cfg = {});

// Joint evolution of n interacting nontarget atoms (levels {1, r, r'} each,
// dimension 3^n) through the microwave-echo program.  v(i,j) is the pair
// interaction when atoms i and j are both in |r>; pairs in |r'r'> interact
// with kappa*v(i,j) and mixed |r r'> pairs with cross_scale*v(i,j).  Each
// atom sees the lower-leg beam at its own rabi scale.  Returns the fidelity
// of the final joint state against the initial all-|1> product state.
struct ManyBodyEchoResult {
  double fidelity = 0.0;
  StateVector initial;
  StateVector final_state;
};

ManyBodyEchoResult simulate_many_body_echo(int n_atoms, const Eigen::MatrixXd& v, double kappa,
                                           const std::vector<double>& omega_scales,
                                           const AddressingParams& params, const MicrowaveEchoParams& echo,
                                           const IntegratorConfig& cfg = {});

// Report helpers shared by the protocols above.
EchoReport make_echo_report(const Sequence& seq, const Trajectory& traj);

}  // namespace rydsim
