#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydsim/hamiltonian.hpp"
#include "rydsim/integrator.hpp"
#include "rydsim/state.hpp"

namespace rydsim {

// Two-level drive configurations on |g> <-> |e>:
//
//   single_detuned_plus   one tone detuned by +Delta; element (Omega/2)e^{+i Delta t}.
//   single_detuned_minus  one tone detuned by -Delta; element (Omega/2)e^{-i Delta t}.
//   cos_pair              both tones, equal signs; elements sum to Omega*cos(Delta t).
//   sin_pair              both tones, opposite signs ((Omega/2)e^{+i Delta t} and
//                         -(Omega/2)e^{-i Delta t}); elements sum to i*Omega*sin(Delta t).
//
// A single detuned tone never transfers more than Omega^2/(Omega^2+Delta^2)
// of the population, but a symmetric pair interferes into a slowly winding
// resonant-like drive that can transfer completely even though each tone is
// far off resonance.
enum class OrirKind { single_detuned_plus, single_detuned_minus, cos_pair, sin_pair };

OrirKind orir_kind_from_string(const std::string& name);
std::string to_string(OrirKind kind);

struct OrirDriveSpec {
  OrirKind kind = OrirKind::cos_pair;
  double omega = 0.0;  // rad/us; Rabi coupling of each tone
  double delta = 0.0;  // rad/us; detuning magnitude of the tone(s)
  double phase = 0.0;  // rad; common tone phase, Delta*t -> Delta*t + phase

  void validate() const;

  // Sparse Hamiltonian terms for this drive on the given transition.
  std::vector<HamiltonianTerm> terms(const LevelBasis& basis, const std::string& upper,
                                     const std::string& lower) const;
};

struct TwoLevelAmplitudes {
  Complex ground;
  Complex excited;
};

// Closed-form cos-pair amplitudes at time t for the state starting in |g>:
// C_g = cos[(Omega/Delta) sin(t Delta)], C_e = -i sin[(Omega/Delta) sin(t Delta)].
// Requires Delta != 0 (use the resonant pi-pulse formula otherwise).
TwoLevelAmplitudes analytic_amplitudes(double omega, double delta, double t);

// Closed-form amplitudes for any drive kind (phase = 0), starting from |g>.
// The paired drives commute with themselves across times, so their propagator
// is the exponential of the integrated coupling; the single detuned tones
// follow the generalized Rabi solution.
TwoLevelAmplitudes orir_analytic(const OrirDriveSpec& drive, double t);

// Upper bound Omega^2/(Omega^2+Delta^2) on the excited population of a
// single detuned tone.
double single_detuned_ceiling(double omega, double delta);

// Supremum over time of the excited-state population for any drive kind.
double excited_ceiling(const OrirDriveSpec& drive);

// Earliest time at which the excited population reaches 1, if the drive can
// transfer completely (phase = 0).
std::optional<double> complete_transfer_time(const OrirDriveSpec& drive);

// Numerical propagation from |g> over [0, duration] in basis {"g", "e"}.
Trajectory simulate_orir(const OrirDriveSpec& drive, double duration, const IntegratorConfig& cfg = {});

}  // namespace rydsim
