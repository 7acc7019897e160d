#include "rydsim/orir.hpp"

#include <cmath>
#include <limits>

#include "rydsim/units.hpp"

namespace rydsim {

OrirKind orir_kind_from_string(const std::string& name) {
  if (name == "single-detuned-plus" || name == "single_detuned_plus") return OrirKind::single_detuned_plus;
  if (name == "single-detuned-minus" || name == "single_detuned_minus") return OrirKind::single_detuned_minus;
  if (name == "cos-pair" || name == "cos_pair") return OrirKind::cos_pair;
  if (name == "sin-pair" || name == "sin_pair") return OrirKind::sin_pair;
  throw ValidationError("unknown drive kind '" + name +
                        "' (expected single-detuned-plus|single-detuned-minus|cos-pair|sin-pair)");
}

std::string to_string(OrirKind kind) {
  switch (kind) {
    case OrirKind::single_detuned_plus: return "single-detuned-plus";
    case OrirKind::single_detuned_minus: return "single-detuned-minus";
    case OrirKind::cos_pair: return "cos-pair";
    case OrirKind::sin_pair: return "sin-pair";
  }
  return "?";
}

void OrirDriveSpec::validate() const {
  if (!(omega > 0.0)) throw ValidationError("OrirDriveSpec: omega must be positive");
  if (!(delta > 0.0)) throw ValidationError("OrirDriveSpec: delta must be positive");
}

std::vector<HamiltonianTerm> OrirDriveSpec::terms(const LevelBasis& basis, const std::string& upper,
                                                  const std::string& lower) const {
  validate();
  const int e = basis.index(upper);
  const int g = basis.index(lower);
  switch (kind) {
    case OrirKind::single_detuned_plus:
      return {HamiltonianTerm::tone(e, g, omega, delta, phase)};
    case OrirKind::single_detuned_minus:
      return {HamiltonianTerm::tone(e, g, omega, -delta, -phase)};
    case OrirKind::cos_pair:
      return {HamiltonianTerm::tone(e, g, omega, delta, phase),
              HamiltonianTerm::tone(e, g, omega, -delta, -phase)};
    case OrirKind::sin_pair:
      return {HamiltonianTerm::tone(e, g, omega, delta, phase),
              HamiltonianTerm::tone(e, g, -omega, -delta, -phase)};
  }
  throw ValidationError("OrirDriveSpec: unknown kind");
}

TwoLevelAmplitudes analytic_amplitudes(double omega, double delta, double t) {
  if (delta == 0.0)
    throw ValidationError("analytic_amplitudes: delta must be nonzero (resonant case is a plain pi pulse)");
  const double theta = (omega / delta) * std::sin(delta * t);
  return {std::cos(theta), Complex(0.0, -1.0) * std::sin(theta)};
}

TwoLevelAmplitudes orir_analytic(const OrirDriveSpec& drive, double t) {
  drive.validate();
  const double om = drive.omega, de = drive.delta;
  switch (drive.kind) {
    case OrirKind::single_detuned_plus:
    case OrirKind::single_detuned_minus: {
      // Generalized Rabi solution for element (Omega/2)e^{+-i Delta t}; the
      // amplitudes carry the residual frame phase e^{-+i Delta t/2}.
      const double sd = drive.kind == OrirKind::single_detuned_plus ? de : -de;
      const double w = std::hypot(om, de);
      const double c = std::cos(0.5 * w * t), s = std::sin(0.5 * w * t);
      const Complex half_phase = std::exp(Complex(0.0, -0.5 * sd * t));
      const Complex ground = (Complex(c, 0.0) + Complex(0.0, sd / w) * s) * half_phase;
      const Complex excited = Complex(0.0, -om / w) * s * std::conj(half_phase);
      return {ground, excited};
    }
    case OrirKind::cos_pair: {
      // Element Omega*cos(Delta t + phase): every instant drives the same
      // Bloch axis, so the family commutes and the propagator is set by the
      // integrated angle theta(t) = (Omega/Delta)(sin(Delta t + phase) -
      // sin(phase)).
      const double theta = (om / de) * (std::sin(de * t + drive.phase) - std::sin(drive.phase));
      return {std::cos(theta), Complex(0.0, -1.0) * std::sin(theta)};
    }
    case OrirKind::sin_pair: {
      // Element i*Omega*sin(Delta t + phase): integrated angle
      // theta(t) = (Omega/Delta)(cos(phase) - cos(Delta t + phase)).  The
      // generator maps |g> -> cos(theta)|g> + sin(theta)|e> with both
      // amplitudes real.  At phase 0 the angle first returns to 0 (mod 2pi)
      // at t = pi/Delta when Omega/Delta is a multiple of pi, so a drive
      // with Omega/Delta = pi passes through amplitude -1 on |g> at
      // t = pi/(2*Delta) (a full 2pi Bloch rotation) and is back to +1 at
      // t = pi/Delta.
      const double theta = (om / de) * (std::cos(drive.phase) - std::cos(de * t + drive.phase));
      return {std::cos(theta), std::sin(theta)};
    }
  }
  throw ValidationError("orir_analytic: unknown kind");
}

double single_detuned_ceiling(double omega, double delta) {
  if (omega == 0.0 && delta == 0.0)
    throw ValidationError("single_detuned_ceiling: omega and delta cannot both be zero");
  return omega * omega / (omega * omega + delta * delta);
}

double excited_ceiling(const OrirDriveSpec& drive) {
  drive.validate();
  const double om = drive.omega, de = drive.delta;
  switch (drive.kind) {
    case OrirKind::single_detuned_plus:
    case OrirKind::single_detuned_minus:
      return single_detuned_ceiling(om, de);
    case OrirKind::cos_pair: {
      // Integrated angle sweeps an interval through 0 whose farthest point
      // from 0 is (Omega/Delta)(1 + |sin(phase)|); at phase 0 that is the
      // symmetric sweep [-Omega/Delta, +Omega/Delta].
      const double theta_max = (om / de) * (1.0 + std::abs(std::sin(drive.phase)));
      if (theta_max >= 0.5 * units::pi) return 1.0;
      const double s = std::sin(theta_max);
      return s * s;
    }
    case OrirKind::sin_pair: {
      // Farthest integrated angle from 0 is
      // (Omega/Delta)(1 + |cos(phase)|); at phase 0 the sweep is
      // [0, 2*Omega/Delta].
      const double theta_max = (om / de) * (1.0 + std::abs(std::cos(drive.phase)));
      if (theta_max >= 0.5 * units::pi) return 1.0;
      const double s = std::sin(theta_max);
      return s * s;
    }
  }
  throw ValidationError("excited_ceiling: unknown kind");
}

namespace {

constexpr double kNoCrossing = std::numeric_limits<double>::infinity();

// Smallest u strictly greater than u0 with sin(u) = c (infinity if |c| > 1).
double next_sin_crossing(double c, double u0) {
  if (std::abs(c) > 1.0) return kNoCrossing;
  const double a = std::asin(c);
  double best = kNoCrossing;
  for (double base : {a, units::pi - a}) {
    double u = base + units::two_pi * std::ceil((u0 - base) / units::two_pi);
    if (u <= u0 + 1e-12) u += units::two_pi;
    best = std::min(best, u);
  }
  return best;
}

// Smallest u strictly greater than u0 with cos(u) = c (infinity if |c| > 1).
double next_cos_crossing(double c, double u0) {
  if (std::abs(c) > 1.0) return kNoCrossing;
  const double b = std::acos(c);
  double best = kNoCrossing;
  for (double base : {b, -b}) {
    double u = base + units::two_pi * std::ceil((u0 - base) / units::two_pi);
    if (u <= u0 + 1e-12) u += units::two_pi;
    best = std::min(best, u);
  }
  return best;
}

}  // namespace

std::optional<double> complete_transfer_time(const OrirDriveSpec& drive) {
  drive.validate();
  const double om = drive.omega, de = drive.delta;
  // Full transfer happens the first time the integrated angle reaches +-pi/2.
  const double step = 0.5 * units::pi * de / om;
  switch (drive.kind) {
    case OrirKind::single_detuned_plus:
    case OrirKind::single_detuned_minus:
      return std::nullopt;
    case OrirKind::cos_pair: {
      // theta = (Omega/Delta)(sin(u) - sin(phase)) with u = Delta t + phase.
      const double s0 = std::sin(drive.phase);
      const double u = std::min(next_sin_crossing(s0 + step, drive.phase),
                                next_sin_crossing(s0 - step, drive.phase));
      if (u == kNoCrossing) return std::nullopt;
      return (u - drive.phase) / de;
    }
    case OrirKind::sin_pair: {
      // theta = (Omega/Delta)(cos(phase) - cos(u)) with u = Delta t + phase.
      const double c0 = std::cos(drive.phase);
      const double u = std::min(next_cos_crossing(c0 - step, drive.phase),
                                next_cos_crossing(c0 + step, drive.phase));
      if (u == kNoCrossing) return std::nullopt;
      return (u - drive.phase) / de;
    }
  }
  throw ValidationError("complete_transfer_time: unknown kind");
}

Trajectory simulate_orir(const OrirDriveSpec& drive, double duration, const IntegratorConfig& cfg) {
  LevelBasis basis({"g", "e"});
  const auto init = StateVector::ket(basis, "g");
  return evolve(init, drive.terms(basis, "e", "g"), 0.0, duration, cfg);
}

}  // namespace rydsim
