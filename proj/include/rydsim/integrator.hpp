#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "rydsim/errors.hpp"
#include "rydsim/hamiltonian.hpp"
#include "rydsim/state.hpp"

// odeint's error control needs a real-valued infinity norm for the state
// type; the default trait for Eigen complex vectors yields a complex result,
// which does not compile inside the error checker.
namespace boost::numeric::odeint {
template <>
struct vector_space_norm_inf<Eigen::VectorXcd> {
  typedef double result_type;
  double operator()(const Eigen::VectorXcd& v) const { return v.cwiseAbs().maxCoeff(); }
};
}  // namespace boost::numeric::odeint

namespace rydsim {

struct IntegratorConfig {
  double rtol = 1e-12;           // relative tolerance per step
  double atol = 1e-14;           // absolute tolerance per step
  double max_step = 0.0;         // us; 0 = no cap
  double initial_step = 1e-4;    // us; first trial step
  double sample_interval = 0.0;  // us; 0 = record segment endpoints only
  double norm_tolerance = 1e-10; // allowed drift of ||psi|| over a full evolution

  void validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0))
      throw ValidationError("IntegratorConfig: tolerances must be positive");
    if (max_step < 0.0 || initial_step <= 0.0 || sample_interval < 0.0)
      throw ValidationError("IntegratorConfig: step settings must be nonnegative");
  }
};

// Adaptive Runge-Kutta-Fehlberg 7(8) propagation of x' = rhs(x, t) from t0 to
// t1.  `observe(t, x)` fires at every multiple of cfg.sample_interval past t0
// and at t1 (if sample_interval == 0, only at t1; never at t0 itself, so
// segments can be stitched without duplicate samples).  Sample times are hit
// exactly by shortening steps; the pre-landing cruise step size is restored
// afterwards so forced short steps do not degrade the subsequent step-size
// control.
template <class Rhs>
void integrate_adaptive(Rhs&& rhs, Eigen::VectorXcd& x, double t0, double t1, const IntegratorConfig& cfg,
                        const std::function<void(double, const Eigen::VectorXcd&)>& observe = {}) {
  namespace ode = boost::numeric::odeint;
  using Stepper = ode::runge_kutta_fehlberg78<Eigen::VectorXcd, double, Eigen::VectorXcd, double,
                                              ode::vector_space_algebra>;
  cfg.validate();
  if (t1 < t0) throw ValidationError("integrate_adaptive: t1 < t0");
  const double span = t1 - t0;
  const double tiny = 1e-13 * std::max({1.0, std::abs(t0), std::abs(t1)});
  if (span <= tiny) {
    if (observe) observe(t1, x);
    return;
  }

  auto stepper = ode::make_controlled<Stepper>(cfg.atol, cfg.rtol);
  double dt = std::min(cfg.initial_step, span);
  if (cfg.max_step > 0.0) dt = std::min(dt, cfg.max_step);

  long sample_index = 1;  // next multiple of sample_interval to land on
  auto next_sample = [&]() {
    if (cfg.sample_interval <= 0.0) return t1;
    return std::min(t1, t0 + cfg.sample_interval * static_cast<double>(sample_index));
  };

  double t = t0;
  int consecutive_failures = 0;
  while (t < t1 - tiny) {
    const double target = next_sample();
    bool landing = false;
    double dt_cruise = dt;
    if (t + dt >= target - tiny) {
      dt = target - t;
      landing = true;
    }
    const auto result = stepper.try_step(rhs, x, t, dt);
    if (result == ode::fail) {
      // try_step reduced dt; retry.
      if (++consecutive_failures > 80 || dt < 1e-14 * std::max(1.0, std::abs(t)))
        throw NumericalError("integrate_adaptive: step size underflow at t = " + std::to_string(t) +
                             " us (requested tolerances may be unreachable)");
      continue;
    }
    consecutive_failures = 0;
    if (landing) {
      t = target;  // clamp away the last-step rounding error
      dt = dt_cruise;
      if (observe) observe(t, x);
      if (cfg.sample_interval > 0.0 && target >= t0 + cfg.sample_interval * static_cast<double>(sample_index) - tiny)
        ++sample_index;
    }
    if (cfg.max_step > 0.0) dt = std::min(dt, cfg.max_step);
  }
}

// Propagate a StateVector under a sparse Hamiltonian term list.  Returns the
// sampled trajectory, including the initial state at t0.  The total norm must
// be conserved to cfg.norm_tolerance or a NumericalError is thrown.
Trajectory evolve(const StateVector& initial, const std::vector<HamiltonianTerm>& terms, double t0, double t1,
                  const IntegratorConfig& cfg = {});

}  // namespace rydsim
