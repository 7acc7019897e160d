#include "rydsim/integrator.hpp"

#include <cmath>

namespace rydsim {

Trajectory evolve(const StateVector& initial, const std::vector<HamiltonianTerm>& terms, double t0, double t1,
                  const IntegratorConfig& cfg) {
  TermRhs rhs(terms, initial.basis.dim());
  Trajectory traj;
  traj.basis = initial.basis;
  traj.times.push_back(t0);
  traj.states.push_back(initial.amplitudes);

  Eigen::VectorXcd x = initial.amplitudes;
  const double norm0 = x.norm();
  double worst_drift = 0.0;
  integrate_adaptive(rhs, x, t0, t1, cfg, [&](double t, const Eigen::VectorXcd& y) {
    traj.times.push_back(t);
    traj.states.push_back(y);
    worst_drift = std::max(worst_drift, std::abs(y.norm() - norm0));
  });
  if (traj.times.back() != t1) {  // t0 == t1 degenerate case records nothing
    traj.times.push_back(t1);
    traj.states.push_back(x);
  }

  if (worst_drift > cfg.norm_tolerance * std::max(1.0, norm0))
    throw NumericalError("evolve: norm drift " + std::to_string(worst_drift) + " exceeds tolerance");
  return traj;
}

}  // namespace rydsim
