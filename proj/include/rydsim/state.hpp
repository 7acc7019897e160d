#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "rydsim/basis.hpp"
#include "rydsim/errors.hpp"

namespace rydsim {

using Complex = std::complex<double>;

// Normalized (or intentionally unnormalized) wavefunction over a LevelBasis.
struct StateVector {
  LevelBasis basis;
  Eigen::VectorXcd amplitudes;

  StateVector() = default;

  StateVector(LevelBasis b, Eigen::VectorXcd amp) : basis(std::move(b)), amplitudes(std::move(amp)) {
    if (amplitudes.size() != basis.dim())
      throw ValidationError("StateVector: amplitude count does not match basis dimension");
  }

  // Basis state |label>.
  static StateVector ket(const LevelBasis& b, const std::string& label) {
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(b.dim());
    amp(b.index(label)) = 1.0;
    return {b, std::move(amp)};
  }

  Complex amplitude(const std::string& label) const { return amplitudes(basis.index(label)); }
  double population(const std::string& label) const { return std::norm(amplitudes(basis.index(label))); }
  double norm() const { return amplitudes.norm(); }
};

inline Complex inner(const StateVector& a, const StateVector& b) {
  if (a.basis != b.basis) throw ValidationError("inner: states live in different bases");
  return a.amplitudes.dot(b.amplitudes);  // Eigen's dot conjugates the left argument
}

// |<a|b>|^2 for normalized states.
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner(a, b));
}

// Time-resolved record of an evolution.  `states[k]` is the wavefunction at
// `times[k]`; the first entry is the initial condition, the last the final
// state.
struct Trajectory {
  LevelBasis basis;
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;

  StateVector final_state() const {
    if (states.empty()) throw NumericalError("Trajectory: empty");
    return {basis, states.back()};
  }

  StateVector at(std::size_t k) const { return {basis, states.at(k)}; }

  // Population of one level at every sample time.
  std::vector<double> population_series(const std::string& label) const {
    const int i = basis.index(label);
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& psi : states) out.push_back(std::norm(psi(i)));
    return out;
  }

  // Summed population of several levels at every sample time.
  std::vector<double> population_series(const std::vector<std::string>& labels) const {
    std::vector<int> idx;
    for (const auto& l : labels) idx.push_back(basis.index(l));
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& psi : states) {
      double p = 0.0;
      for (int i : idx) p += std::norm(psi(i));
      out.push_back(p);
    }
    return out;
  }

  double max_population(const std::string& label) const {
    double best = 0.0;
    for (double p : population_series(label)) best = std::max(best, p);
    return best;
  }
};

// Time integral of the summed population of `labels` over the trajectory
// (trapezoidal rule).  Used for the accumulated time spent in short-lived
// levels, whose ratio to the level lifetime gives the spontaneous-decay
// error of a protocol.
inline double integrated_population(const Trajectory& traj, const std::vector<std::string>& labels) {
  const auto pop = traj.population_series(labels);
  double acc = 0.0;
  for (std::size_t k = 1; k < pop.size(); ++k)
    acc += 0.5 * (pop[k] + pop[k - 1]) * (traj.times[k] - traj.times[k - 1]);
  return acc;
}

}  // namespace rydsim
