#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "rydsim/errors.hpp"
#include "rydsim/state.hpp"

namespace rydsim {

// Diagonal rotating-frame transform.  A frame is defined by one angular rate
// per level; the transformed amplitudes are
//
//   psi'_k(t) = exp(i * rate_k * (t - t_ref)) * psi_k(t).
//
// Moving a Hamiltonian from the lab (or reference) frame into this frame
// shifts the diagonal by -rate_k and multiplies the element <b|H|k> by
// exp(i*(rate_b - rate_k)*(t - t_ref)).  The library integrates everything
// in one fixed reference frame, so FrameTransform is mostly used by exact
// piecewise-constant propagators and by tests.
struct FrameTransform {
  std::vector<double> rates;  // rad/us, one per level
  double t_ref = 0.0;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, double t) const {
    if (psi.size() != static_cast<Eigen::Index>(rates.size()))
      throw ValidationError("FrameTransform: dimension mismatch");
    Eigen::VectorXcd out(psi.size());
    for (Eigen::Index k = 0; k < psi.size(); ++k)
      out(k) = std::exp(Complex(0.0, rates[static_cast<std::size_t>(k)] * (t - t_ref))) * psi(k);
    return out;
  }

  Eigen::VectorXcd apply_inverse(const Eigen::VectorXcd& psi, double t) const {
    FrameTransform inv{rates, t_ref};
    for (auto& r : inv.rates) r = -r;
    return inv.apply(psi, t);
  }
};

inline StateVector apply_frame(const StateVector& state, const FrameTransform& frame, double t) {
  return {state.basis, frame.apply(state.amplitudes, t)};
}

}  // namespace rydsim
