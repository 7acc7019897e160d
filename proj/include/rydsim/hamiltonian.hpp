#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rydsim/basis.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/state.hpp"

namespace rydsim {

// One matrix element of a (generally time-dependent) Hamiltonian.
//
// Convention: `amplitude(t)` is the matrix element <bra| H(t) |ket>.  For an
// off-diagonal term the Hermitian conjugate <ket| H |bra> = conj(amplitude)
// is implied automatically and must NOT be added as a second term.  A
// diagonal term (bra == ket) enters exactly once and its amplitude must be
// real at all times (checked on sampled times by validate_terms).
struct HamiltonianTerm {
  int bra = 0;
  int ket = 0;
  std::function<Complex(double)> amplitude;

  // Time-independent element.
  static HamiltonianTerm constant(int bra, int ket, Complex value) {
    if (bra == ket && std::abs(value.imag()) > 0.0)
      throw ValidationError("HamiltonianTerm: diagonal element must be real");
    return {bra, ket, [value](double) { return value; }};
  }

  // Rotating element (rabi/2) * exp(i*(detuning*t + phase)).  `rabi` may be
  // complex to absorb fixed sign/phase conventions of a drive.
  static HamiltonianTerm tone(int bra, int ket, Complex rabi, double detuning, double phase = 0.0) {
    return {bra, ket, [rabi, detuning, phase](double t) {
              return 0.5 * rabi * std::exp(Complex(0.0, detuning * t + phase));
            }};
  }
};

// Sanity-check a term list against a basis; samples each term at `t_probe`
// times to catch complex diagonals.
inline void validate_terms(const std::vector<HamiltonianTerm>& terms, int dim,
                           const std::vector<double>& t_probe = {0.0, 0.1, 0.7}) {
  for (const auto& term : terms) {
    if (term.bra < 0 || term.bra >= dim || term.ket < 0 || term.ket >= dim)
      throw ValidationError("HamiltonianTerm: level index out of range");
    if (!term.amplitude) throw ValidationError("HamiltonianTerm: missing amplitude function");
    if (term.bra == term.ket) {
      for (double t : t_probe)
        if (std::abs(term.amplitude(t).imag()) > 1e-12 * (1.0 + std::abs(term.amplitude(t).real())))
          throw ValidationError("HamiltonianTerm: diagonal element has imaginary part");
    }
  }
}

// Schroedinger right-hand side dpsi/dt = -i H(t) psi for a sparse term list.
// Off-diagonal terms contribute both the stored element and its conjugate.
class TermRhs {
 public:
  TermRhs(std::vector<HamiltonianTerm> terms, int dim) : terms_(std::move(terms)), dim_(dim) {
    validate_terms(terms_, dim_);
  }

  int dim() const { return dim_; }

  void operator()(const Eigen::VectorXcd& psi, Eigen::VectorXcd& dpsi_dt, double t) const {
    dpsi_dt.setZero(dim_);
    const Complex minus_i(0.0, -1.0);
    for (const auto& term : terms_) {
      const Complex a = term.amplitude(t);
      if (term.bra == term.ket) {
        dpsi_dt(term.bra) += minus_i * a * psi(term.ket);
      } else {
        dpsi_dt(term.bra) += minus_i * a * psi(term.ket);
        dpsi_dt(term.ket) += minus_i * std::conj(a) * psi(term.bra);
      }
    }
  }

  // Dense matrix H(t); used by tests and small exact propagators.
  Eigen::MatrixXcd matrix(double t) const {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (const auto& term : terms_) {
      const Complex a = term.amplitude(t);
      if (term.bra == term.ket) {
        h(term.bra, term.ket) += a;
      } else {
        h(term.bra, term.ket) += a;
        h(term.ket, term.bra) += std::conj(a);
      }
    }
    return h;
  }

private:
  std::vector<HamiltonianTerm> terms_;
  int dim_;
};

}  // namespace rydsim
