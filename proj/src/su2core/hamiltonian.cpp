#include <cmath>

#include "npulse/error.hpp"
#include "npulse/su2core.hpp"

namespace npulse {

HermitianN cook_shore_hamiltonian(const Spin& spin, Complex omega0, double delta0, double d0) {
  if (!std::isfinite(omega0.real()) || !std::isfinite(omega0.imag()) || !std::isfinite(delta0) ||
      !std::isfinite(d0)) {
    throw NumericError("Hamiltonian parameters must be finite");
  }
  const int n_levels = spin.levels();
  CMatrix h = CMatrix::Zero(n_levels, n_levels);
  for (int n = 1; n <= n_levels; ++n) {
    h(n - 1, n - 1) = n * delta0 + d0;
  }
  for (int n = 1; n < n_levels; ++n) {
    const Complex coupling = 0.5 * omega0 * std::sqrt(static_cast<double>(n * (n_levels - n)));
    h(n - 1, n) = coupling;
    h(n, n - 1) = std::conj(coupling);
  }
  return HermitianN(std::move(h));
}

HermitianN pulse_hamiltonian(const Spin& spin, const PulseSpec& pulse) {
  validate(pulse);
  if (pulse.envelope != Envelope::rectangular) {
    throw InvalidInput("envelope", "a single ladder Hamiltonian describes rectangular pulses only");
  }
  const Complex omega0 = std::polar(pulse.area / pulse.duration, -pulse.phase);
  // Diagonal (n - (N + 1) / 2) * Delta is the lift of diag(-Delta, Delta) / 2.
  const double d0 = -0.5 * (spin.levels() + 1) * pulse.detuning;
  return cook_shore_hamiltonian(spin, omega0, pulse.detuning, d0);
}

UnitaryN expm_hermitian(const HermitianN& h, double t) {
  if (!std::isfinite(t)) throw NumericError("time must be finite");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h.matrix());
  if (eig.info() != Eigen::Success) {
    throw NumericError("Hermitian eigendecomposition failed (dim " + std::to_string(h.dim()) +
                       ", |H|_max " + std::to_string(h.matrix().cwiseAbs().maxCoeff()) + ")");
  }
  const CMatrix& v = eig.eigenvectors();
  CVector phases(h.dim());
  for (int k = 0; k < h.dim(); ++k) phases(k) = std::polar(1.0, eig.eigenvalues()(k) * t);
  return UnitaryN(v * phases.asDiagonal() * v.adjoint());
}

}  // namespace npulse
