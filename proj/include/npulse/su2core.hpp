#pragma once

// Two-level SU(2) propagators, their lift to N levels through the spin-j
// representation, ladder Hamiltonians, and state evolution on a time grid.
//
// Conventions used throughout the library:
//  * Level n (1-based) carries magnetic number m = n - 1 - j, so level 1 is
//    m = -j and level N is m = +j.
//  * Evolution is psi(t) = exp(+i H t) psi(0).
//  * A resonant pulse of area A rotates the two-level Bloch vector by A; a
//    pulse of area pi inverts 1 -> N for every N. In the ladder Hamiltonian the
//    coupling between levels n and n+1 is Omega_0 sqrt(n (N - n)) / 2 with the
//    pulse area A = Omega_0 * duration.
//  * The pulse phase enters as b -> b exp(-i phi) when the Cayley-Klein pair is
//    turned into a matrix; `CayleyKlein` values themselves are phase-free unless
//    produced by `with_phase` or `sequence_cayley_klein`.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace npulse {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Largest supported 2j. The D^j element sum is evaluated with log-factorials
/// and stays accurate up to here.
inline constexpr int kMaxTwiceJ = 50;

/// Default number of piecewise-constant sub-steps for shaped pulses.
inline constexpr int kDefaultSubsteps = 200;

class Spin {
 public:
  int levels() const noexcept { return levels_; }
  int twice_j() const noexcept { return levels_ - 1; }
  double j() const noexcept { return 0.5 * (levels_ - 1); }

  friend bool operator==(const Spin&, const Spin&) = default;

 private:
  explicit Spin(int levels) : levels_(levels) {}
  friend Spin make_spin(int levels);

  int levels_;
};

/// Throws InvalidInput when levels < 2.
Spin make_spin(int levels);

enum class Envelope { rectangular, gaussian };

std::string to_string(Envelope envelope);
Envelope envelope_from_string(const std::string& name);

struct PulseSpec {
  double area = 0.0;       // radians
  double phase = 0.0;      // radians
  double detuning = 0.0;   // rad / time
  Envelope envelope = Envelope::rectangular;
  double duration = 1.0;   // time units
};

void validate(const PulseSpec& pulse);

struct CompositeSequence {
  std::vector<PulseSpec> pulses;
  std::string label;

  double total_duration() const;
};

void validate(const CompositeSequence& sequence);

struct CayleyKlein {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};

  double norm_error() const { return std::abs(std::norm(a) + std::norm(b) - 1.0); }
};

/// Fold a pulse phase into b.
CayleyKlein with_phase(const CayleyKlein& ck, double phase);

/// Group product: the pair of the 2x2 matrix `later * earlier`.
CayleyKlein compose(const CayleyKlein& later, const CayleyKlein& earlier);

/// Rotation generated by a constant Rabi frequency and detuning over `dt`.
CayleyKlein constant_rotation(double rabi, double detuning, double dt);

/// Phase-free Cayley-Klein pair of one pulse. Gaussian pulses with non-zero
/// detuning are integrated with `substeps` piecewise-constant steps.
CayleyKlein cayley_klein(const PulseSpec& pulse, int substeps = kDefaultSubsteps);

/// Ordered product of all pulses of a sequence, phases folded in.
CayleyKlein sequence_cayley_klein(const CompositeSequence& sequence,
                                  int substeps = kDefaultSubsteps);

class UnitaryN {
 public:
  UnitaryN() = default;
  explicit UnitaryN(CMatrix entries) : entries_(std::move(entries)) {}

  const CMatrix& matrix() const noexcept { return entries_; }
  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  /// max |U^dagger U - I|
  double unitarity_error() const;

 private:
  CMatrix entries_;
};

class HermitianN {
 public:
  /// Throws InvalidInput unless `entries` is square and exactly Hermitian.
  explicit HermitianN(CMatrix entries);

  const CMatrix& matrix() const noexcept { return entries_; }
  int dim() const noexcept { return static_cast<int>(entries_.rows()); }

 private:
  CMatrix entries_;
};

class StateVector {
 public:
  /// Throws InvalidInput unless the amplitudes are unit-norm within 1e-12.
  explicit StateVector(CVector amplitudes);

  /// |level>, 1-based.
  static StateVector basis(int levels, int level);

  int dim() const noexcept { return static_cast<int>(amplitudes_.size()); }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](int index) const { return amplitudes_(index); }
  std::vector<double> populations() const;

 private:
  CVector amplitudes_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;

  /// populations()[sample][level - 1]
  std::vector<std::vector<double>> populations() const;
};

UnitaryN su2_propagator(const CayleyKlein& ck, double phase);

/// D^j[a, b e^{-i phase}] with rows/columns ordered by level. Throws RangeError
/// for 2j > kMaxTwiceJ.
UnitaryN wigner_d(const Spin& spin, const CayleyKlein& ck, double phase);

/// Tridiagonal ladder with H(n, n+1) = omega0 sqrt(n (N - n)) / 2 and
/// H(n, n) = n * delta0 + d0.
HermitianN cook_shore_hamiltonian(const Spin& spin, Complex omega0, double delta0, double d0);

/// Ladder Hamiltonian of a rectangular pulse, with the constant offset chosen
/// so that expm_hermitian(h, duration) equals the lifted propagator exactly.
HermitianN pulse_hamiltonian(const Spin& spin, const PulseSpec& pulse);

/// exp(+i H t) through the Hermitian eigendecomposition.
UnitaryN expm_hermitian(const HermitianN& h, double t);

/// Instantaneous Rabi frequency at 0 <= t <= duration.
double pulse_envelope(const PulseSpec& pulse, double t);

/// Exact integral of the envelope over [t0, t1].
double envelope_area(const PulseSpec& pulse, double t0, double t1);

/// Lifted propagator of the whole sequence.
UnitaryN sequence_propagator(const Spin& spin, const CompositeSequence& sequence,
                             int substeps = kDefaultSubsteps);

Trajectory evolve_state(const StateVector& state, const CompositeSequence& sequence,
                        int samples_per_pulse = kDefaultSubsteps);

/// As above, rejecting a state whose dimension does not match `spin`.
Trajectory evolve_state(const Spin& spin, const StateVector& state,
                        const CompositeSequence& sequence,
                        int samples_per_pulse = kDefaultSubsteps);

}  // namespace npulse
