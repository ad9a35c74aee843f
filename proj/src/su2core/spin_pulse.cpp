#include <cmath>
#include <numbers>

#include "npulse/error.hpp"
#include "npulse/su2core.hpp"

namespace npulse {

namespace {

constexpr double kNormTolerance = 1e-12;

bool finite(double x) { return std::isfinite(x); }

// Truncation of the Gaussian envelope at +-4 sigma, sigma = duration / 8.
constexpr double kGaussianHalfWidthSigmas = 4.0;

double gaussian_sigma(const PulseSpec& pulse) {
  return pulse.duration / (2.0 * kGaussianHalfWidthSigmas);
}

// Integral of exp(-(t - T/2)^2 / (2 sigma^2)) over [t0, t1].
double gaussian_mass(const PulseSpec& pulse, double t0, double t1) {
  const double sigma = gaussian_sigma(pulse);
  const double centre = 0.5 * pulse.duration;
  const double scale = sigma * std::numbers::sqrt2;
  return sigma * std::sqrt(std::numbers::pi / 2.0) *
         (std::erf((t1 - centre) / scale) - std::erf((t0 - centre) / scale));
}

}  // namespace

Spin make_spin(int levels) {
  if (levels < 2) {
    throw InvalidInput("levels", "an N-level system needs N >= 2, got " + std::to_string(levels));
  }
  return Spin(levels);
}

std::string to_string(Envelope envelope) {
  return envelope == Envelope::rectangular ? "rectangular" : "gaussian";
}

Envelope envelope_from_string(const std::string& name) {
  if (name == "rectangular" || name == "rect") return Envelope::rectangular;
  if (name == "gaussian" || name == "gauss") return Envelope::gaussian;
  throw InvalidInput("envelope", "unknown envelope '" + name + "'");
}

void validate(const PulseSpec& pulse) {
  if (!finite(pulse.area) || !finite(pulse.phase) || !finite(pulse.detuning) ||
      !finite(pulse.duration)) {
    throw NumericError("pulse parameters must be finite");
  }
  if (pulse.area < 0.0) throw InvalidInput("area", "pulse area must be >= 0");
  if (pulse.duration <= 0.0) throw InvalidInput("duration", "pulse duration must be > 0");
}

double CompositeSequence::total_duration() const {
  double total = 0.0;
  for (const auto& p : pulses) total += p.duration;
  return total;
}

void validate(const CompositeSequence& sequence) {
  if (sequence.pulses.empty()) throw InvalidInput("pulses", "composite sequence is empty");
  for (const auto& p : sequence.pulses) validate(p);
}

CayleyKlein with_phase(const CayleyKlein& ck, double phase) {
  return {ck.a, ck.b * std::polar(1.0, -phase)};
}

CayleyKlein compose(const CayleyKlein& later, const CayleyKlein& earlier) {
  // [[a2, b2], [-b2*, a2*]] [[a1, b1], [-b1*, a1*]]
  CayleyKlein out{later.a * earlier.a - later.b * std::conj(earlier.b),
                  later.a * earlier.b + later.b * std::conj(earlier.a)};
  const double norm = std::sqrt(std::norm(out.a) + std::norm(out.b));
  out.a /= norm;
  out.b /= norm;
  return out;
}

CayleyKlein constant_rotation(double rabi, double detuning, double dt) {
  const double omega_r = std::hypot(detuning, rabi);
  if (omega_r == 0.0) return {};
  const double half = 0.5 * omega_r * dt;
  const double s = std::sin(half);
  return {Complex(std::cos(half), -detuning / omega_r * s), Complex(0.0, rabi / omega_r * s)};
}

CayleyKlein cayley_klein(const PulseSpec& pulse, int substeps) {
  validate(pulse);
  if (pulse.envelope == Envelope::rectangular || pulse.detuning == 0.0) {
    // At resonance only the accumulated area matters, whatever the shape.
    const double rabi = pulse.area / pulse.duration;
    return constant_rotation(rabi, pulse.detuning, pulse.duration);
  }
  if (substeps < 1) throw InvalidInput("substeps", "need at least one sub-step");
  CayleyKlein total;
  const double dt = pulse.duration / substeps;
  for (int k = 0; k < substeps; ++k) {
    const double t0 = k * dt;
    const double t1 = (k + 1 == substeps) ? pulse.duration : (k + 1) * dt;
    const double rabi = envelope_area(pulse, t0, t1) / (t1 - t0);
    total = compose(constant_rotation(rabi, pulse.detuning, t1 - t0), total);
  }
  return total;
}

CayleyKlein sequence_cayley_klein(const CompositeSequence& sequence, int substeps) {
  validate(sequence);
  CayleyKlein total;
  for (const auto& pulse : sequence.pulses) {
    total = compose(with_phase(cayley_klein(pulse, substeps), pulse.phase), total);
  }
  return total;
}

double pulse_envelope(const PulseSpec& pulse, double t) {
  validate(pulse);
  if (!(t >= 0.0 && t <= pulse.duration)) {
    throw RangeError("t", "time " + std::to_string(t) + " outside [0, duration]");
  }
  if (pulse.envelope == Envelope::rectangular) return pulse.area / pulse.duration;
  const double sigma = gaussian_sigma(pulse);
  const double x = (t - 0.5 * pulse.duration) / sigma;
  return pulse.area * std::exp(-0.5 * x * x) / gaussian_mass(pulse, 0.0, pulse.duration);
}

double envelope_area(const PulseSpec& pulse, double t0, double t1) {
  validate(pulse);
  if (!(t0 >= 0.0 && t1 <= pulse.duration && t0 <= t1)) {
    throw RangeError("t", "interval outside [0, duration]");
  }
  if (pulse.envelope == Envelope::rectangular) return pulse.area * (t1 - t0) / pulse.duration;
  return pulse.area * gaussian_mass(pulse, t0, t1) / gaussian_mass(pulse, 0.0, pulse.duration);
}

double UnitaryN::unitarity_error() const {
  const CMatrix defect = entries_.adjoint() * entries_ - CMatrix::Identity(dim(), dim());
  return defect.cwiseAbs().maxCoeff();
}

HermitianN::HermitianN(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw InvalidInput("hamiltonian", "matrix must be square and non-empty");
  }
  if (entries_ != entries_.adjoint()) {
    throw InvalidInput("hamiltonian", "matrix is not Hermitian");
  }
}

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 2) throw InvalidInput("state", "state needs at least two levels");
  if (!amplitudes_.allFinite()) throw NumericError("state amplitudes must be finite");
  const double norm = amplitudes_.squaredNorm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw InvalidInput("state", "state is not normalised (|psi|^2 = " + std::to_string(norm) + ")");
  }
}

StateVector StateVector::basis(int levels, int level) {
  if (levels < 2) throw InvalidInput("levels", "need at least two levels");
  if (level < 1 || level > levels) {
    throw InvalidInput("initial_level", "level " + std::to_string(level) + " outside 1.." +
                                            std::to_string(levels));
  }
  CVector v = CVector::Zero(levels);
  v(level - 1) = 1.0;
  return StateVector(std::move(v));
}

std::vector<double> StateVector::populations() const {
  std::vector<double> out(amplitudes_.size());
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) out[i] = std::norm(amplitudes_(i));
  return out;
}

std::vector<std::vector<double>> Trajectory::populations() const {
  std::vector<std::vector<double>> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.populations());
  return out;
}

}  // namespace npulse
