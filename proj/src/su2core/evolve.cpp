#include <cmath>
#include <string>

#include "npulse/error.hpp"
#include "npulse/su2core.hpp"

namespace npulse {

UnitaryN sequence_propagator(const Spin& spin, const CompositeSequence& sequence, int substeps) {
  return wigner_d(spin, sequence_cayley_klein(sequence, substeps), 0.0);
}

Trajectory evolve_state(const StateVector& state, const CompositeSequence& sequence,
                        int samples_per_pulse) {
  validate(sequence);
  if (samples_per_pulse < 2) {
    throw InvalidInput("samples", "need at least 2 samples per pulse");
  }
  const Spin spin = make_spin(state.dim());

  Trajectory traj;
  const std::size_t n_samples = sequence.pulses.size() * samples_per_pulse + 1;
  traj.times.reserve(n_samples);
  traj.states.reserve(n_samples);
  traj.times.push_back(0.0);
  traj.states.push_back(state);

  // The two-level product is accumulated and renormalised, then lifted once
  // per sample, so the norm does not drift with the number of samples.
  const CVector& psi0 = state.amplitudes();
  CayleyKlein total;
  double t_start = 0.0;
  for (const auto& pulse : sequence.pulses) {
    const double dt = pulse.duration / samples_per_pulse;
    // Rectangular sub-steps share one exact rotation.
    CayleyKlein step = with_phase(constant_rotation(pulse.area / pulse.duration, pulse.detuning, dt), pulse.phase);
    for (int k = 0; k < samples_per_pulse; ++k) {
      const double t0 = k * dt;
      const double t1 = (k + 1 == samples_per_pulse) ? pulse.duration : (k + 1) * dt;
      if (pulse.envelope == Envelope::gaussian) {
        // Piecewise-constant Rabi frequency equal to the sub-step average, so the
        // accumulated area is exact.
        const double rabi = envelope_area(pulse, t0, t1) / (t1 - t0);
        step = with_phase(constant_rotation(rabi, pulse.detuning, t1 - t0), pulse.phase);
      }
      total = compose(step, total);
      const double norm = std::sqrt(std::norm(total.a) + std::norm(total.b));
      total.a /= norm;
      total.b /= norm;
      CVector psi = wigner_d(spin, total, 0.0).matrix() * psi0;
      psi /= psi.norm();
      traj.times.push_back(t_start + t1);
      traj.states.emplace_back(std::move(psi));
    }
    t_start += pulse.duration;
  }
  return traj;
}

Trajectory evolve_state(const Spin& spin, const StateVector& state,
                        const CompositeSequence& sequence, int samples_per_pulse) {
  if (state.dim() != spin.levels()) {
    throw InvalidInput("state", "state has " + std::to_string(state.dim()) +
                                    " amplitudes but the system has " +
                                    std::to_string(spin.levels()) + " levels");
  }
  return evolve_state(state, sequence, samples_per_pulse);
}

}  // namespace npulse
