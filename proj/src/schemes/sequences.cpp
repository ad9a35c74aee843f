#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "npulse/error.hpp"
#include "npulse/schemes.hpp"

namespace npulse {

namespace {

constexpr double kPi = std::numbers::pi;

void check_area_error(double area_error) {
  if (!std::isfinite(area_error)) throw NumericError("area error must be finite");
  if (std::abs(area_error) > kPi) {
    throw InvalidInput("delta", "area error must lie in [-pi, pi], got " + std::to_string(area_error));
  }
}

PulseSpec scaled_pulse(double nominal_area, double phase, double area_error, Envelope envelope) {
  const double scale = (kPi + area_error) / kPi;
  PulseSpec p;
  p.area = nominal_area * scale;
  p.phase = phase;
  p.envelope = envelope;
  // Constant peak Rabi frequency: a nominal pi pulse lasts one time unit.
  p.duration = nominal_area / kPi;
  return p;
}

}  // namespace

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::single: return "single";
    case SchemeKind::nmr: return "nmr";
    case SchemeKind::broadband: return "broadband";
    case SchemeKind::narrowband: return "narrowband";
    case SchemeKind::passband: return "passband";
  }
  return "unknown";
}

SchemeKind scheme_from_string(const std::string& name) {
  if (name == "single") return SchemeKind::single;
  if (name == "nmr") return SchemeKind::nmr;
  if (name == "broadband" || name == "bb") return SchemeKind::broadband;
  if (name == "narrowband" || name == "nb") return SchemeKind::narrowband;
  if (name == "passband" || name == "pb") return SchemeKind::passband;
  throw InvalidInput("scheme", "unknown scheme '" + name + "'");
}

int PhaseSchedule::flat_order() const noexcept {
  switch (kind) {
    case SchemeKind::narrowband: return bottom_order;
    case SchemeKind::passband: return std::min(top_order, bottom_order);
    default: return top_order;
  }
}

PhaseSchedule single_schedule() { return PhaseSchedule{}; }

PhaseSchedule nmr_schedule() {
  PhaseSchedule s;
  s.kind = SchemeKind::nmr;
  s.phases = {0.0, 0.5 * kPi, 0.0};
  // 1 - P = delta^4 / 16 + O(delta^6) for the two-level transfer.
  s.top_order = 4;
  s.bottom_order = 2;
  return s;
}

CompositeSequence nmr_sequence(double area_error, Envelope envelope) {
  check_area_error(area_error);
  CompositeSequence seq;
  seq.label = "nmr";
  seq.pulses = {scaled_pulse(0.5 * kPi, 0.0, area_error, envelope),
                scaled_pulse(kPi, 0.5 * kPi, area_error, envelope),
                scaled_pulse(0.5 * kPi, 0.0, area_error, envelope)};
  return seq;
}

CompositeSequence build_sequence(SchemeKind kind, const PhaseSchedule& schedule, double area_error,
                                 Envelope envelope) {
  check_area_error(area_error);
  if (kind == SchemeKind::nmr) return nmr_sequence(area_error, envelope);
  if (schedule.phases.empty()) throw InvalidInput("schedule", "phase schedule is empty");
  if (kind == SchemeKind::single && schedule.count() != 1) {
    throw InvalidInput("pulses", "a single-pulse scheme has exactly one pulse");
  }
  CompositeSequence seq;
  seq.label = to_string(kind);
  seq.pulses.reserve(schedule.phases.size());
  for (double phi : schedule.phases) {
    if (!std::isfinite(phi)) throw NumericError("phase must be finite");
    seq.pulses.push_back(scaled_pulse(kPi, phi, area_error, envelope));
  }
  return seq;
}

double transition_probability(const Spin& spin, const CompositeSequence& sequence, int from_level,
                              int to_level) {
  const int n = spin.levels();
  if (from_level < 1 || from_level > n) {
    throw InvalidInput("from_level", "level " + std::to_string(from_level) + " outside 1.." + std::to_string(n));
  }
  if (to_level < 1 || to_level > n) {
    throw InvalidInput("to_level", "level " + std::to_string(to_level) + " outside 1.." + std::to_string(n));
  }
  const UnitaryN u = sequence_propagator(spin, sequence);
  return std::norm(u(to_level - 1, from_level - 1));
}

int palindromic_target(const Spin& spin, int m) {
  if (m < 1 || m > spin.levels()) {
    throw InvalidInput("initial_level", "level " + std::to_string(m) + " outside 1.." +
                                            std::to_string(spin.levels()));
  }
  return spin.levels() - m + 1;
}

std::vector<double> uniform_grid(double lo, double hi, int count) {
  if (count < 1) throw InvalidInput("grid", "grid needs at least one point");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw NumericError("grid bounds must be finite");
  if (count > 1 && !(hi > lo)) throw InvalidInput("grid", "grid max must exceed min");
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  }
  if (count > 1) grid.back() = hi;
  return grid;
}

double two_level_probability(std::span<const double> phases, double area) {
  CayleyKlein total;
  const CayleyKlein pulse = constant_rotation(area, 0.0, 1.0);
  for (double phi : phases) total = compose(with_phase(pulse, phi), total);
  return std::norm(total.b);
}

}  // namespace npulse
