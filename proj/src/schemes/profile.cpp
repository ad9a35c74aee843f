#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "npulse/error.hpp"
#include "npulse/schemes.hpp"

namespace npulse {

namespace {

ProfileCurve prepare(const Spin& spin, SchemeKind kind, const PhaseSchedule& schedule,
                     std::span<const double> grid, int from_level) {
  if (grid.empty()) throw InvalidInput("grid", "delta grid is empty");
  for (double d : grid) {
    if (!std::isfinite(d)) throw NumericError("grid values must be finite");
    if (std::abs(d) > std::numbers::pi) {
      throw InvalidInput("grid", "grid values must lie in [-pi, pi]");
    }
  }
  ProfileCurve curve;
  curve.levels = spin.levels();
  curve.kind = kind;
  curve.count = kind == SchemeKind::nmr ? 3 : schedule.count();
  curve.from_level = from_level;
  curve.to_level = palindromic_target(spin, from_level);
  curve.deltas.assign(grid.begin(), grid.end());
  curve.probabilities.assign(grid.size(), 0.0);
  return curve;
}

double point(const Spin& spin, SchemeKind kind, const PhaseSchedule& schedule, double delta,
             const ProfileCurve& curve, Envelope envelope) {
  const auto seq = build_sequence(kind, schedule, delta, envelope);
  const double p = transition_probability(spin, seq, curve.from_level, curve.to_level);
  if (p < -1e-12 || p > 1.0 + 1e-12) {
    throw NumericError("transition probability " + std::to_string(p) + " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

ProfileCurve profile_scan(const Spin& spin, SchemeKind kind, const PhaseSchedule& schedule,
                          std::span<const double> delta_grid, int from_level, Envelope envelope) {
  ProfileCurve curve = prepare(spin, kind, schedule, delta_grid, from_level);
  const auto n = static_cast<std::ptrdiff_t>(delta_grid.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      curve.probabilities[i] = point(spin, kind, schedule, delta_grid[i], curve, envelope);
    } catch (...) {
#pragma omp critical(npulse_profile_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return curve;
}

ProfileCurve profile_scan_serial(const Spin& spin, SchemeKind kind, const PhaseSchedule& schedule,
                                 std::span<const double> delta_grid, int from_level,
                                 Envelope envelope) {
  ProfileCurve curve = prepare(spin, kind, schedule, delta_grid, from_level);
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    curve.probabilities[i] = point(spin, kind, schedule, delta_grid[i], curve, envelope);
  }
  return curve;
}

}  // namespace npulse
