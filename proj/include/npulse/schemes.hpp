#pragma once

// Composite-pulse schemes: sequence constructors, the phase-flatness solver,
// transition probabilities, and robustness profile scans.
//
// Area errors are systematic and multiplicative: every pulse of nominal area
// A_0 is played with area A_0 (pi + delta) / pi.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "npulse/su2core.hpp"

namespace npulse {

enum class SchemeKind { single, nmr, broadband, narrowband, passband };

std::string to_string(SchemeKind kind);
SchemeKind scheme_from_string(const std::string& name);

/// Phases of a composite sequence of nominal pi pulses (the NMR scheme
/// carries its own areas). `top_order` is the order of the first non-vanishing
/// derivative of 1 - P at A = pi, `bottom_order` that of P at A = 0.
struct PhaseSchedule {
  SchemeKind kind = SchemeKind::single;
  std::vector<double> phases{0.0};
  int top_order = 2;
  int bottom_order = 2;
  double residual = 0.0;

  int count() const noexcept { return static_cast<int>(phases.size()); }
  /// The order the scheme is built for: top (BB, single, NMR), bottom (NB),
  /// the smaller of the two (PB).
  int flat_order() const noexcept;
};

struct SolverSettings {
  int starts = 48;
  std::uint64_t seed = 20240229;
  double tolerance = 1e-10;  // on the residual norm
  int max_evaluations = 6000;

  friend bool operator==(const SolverSettings&, const SolverSettings&) = default;
};

struct ProfileCurve {
  std::vector<double> deltas;
  std::vector<double> probabilities;
  int levels = 2;
  int count = 1;
  SchemeKind kind = SchemeKind::single;
  int from_level = 1;
  int to_level = 2;
};

PhaseSchedule single_schedule();
PhaseSchedule nmr_schedule();

/// pi/2 - pi - pi/2 with phases 0, pi/2, 0. Requires |area_error| < pi.
CompositeSequence nmr_sequence(double area_error, Envelope envelope = Envelope::rectangular);

PhaseSchedule solve_bb_phases(int count, const SolverSettings& settings = {});
PhaseSchedule solve_nb_phases(int count, const SolverSettings& settings = {});
PhaseSchedule solve_pb_phases(int count, const SolverSettings& settings = {});
/// Dispatches on kind; single and nmr return their fixed schedules.
PhaseSchedule solve_phases(SchemeKind kind, int count, const SolverSettings& settings = {});

/// Same multi-start search with every start run on the calling thread.
PhaseSchedule solve_phases_serial(SchemeKind kind, int count, const SolverSettings& settings = {});

CompositeSequence build_sequence(SchemeKind kind, const PhaseSchedule& schedule, double area_error,
                                 Envelope envelope = Envelope::rectangular);

double transition_probability(const Spin& spin, const CompositeSequence& sequence, int from_level,
                              int to_level);

/// N - m + 1.
int palindromic_target(const Spin& spin, int m);

/// `count` uniform points over [lo, hi] (a single point is `lo`).
std::vector<double> uniform_grid(double lo, double hi, int count);

/// Transfer from_level -> N - from_level + 1 at each grid deviation, grid
/// points evaluated in parallel.
ProfileCurve profile_scan(const Spin& spin, SchemeKind kind, const PhaseSchedule& schedule,
                          std::span<const double> delta_grid, int from_level = 1,
                          Envelope envelope = Envelope::rectangular);

/// Serial reference for profile_scan; results are identical.
ProfileCurve profile_scan_serial(const Spin& spin, SchemeKind kind, const PhaseSchedule& schedule,
                                 std::span<const double> delta_grid, int from_level = 1,
                                 Envelope envelope = Envelope::rectangular);

// ---------------------------------------------------------------------------
// Flatness diagnostics.

enum class Anchor { top, bottom };  // A = pi, A = 0

/// Two-level transfer probability of nominal-pi-pulse phases at pulse area A.
double two_level_probability(std::span<const double> phases, double area);

/// Taylor coefficients of the anchor deviation (1 - P about pi, P about 0) in
/// the pulse-area offset, from exact truncated power series. Index k holds the
/// coefficient of delta^k; entries 0..max_order.
std::vector<double> flatness_series(std::span<const double> phases, Anchor anchor, int max_order);

/// First even order whose series coefficient, scaled by 2^k, exceeds 1e-8.
int series_flat_order(std::span<const double> phases, Anchor anchor, int max_order);

/// Independent estimate of the same Taylor coefficients by central finite
/// differences (steps 1e-2, 2e-2 and 4e-2 combined by two Richardson levels).
/// Resolves the vanishing low-order coefficients and the first surviving one
/// to about 1e-6, up to order kMaxFiniteDifferenceOrder; beyond the first
/// surviving order the estimates lose accuracy quickly.
inline constexpr int kMaxFiniteDifferenceOrder = 10;
std::vector<double> finite_difference_coefficients(std::span<const double> phases, Anchor anchor,
                                                   int max_order, double step = 1e-2);

/// Smallest even order <= max_order whose finite-difference coefficient
/// exceeds `tolerance` in magnitude; max_order + 2 when all vanish.
int verified_flat_order(std::span<const double> phases, Anchor anchor,
                        int max_order = kMaxFiniteDifferenceOrder, double tolerance = 1e-6);

}  // namespace npulse
