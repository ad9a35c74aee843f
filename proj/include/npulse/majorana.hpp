#pragma once

// Majorana stellar representation: an N-level state as 2j points on the unit
// sphere, given by the roots of its Majorana polynomial.
//
// Level n contributes sqrt(C(2j, N - n)) psi_n x^{N - n}, so level 1 sits at
// the North pole (all roots at 0) and level N at the South pole (all roots at
// infinity). A root x maps to theta = 2 atan|x|, phi = arg x.

#include <array>
#include <complex>
#include <vector>

#include "npulse/su2core.hpp"

namespace npulse {

struct MajoranaPolynomial {
  /// coefficients[i] multiplies x^i; size 2j + 1.
  std::vector<Complex> coefficients;

  int nominal_degree() const noexcept { return static_cast<int>(coefficients.size()) - 1; }
  Complex operator()(Complex x) const;
};

struct SpherePoint {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi); 0 at the poles

  std::array<double, 3> cartesian() const;
  static SpherePoint from_cartesian(const std::array<double, 3>& v);
};

/// Great-circle distance.
double angular_distance(const SpherePoint& lhs, const SpherePoint& rhs);

/// A finite root or the point at infinity.
struct ExtendedRoot {
  Complex value{0.0, 0.0};
  bool infinite = false;
};

struct MajoranaConstellation {
  std::vector<SpherePoint> points;  // 2j points, multiplicity repeated
};

struct PointTracks {
  std::vector<double> times;
  /// tracks[point][sample]
  std::vector<std::vector<SpherePoint>> tracks;
};

/// Throws InvalidInput for the zero vector.
MajoranaPolynomial majorana_polynomial(const StateVector& state);
MajoranaPolynomial majorana_polynomial(const CVector& amplitudes);

/// Exactly `nominal_degree()` roots: finite ones from balanced companion
/// matrices in the x and 1/x charts, plus roots at infinity for the missing
/// degree. Clusters of numerically coincident roots are replaced by one common
/// value once the derivatives below their multiplicity vanish within the
/// amplitude noise. Throws NumericError if a root cannot reach a scaled
/// residual below 1e-9.
std::vector<ExtendedRoot> polynomial_roots(const MajoranaPolynomial& poly);

MajoranaConstellation roots_to_constellation(const std::vector<ExtendedRoot>& roots);

MajoranaConstellation constellation(const StateVector& state);

/// Constellations of every trajectory sample (in parallel) followed by the
/// sequential minimum-displacement matching.
PointTracks track_trajectory(const Trajectory& trajectory);

/// Same result, constellations computed on the calling thread.
PointTracks track_trajectory_serial(const Trajectory& trajectory);

/// Assignment of `next` points to the current track order: result[track] is
/// an index into `next`. Exact over all permutations for up to 8 points,
/// Hungarian algorithm beyond; ties keep the previous index.
std::vector<int> match_points(const std::vector<SpherePoint>& previous,
                              const std::vector<SpherePoint>& next);

/// max over samples and point pairs of |d_ij(t) - d_ij(0)|.
double rigid_rotation_deviation(const PointTracks& tracks);

}  // namespace npulse
