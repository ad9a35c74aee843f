#include <cmath>
#include <numbers>
#include <vector>

#include "npulse/error.hpp"
#include "npulse/schemes.hpp"
#include "schemes/power_series.hpp"

namespace npulse {

namespace {

constexpr double kSeriesThreshold = 1e-8;

double anchor_area(Anchor anchor) { return anchor == Anchor::top ? std::numbers::pi : 0.0; }

// 1 - P about pi is |U11|^2, P about 0 is |U21|^2; both evaluated directly so
// that small values keep their relative accuracy.
double anchor_deviation(std::span<const double> phases, Anchor anchor, double delta) {
  CayleyKlein total;
  const CayleyKlein pulse = constant_rotation(anchor_area(anchor) + delta, 0.0, 1.0);
  for (double phi : phases) total = compose(with_phase(pulse, phi), total);
  return anchor == Anchor::top ? std::norm(total.a) : std::norm(total.b);
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// k-th central difference at 0 divided by h^k k!.
double central_coefficient(std::span<const double> phases, Anchor anchor, int k, double h) {
  double sum = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binomial(k, i) * anchor_deviation(phases, anchor, (0.5 * k - i) * h);
  }
  return sum / (std::pow(h, k) * std::tgamma(k + 1.0));
}

}  // namespace

std::vector<double> flatness_series(std::span<const double> phases, Anchor anchor, int max_order) {
  if (max_order < 0) throw InvalidInput("max_order", "order must be non-negative");
  const auto u = detail::propagator_series(phases, anchor_area(anchor), max_order);
  return detail::abs2_series(anchor == Anchor::top ? u.m00 : u.m10);
}

int series_flat_order(std::span<const double> phases, Anchor anchor, int max_order) {
  const auto coeffs = flatness_series(phases, anchor, max_order);
  double scale = 1.0;
  for (int k = 1; k <= max_order; ++k) {
    scale *= 2.0;
    if (k % 2 == 0 && std::abs(coeffs[k]) * scale > kSeriesThreshold) return k;
  }
  return max_order + (max_order % 2 == 0 ? 2 : 1);
}

std::vector<double> finite_difference_coefficients(std::span<const double> phases, Anchor anchor,
                                                   int max_order, double step) {
  if (max_order < 0) throw InvalidInput("max_order", "order must be non-negative");
  if (!(step > 0.0)) throw InvalidInput("step", "finite-difference step must be positive");
  std::vector<double> out(max_order + 1);
  out[0] = anchor_deviation(phases, anchor, 0.0);
  for (int k = 1; k <= max_order; ++k) {
    const double d1 = central_coefficient(phases, anchor, k, step);
    const double d2 = central_coefficient(phases, anchor, k, 2.0 * step);
    const double d4 = central_coefficient(phases, anchor, k, 4.0 * step);
    const double r1 = (4.0 * d1 - d2) / 3.0;
    const double r2 = (4.0 * d2 - d4) / 3.0;
    out[k] = (16.0 * r1 - r2) / 15.0;
  }
  return out;
}

int verified_flat_order(std::span<const double> phases, Anchor anchor, int max_order,
                        double tolerance) {
  const auto coeffs = finite_difference_coefficients(phases, anchor, max_order);
  for (int k = 2; k <= max_order; k += 2) {
    if (std::abs(coeffs[k]) > tolerance) return k;
  }
  return max_order + (max_order % 2 == 0 ? 2 : 1);
}

}  // namespace npulse
