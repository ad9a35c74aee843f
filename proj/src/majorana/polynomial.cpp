#include <cmath>
#include <numbers>

#include "npulse/error.hpp"
#include "npulse/majorana.hpp"

namespace npulse {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

Complex MajoranaPolynomial::operator()(Complex x) const {
  Complex acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::array<double, 3> SpherePoint::cartesian() const {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

SpherePoint SpherePoint::from_cartesian(const std::array<double, 3>& v) {
  const double rho = std::hypot(v[0], v[1]);
  SpherePoint p;
  p.theta = std::atan2(rho, v[2]);
  if (rho == 0.0) return p;
  p.phi = std::atan2(v[1], v[0]);
  if (p.phi < 0.0) p.phi += kTwoPi;
  if (p.phi >= kTwoPi) p.phi -= kTwoPi;
  return p;
}

double angular_distance(const SpherePoint& lhs, const SpherePoint& rhs) {
  const auto u = lhs.cartesian();
  const auto v = rhs.cartesian();
  const double cx = u[1] * v[2] - u[2] * v[1];
  const double cy = u[2] * v[0] - u[0] * v[2];
  const double cz = u[0] * v[1] - u[1] * v[0];
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

MajoranaPolynomial majorana_polynomial(const CVector& amplitudes) {
  const int n = static_cast<int>(amplitudes.size());
  if (n < 2) throw InvalidInput("state", "state needs at least two levels");
  if (amplitudes.cwiseAbs().maxCoeff() == 0.0) {
    throw InvalidInput("state", "the zero vector has no Majorana representation");
  }
  const int twice_j = n - 1;
  MajoranaPolynomial poly;
  poly.coefficients.assign(n, 0.0);
  for (int level = 1; level <= n; ++level) {
    const int power = n - level;
    poly.coefficients[power] = std::sqrt(binomial(twice_j, power)) * amplitudes(level - 1);
  }
  return poly;
}

MajoranaPolynomial majorana_polynomial(const StateVector& state) {
  return majorana_polynomial(state.amplitudes());
}

MajoranaConstellation roots_to_constellation(const std::vector<ExtendedRoot>& roots) {
  MajoranaConstellation c;
  c.points.reserve(roots.size());
  for (const auto& r : roots) {
    SpherePoint p;
    if (r.infinite) {
      p.theta = std::numbers::pi;
    } else {
      p.theta = 2.0 * std::atan(std::abs(r.value));
      if (p.theta != 0.0 && p.theta != std::numbers::pi) {
        p.phi = std::arg(r.value);
        if (p.phi < 0.0) p.phi += kTwoPi;
        if (p.phi >= kTwoPi) p.phi -= kTwoPi;
      }
    }
    c.points.push_back(p);
  }
  return c;
}

MajoranaConstellation constellation(const StateVector& state) {
  return roots_to_constellation(polynomial_roots(majorana_polynomial(state)));
}

}  // namespace npulse
