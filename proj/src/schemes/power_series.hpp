#pragma once

// Truncated power series of the 2x2 propagator of a sequence of nominal pi
// pulses, expanded in the common area offset delta about an anchor area.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace npulse::detail {

using Complex = std::complex<double>;
using Series = std::vector<Complex>;

struct SeriesMatrix {
  Series m00, m01, m10, m11;
};

// Coefficients of cos((anchor + d) / 2) and sin((anchor + d) / 2) in d.
inline void half_angle_series(double anchor, int order, std::vector<double>& c,
                              std::vector<double>& s) {
  c.assign(order + 1, 0.0);
  s.assign(order + 1, 0.0);
  double scale = 1.0;  // (1/2)^k / k!
  for (int k = 0; k <= order; ++k) {
    const double shift = 0.5 * anchor + 0.5 * std::numbers::pi * k;
    c[k] = scale * std::cos(shift);
    s[k] = scale * std::sin(shift);
    scale *= 0.5 / (k + 1);
  }
}

// out = real * z, truncated.
inline void mul_real(const std::vector<double>& real, const Series& z, Series& out) {
  const std::size_t n = z.size();
  out.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (real[i] == 0.0) continue;
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] += real[i] * z[j];
  }
}

/// U(anchor + d) = P_M ... P_1 with P_k = [[c, i s e^{-i phi}], [i s e^{i phi}, c]].
inline SeriesMatrix propagator_series(std::span<const double> phases, double anchor, int order) {
  std::vector<double> c, s;
  half_angle_series(anchor, order, c, s);
  const std::size_t n = order + 1;
  SeriesMatrix u{Series(n, 0.0), Series(n, 0.0), Series(n, 0.0), Series(n, 0.0)};
  u.m00[0] = 1.0;
  u.m11[0] = 1.0;
  Series c0, c1, s0, s1;
  for (double phi : phases) {
    const Complex up = Complex(0.0, 1.0) * std::polar(1.0, -phi);
    const Complex down = Complex(0.0, 1.0) * std::polar(1.0, phi);
    // column 0
    mul_real(c, u.m00, c0);
    mul_real(s, u.m10, s0);
    mul_real(c, u.m10, c1);
    mul_real(s, u.m00, s1);
    for (std::size_t k = 0; k < n; ++k) {
      u.m00[k] = c0[k] + up * s0[k];
      u.m10[k] = c1[k] + down * s1[k];
    }
    // column 1
    mul_real(c, u.m01, c0);
    mul_real(s, u.m11, s0);
    mul_real(c, u.m11, c1);
    mul_real(s, u.m01, s1);
    for (std::size_t k = 0; k < n; ++k) {
      u.m01[k] = c0[k] + up * s0[k];
      u.m11[k] = c1[k] + down * s1[k];
    }
  }
  return u;
}

/// |z|^2 as a series: z * conj(z), real part.
inline std::vector<double> abs2_series(const Series& z) {
  const std::size_t n = z.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] += (z[i] * std::conj(z[j])).real();
  }
  return out;
}

}  // namespace npulse::detail
