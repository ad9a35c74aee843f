#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "npulse/error.hpp"
#include "npulse/su2core.hpp"

namespace npulse {

namespace {

void check_unit(const CayleyKlein& ck) {
  if (!std::isfinite(ck.a.real()) || !std::isfinite(ck.a.imag()) ||
      !std::isfinite(ck.b.real()) || !std::isfinite(ck.b.imag())) {
    throw NumericError("Cayley-Klein parameters must be finite");
  }
  if (ck.norm_error() > 1e-12) {
    throw InvalidInput("cayley_klein", "|a|^2 + |b|^2 differs from 1 by " +
                                           std::to_string(ck.norm_error()));
  }
}

// The lift is evaluated in extended precision and rounded once at the end;
// at 2j = 50 the double-precision result lost about three digits.
using Real = long double;
using XComplex = std::complex<Real>;
using XMatrix = Eigen::Matrix<XComplex, Eigen::Dynamic, Eigen::Dynamic>;

struct XPair {
  XComplex a;
  XComplex b;
};

std::vector<XComplex> powers(XComplex z, int count) {
  std::vector<XComplex> out(count + 1);
  out[0] = 1.0L;
  for (int k = 1; k <= count; ++k) out[k] = out[k - 1] * z;
  return out;
}

// Direct mu-sum. Rounding grows like (|a| + |b|)^{2j} eps through cancellation
// between terms.
XMatrix mu_sum(int twice_j, const XPair& p) {
  // Index i = j + m (row), k = j + m' (column), both in 0..2j:
  //   p = 2j - i - mu, q = k - mu, r = mu, s = i - k + mu.
  const auto a_pow = powers(p.a, twice_j);
  const auto ac_pow = powers(std::conj(p.a), twice_j);
  const auto b_pow = powers(p.b, twice_j);
  const auto mbc_pow = powers(-std::conj(p.b), twice_j);

  std::vector<Real> log_fact(twice_j + 1);
  for (int n = 0; n <= twice_j; ++n) log_fact[n] = std::lgamma(static_cast<Real>(n) + 1.0L);

  XMatrix d = XMatrix::Zero(twice_j + 1, twice_j + 1);
  for (int i = 0; i <= twice_j; ++i) {
    for (int k = 0; k <= twice_j; ++k) {
      const Real log_norm =
          0.5L * (log_fact[twice_j - i] + log_fact[i] + log_fact[twice_j - k] + log_fact[k]);
      const int mu_lo = std::max(0, k - i);
      const int mu_hi = std::min(twice_j - i, k);
      XComplex sum = 0.0L;
      for (int mu = mu_lo; mu <= mu_hi; ++mu) {
        const int pp = twice_j - i - mu;
        const int qq = k - mu;
        const int rr = mu;
        const int ss = i - k + mu;
        const Real coeff = std::exp(log_norm - log_fact[pp] - log_fact[qq] - log_fact[rr] -
                                    log_fact[ss]);
        sum += coeff * a_pow[pp] * ac_pow[qq] * b_pow[rr] * mbc_pow[ss];
      }
      d(i, k) = sum;
    }
  }
  return d;
}

// Principal square root in SU(2): (U + I) / sqrt(2 (1 + Re a)). Requires U != -I.
XPair principal_sqrt(const XPair& u) {
  const Real re = u.a.real();
  const Real one_plus = re >= 0.0L ? 1.0L + re : (std::norm(u.b) + u.a.imag() * u.a.imag()) / (1.0L - re);
  const Real scale = 1.0L / std::sqrt(2.0L * one_plus);
  XPair v{XComplex(one_plus, u.a.imag()) * scale, u.b * scale};
  const Real n = std::sqrt(std::norm(v.a) + std::norm(v.b));
  v.a /= n;
  v.b /= n;
  return v;
}

// Largest growth factor (|a| + |b|)^{2j} accepted for the direct sum.
constexpr double kMaxLog2Growth = 8.0;

}  // namespace

UnitaryN su2_propagator(const CayleyKlein& ck, double phase) {
  check_unit(ck);
  if (!std::isfinite(phase)) throw NumericError("phase must be finite");
  const CayleyKlein p = with_phase(ck, phase);
  CMatrix u(2, 2);
  u << p.a, p.b, -std::conj(p.b), std::conj(p.a);
  return UnitaryN(std::move(u));
}

UnitaryN wigner_d(const Spin& spin, const CayleyKlein& ck, double phase) {
  check_unit(ck);
  if (!std::isfinite(phase)) throw NumericError("phase must be finite");
  const int twice_j = spin.twice_j();
  if (twice_j > kMaxTwiceJ) {
    throw RangeError("levels", "spin j = " + std::to_string(spin.j()) + " exceeds the supported j <= 25");
  }
  CayleyKlein p = with_phase(ck, phase);
  const int n_levels = spin.levels();
  if (p.b == 0.0 && p.a == -1.0) {
    const double sign = twice_j % 2 == 0 ? 1.0 : -1.0;
    return UnitaryN(CMatrix::Identity(n_levels, n_levels) * sign);
  }
  // D(U) = D(U^{1/2^h})^{2^h}, with h chosen so the sum stays well conditioned.
  XPair x{XComplex(p.a.real(), p.a.imag()), XComplex(p.b.real(), p.b.imag())};
  const Real n = std::sqrt(std::norm(x.a) + std::norm(x.b));
  x.a /= n;
  x.b /= n;
  int halvings = 0;
  while (twice_j * std::log2(std::abs(x.a) + std::abs(x.b)) > kMaxLog2Growth) {
    x = principal_sqrt(x);
    ++halvings;
  }
  XMatrix dx = mu_sum(twice_j, x);
  for (int h = 0; h < halvings; ++h) dx = (dx * dx).eval();
  CMatrix d(n_levels, n_levels);
  for (int i = 0; i < n_levels; ++i) {
    for (int k = 0; k < n_levels; ++k) {
      d(i, k) = Complex(static_cast<double>(dx(i, k).real()), static_cast<double>(dx(i, k).imag()));
    }
  }
  return UnitaryN(std::move(d));
}

}  // namespace npulse
