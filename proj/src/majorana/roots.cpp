#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <Eigen/Eigenvalues>

#include "npulse/error.hpp"
#include "npulse/majorana.hpp"

namespace npulse {

namespace {

using Coeffs = std::vector<Complex>;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kResidualLimit = 1e-9;
// Chords on the unit sphere never exceed 2, so the first pass is one group.
constexpr double kClusterChord = 2.5;
constexpr double kChordShrink = 0.5;
// Points this close to the unit circle are certified in either chart; the
// noise bound grows by at most kChartMargin^degree.
constexpr double kChartMargin = 1.001;
constexpr double kMinClusterChord = 1e-7;
// Absolute accuracy assumed for the amplitudes of a unit state.
constexpr double kCoefficientNoise = 1e-12;

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

Complex horner(const Coeffs& c, Complex x) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Running-error style bound on the rounding in horner(c, x).
double horner_bound(const Coeffs& c, double ax) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * ax + std::abs(*it);
  return acc;
}

Coeffs derivative(const Coeffs& c) {
  if (c.size() <= 1) return {Complex(0.0)};
  Coeffs d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
  return d;
}

Coeffs reversed(const Coeffs& c) { return Coeffs(c.rbegin(), c.rend()); }

/// Parlett-Reinsch balancing with powers of two: a diagonal similarity that
/// evens out row and column norms, so graded coefficients keep their accuracy.
void balance(CMatrix& m) {
  const int n = static_cast<int>(m.rows());
  // Scaled entries can underflow and make the sweep oscillate; the cap keeps
  // it finite and any partial balance is still a similarity.
  constexpr int kMaxSweeps = 64;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        row += std::abs(m(i, k));
        col += std::abs(m(k, i));
      }
      if (row == 0.0 || col == 0.0) continue;
      const double sum = row + col;
      double f = 1.0;
      while (col < row / 2.0) {
        col *= 4.0;
        row /= 4.0;
        f *= 2.0;
      }
      while (col >= row * 2.0) {
        col /= 4.0;
        row *= 4.0;
        f /= 2.0;
      }
      if ((row + col) < 0.95 * sum) {
        converged = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

/// Eigenvalues of the companion matrix, or nothing when the chart is unusable:
/// entries that overflow or an eigenproblem that does not converge.
std::optional<std::vector<Complex>> companion_roots(const Coeffs& c) {
  const int d = static_cast<int>(c.size()) - 1;
  CMatrix m = CMatrix::Zero(d, d);
  for (int i = 1; i < d; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) m(i, d - 1) = -c[i] / c[d];
  if (!m.allFinite()) return std::nullopt;
  if (d == 1) return std::vector<Complex>{m(0, 0)};
  balance(m);
  Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
  if (solver.info() != Eigen::Success || !solver.eigenvalues().allFinite()) return std::nullopt;
  std::vector<Complex> out(d);
  for (int i = 0; i < d; ++i) out[i] = solver.eigenvalues()(i);
  return out;
}

/// A root expressed in one chart: x directly, or y = 1/x.
struct ChartRoot {
  Complex value;
  bool inverted = false;

  Complex as_x() const { return inverted ? 1.0 / value : value; }
};

std::array<double, 3> on_sphere(const ChartRoot& r) {
  // Inverse stereographic projection; the inverted chart swaps the poles.
  const Complex z = r.value;
  const double n2 = std::norm(z);
  const double s = 1.0 / (1.0 + n2);
  std::array<double, 3> v{2.0 * z.real() * s, 2.0 * z.imag() * s, (1.0 - n2) * s};
  if (r.inverted) {
    v[1] = -v[1];
    v[2] = -v[2];
  }
  return v;
}

double chord(const std::array<double, 3>& u, const std::array<double, 3>& v) {
  return std::sqrt((u[0] - v[0]) * (u[0] - v[0]) + (u[1] - v[1]) * (u[1] - v[1]) +
                   (u[2] - v[2]) * (u[2] - v[2]));
}

/// Raw eigenvalue estimates of one root in each chart, when available.
struct Estimate {
  std::optional<Complex> direct;
  std::optional<Complex> inverse;

  const std::optional<Complex>& of(bool inverted) const { return inverted ? inverse : direct; }
};

struct Charts {
  Coeffs direct;
  Coeffs inverse;
  // Absolute noise on each coefficient, in the same order.
  std::vector<double> direct_noise;
  std::vector<double> inverse_noise;

  const std::vector<double>& noise_of(bool inverted) const { return inverted ? inverse_noise : direct_noise; }

  const Coeffs& of(bool inverted) const { return inverted ? inverse : direct; }
};

/// |p(z)| / max|c|, evaluated in the chart where |z| <= 1.
double scaled_residual(const Coeffs& c, Complex z) {
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  return std::abs(horner(c, z)) / scale;
}

Complex newton(const Coeffs& c, Complex z, int iterations) {
  const Coeffs dc = derivative(c);
  double best = std::abs(horner(c, z));
  // Below the rounding of the evaluation the step direction is noise.
  for (int it = 0; it < iterations && best > 4.0 * kEps * horner_bound(c, std::abs(z)); ++it) {
    const Complex slope = horner(dc, z);
    if (slope == 0.0) break;
    const Complex next = z - horner(c, z) / slope;
    const double value = std::abs(horner(c, next));
    if (!(value < best)) break;
    best = value;
    z = next;
  }
  return z;
}

/// Accepts `k` copies of a common root when every derivative below order k
/// vanishes at the refined centroid to within the propagated coefficient
/// noise plus the rounding of the evaluation.
bool certify_multiple(const Coeffs& c, const std::vector<double>& noise, Complex z, int k) {
  const double az = std::abs(z);
  Coeffs d = c;
  std::vector<double> n = noise;
  for (int order = 0; order < k; ++order) {
    double bound = 0.0;
    for (auto it = n.rbegin(); it != n.rend(); ++it) bound = bound * az + *it;
    bound += 8.0 * kEps * horner_bound(d, az);
    if (std::abs(horner(d, z)) > bound) return false;
    d = derivative(d);
    for (std::size_t i = 1; i < n.size(); ++i) n[i - 1] = static_cast<double>(i) * n[i];
    if (n.size() > 1) n.pop_back();
  }
  return true;
}

std::vector<std::vector<int>> link_clusters(const std::vector<ChartRoot>& roots, const std::vector<int>& members,
                                            double threshold) {
  const int n = static_cast<int>(members.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (chord(on_sphere(roots[members[a]]), on_sphere(roots[members[b]])) < threshold) {
        parent[find(a)] = find(b);
      }
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int a = 0; a < n; ++a) {
    const int r = find(a);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(members[a]);
  }
  return groups;
}

/// Mean of the group's own eigenvalues in one chart. A perturbed k-fold root
/// spreads into a ring whose mean stays accurate, but only when every member
/// comes from the same eigenproblem.
std::optional<Complex> chart_mean(const std::vector<Estimate>& estimates, const std::vector<int>& group,
                                  bool inverted) {
  Complex sum = 0.0;
  for (int idx : group) {
    const auto& e = estimates[idx].of(inverted);
    if (!e) return std::nullopt;
    sum += *e;
  }
  return sum / static_cast<double>(group.size());
}

/// Tries to replace a whole group by one common root of multiplicity k.
bool merge_group(const Charts& charts, const std::vector<Estimate>& estimates, std::vector<ChartRoot>& roots,
                 const std::vector<int>& group, double threshold) {
  const int k = static_cast<int>(group.size());
  int inside = 0;
  for (int idx : group) inside += std::abs(roots[idx].as_x()) <= 1.0 ? 1 : 0;
  const bool preferred = 2 * inside < k;
  // Certification needs the chart where the point lies in the unit disk,
  // since elsewhere the noise bound grows with |z|^degree.
  std::optional<ChartRoot> start;
  for (bool inverted : {preferred, !preferred}) {
    const auto mean = chart_mean(estimates, group, inverted);
    if (mean && std::isfinite(mean->real()) && std::isfinite(mean->imag()) && std::abs(*mean) <= kChartMargin) {
      start = ChartRoot{*mean, inverted};
      break;
    }
  }
  if (!start) return false;
  const Coeffs& c = charts.of(start->inverted);
  const auto& noise = charts.noise_of(start->inverted);
  // The mean is a root of p^(k-1) up to noise; Newton on that derivative
  // sharpens it when the evaluation is still above its rounding level.
  Coeffs high = c;
  for (int i = 0; i + 1 < k; ++i) high = derivative(high);
  const ChartRoot refined{newton(high, start->value, 50), start->inverted};
  for (const ChartRoot& candidate : {refined, *start}) {
    if (!std::isfinite(candidate.value.real()) || !std::isfinite(candidate.value.imag())) continue;
    if (std::abs(candidate.value) > kChartMargin) continue;
    if (chord(on_sphere(*start), on_sphere(candidate)) > threshold) continue;
    if (!certify_multiple(c, noise, candidate.value, k)) continue;
    for (int idx : group) roots[idx] = candidate;
    return true;
  }
  return false;
}

/// Top-down: a group that is not one multiple root is split by single linkage
/// at a shrinking chord until its parts certify or are simple.
void resolve(const Charts& charts, const std::vector<Estimate>& estimates, std::vector<ChartRoot>& roots,
             const std::vector<int>& members, double threshold) {
  for (const auto& group : link_clusters(roots, members, threshold)) {
    if (group.size() == 1) {
      ChartRoot& r = roots[group[0]];
      r.value = newton(charts.of(r.inverted), r.value, 50);
      continue;
    }
    if (merge_group(charts, estimates, roots, group, threshold)) continue;
    if (threshold > kMinClusterChord) {
      resolve(charts, estimates, roots, group, threshold * kChordShrink);
    } else {
      for (int idx : group) {
        ChartRoot& r = roots[idx];
        r.value = newton(charts.of(r.inverted), r.value, 50);
      }
    }
  }
}

}  // namespace

std::vector<ExtendedRoot> polynomial_roots(const MajoranaPolynomial& poly) {
  const Coeffs& c = poly.coefficients;
  if (c.empty()) throw InvalidInput("state", "empty polynomial");
  for (const auto& v : c) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericError("polynomial coefficients must be finite");
    }
  }
  int top = static_cast<int>(c.size()) - 1;
  while (top >= 0 && c[top] == 0.0) --top;
  if (top < 0) throw InvalidInput("state", "the zero polynomial has no roots");
  int low = 0;
  while (c[low] == 0.0) ++low;

  const int degree = static_cast<int>(c.size()) - 1;
  const int at_infinity = degree - top;
  const int at_zero = low;

  std::vector<ExtendedRoot> out;
  out.reserve(degree);
  for (int i = 0; i < at_zero; ++i) out.push_back({Complex(0.0), false});

  if (top > low) {
    Charts charts;
    charts.direct.assign(c.begin() + low, c.begin() + top + 1);
    charts.inverse = reversed(charts.direct);
    // Amplitudes carry absolute errors; coefficient i holds sqrt(C(2j, i))
    // times an amplitude.
    std::vector<double> weight(c.size());
    double norm2 = 0.0;
    for (int i = 0; i <= degree; ++i) {
      weight[i] = std::sqrt(binomial(degree, i));
      norm2 += std::norm(c[i]) / (weight[i] * weight[i]);
    }
    for (int i = low; i <= top; ++i) {
      charts.direct_noise.push_back(kCoefficientNoise * weight[i] * std::sqrt(norm2));
    }
    charts.inverse_noise.assign(charts.direct_noise.rbegin(), charts.direct_noise.rend());
    const int d = top - low;

    // Both charts see every root. Pair the two eigenvalue sets on the sphere
    // and take each root from the chart where it lies in the unit disk.
    const auto direct = companion_roots(charts.direct);
    const auto inverse = companion_roots(charts.inverse);
    std::vector<ChartRoot> roots;
    std::vector<Estimate> estimates(d);
    if (direct && inverse) {
      std::vector<SpherePoint> direct_points, inverse_points;
      for (Complex x : *direct) direct_points.push_back(SpherePoint::from_cartesian(on_sphere({x, false})));
      for (Complex y : *inverse) inverse_points.push_back(SpherePoint::from_cartesian(on_sphere({y, true})));
      const auto pairing = match_points(direct_points, inverse_points);
      for (int i = 0; i < d; ++i) {
        const Complex x = (*direct)[i];
        const Complex y = (*inverse)[pairing[i]];
        estimates[i] = {x, y};
        if (std::abs(x) <= 1.0) {
          roots.push_back({x, false});
        } else if (std::abs(y) < 1.0) {
          roots.push_back({y, true});
        } else {
          roots.push_back({1.0 / x, true});
        }
      }
    } else if (direct || inverse) {
      // Coefficients spanning more than the double range: one chart only.
      const bool inverted = !direct;
      const auto& values = inverted ? *inverse : *direct;
      for (int i = 0; i < d; ++i) {
        const Complex z = values[i];
        if (inverted) {
          estimates[i].inverse = z;
        } else {
          estimates[i].direct = z;
        }
        roots.push_back(std::abs(z) <= 1.0 ? ChartRoot{z, inverted} : ChartRoot{1.0 / z, !inverted});
      }
    } else {
      throw NumericError("Majorana polynomial coefficients span too wide a range");
    }

    std::vector<int> all(d);
    std::iota(all.begin(), all.end(), 0);
    resolve(charts, estimates, roots, all, kClusterChord);

    for (const auto& r : roots) {
      const double res = scaled_residual(charts.of(r.inverted), r.value);
      if (!(res <= kResidualLimit)) {
        throw NumericError("Majorana root residual " + std::to_string(res) + " exceeds tolerance");
      }
      if (r.inverted && r.value == 0.0) {
        out.push_back({Complex(0.0), true});
      } else {
        out.push_back({r.as_x(), false});
      }
    }
  }
  for (int i = 0; i < at_infinity; ++i) out.push_back({Complex(0.0), true});
  return out;
}

}  // namespace npulse
