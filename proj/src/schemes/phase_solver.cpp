#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "npulse/error.hpp"
#include "npulse/schemes.hpp"
#include "schemes/power_series.hpp"

namespace npulse {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxPulses = 25;
constexpr int kStartsPerBatch = 8;

// Number of leading propagator coefficients to cancel at each anchor: U11 about
// A = pi (flat top) and U21 about A = 0 (flat bottom). Always even, since
// cancelling an odd order also cancels the next even one for palindromes.
struct Target {
  int top = 0;
  int bottom = 0;
};

// Palindrome of length 2n + 1 with first (and last) phase 0.
std::vector<double> palindrome(const Eigen::VectorXd& free) {
  const int n = static_cast<int>(free.size());
  std::vector<double> phases(2 * n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    phases[k] = free(k - 1);
    phases[2 * n - k] = free(k - 1);
  }
  return phases;
}

struct FlatnessResidual {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  int n_free;
  Target target;

  int inputs() const { return n_free; }
  int values() const { return std::max(n_free, 2 * (target.top + target.bottom)); }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    const auto phases = palindrome(x);
    fvec.setZero(values());
    int row = 0;
    auto push = [&](const detail::Series& s, int count) {
      double scale = 1.0;
      for (int k = 1; k <= count; ++k) {
        scale *= 2.0;
        fvec(row++) = scale * s[k].real();
        fvec(row++) = scale * s[k].imag();
      }
    };
    if (target.top > 0) {
      push(detail::propagator_series(phases, std::numbers::pi, target.top).m00, target.top);
    }
    if (target.bottom > 0) {
      push(detail::propagator_series(phases, 0.0, target.bottom).m10, target.bottom);
    }
    return 0;
  }
};

struct Candidate {
  double residual = std::numeric_limits<double>::infinity();
  std::vector<double> phases;
};

bool better(const Candidate& lhs, const Candidate& rhs) {
  return std::tie(lhs.residual, lhs.phases) < std::tie(rhs.residual, rhs.phases);
}

Candidate run_start(int n_free, Target target, const SolverSettings& settings, int start) {
  std::seed_seq seq{static_cast<std::uint32_t>(settings.seed & 0xffffffffu),
                    static_cast<std::uint32_t>(settings.seed >> 32),
                    static_cast<std::uint32_t>(start)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
  Eigen::VectorXd x(n_free);
  for (int i = 0; i < n_free; ++i) x(i) = uniform(rng);

  FlatnessResidual functor{n_free, target};
  Eigen::NumericalDiff<FlatnessResidual> numdiff(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<FlatnessResidual>> lm(numdiff);
  lm.parameters.maxfev = settings.max_evaluations;
  lm.parameters.xtol = 1e-15;
  lm.parameters.ftol = 1e-15;
  lm.parameters.gtol = 0.0;
  lm.minimize(x);

  Eigen::VectorXd fvec;
  functor(x, fvec);
  Candidate c;
  c.residual = fvec.norm();
  for (int i = 0; i < n_free; ++i) {
    double phi = std::fmod(x(i), kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    x(i) = phi;
  }
  c.phases = palindrome(x);
  return c;
}

std::vector<Target> targets_for(SchemeKind kind, int n_free) {
  std::vector<Target> out;
  switch (kind) {
    case SchemeKind::broadband:
      for (int k = 2 * n_free; k >= 2; k -= 2) out.push_back({k, 0});
      break;
    case SchemeKind::narrowband:
      for (int k = std::max(2, 2 * (n_free / 2)); k >= 2; k -= 2) out.push_back({0, k});
      break;
    case SchemeKind::passband: {
      // Observed feasibility: top / 2 + bottom <= n_free.
      for (int top = 0; top <= 2 * n_free; top += 2) {
        for (int bottom = 0; top / 2 + bottom <= n_free; bottom += 2) {
          if (top + bottom > 0) out.push_back({top, bottom});
        }
      }
      std::sort(out.begin(), out.end(), [](const Target& l, const Target& r) {
        const auto key = [](const Target& t) {
          return std::make_tuple(std::min(t.top, t.bottom), t.top + t.bottom, t.top);
        };
        return key(l) > key(r);
      });
      if (out.empty()) out.push_back({2, 2});
      break;
    }
    default:
      break;
  }
  return out;
}

PhaseSchedule finish(SchemeKind kind, std::vector<double> phases, double residual) {
  PhaseSchedule s;
  s.kind = kind;
  const int max_order = 2 * static_cast<int>(phases.size()) + 4;
  s.top_order = series_flat_order(phases, Anchor::top, max_order);
  s.bottom_order = series_flat_order(phases, Anchor::bottom, max_order);
  s.residual = residual;
  s.phases = std::move(phases);

  // Cross-check the exact series against finite differences where the latter
  // are reliable.
  for (Anchor anchor : {Anchor::top, Anchor::bottom}) {
    const int order = anchor == Anchor::top ? s.top_order : s.bottom_order;
    const int check = std::min(order - 2, kMaxFiniteDifferenceOrder);
    if (check >= 2 && verified_flat_order(s.phases, anchor, check) <= check) {
      throw NumericError("finite-difference verification of the " + to_string(kind) +
                         " schedule disagrees with its series flatness order " +
                         std::to_string(order));
    }
  }
  return s;
}

PhaseSchedule solve(SchemeKind kind, int count, const SolverSettings& settings, bool parallel) {
  if (count < 1 || count > kMaxPulses || count % 2 == 0) {
    throw InvalidInput("pulses", "pulse count must be odd and within 1..25, got " + std::to_string(count));
  }
  if (settings.starts < 1) throw InvalidInput("starts", "need at least one solver start");
  if (count == 1) return finish(kind, {0.0}, 0.0);

  const int n_free = (count - 1) / 2;
  double best_residual = std::numeric_limits<double>::infinity();
  for (const Target& target : targets_for(kind, n_free)) {
    std::vector<Candidate> results(settings.starts);
    for (int batch = 0; batch < settings.starts; batch += kStartsPerBatch) {
      const int end = std::min(settings.starts, batch + kStartsPerBatch);
#pragma omp parallel for schedule(dynamic) if (parallel)
      for (int s = batch; s < end; ++s) results[s] = run_start(n_free, target, settings, s);

      Candidate best;
      for (int s = 0; s < end; ++s) {
        if (better(results[s], best)) best = results[s];
      }
      best_residual = std::min(best_residual, best.residual);
      if (best.residual < settings.tolerance) {
        return finish(kind, std::move(best.phases), best.residual);
      }
    }
  }
  throw NoSolution("no " + to_string(kind) + " schedule with " + std::to_string(count) +
                       " pulses met the flatness tolerance",
                   best_residual);
}

}  // namespace

PhaseSchedule solve_bb_phases(int count, const SolverSettings& settings) {
  return solve(SchemeKind::broadband, count, settings, true);
}

PhaseSchedule solve_nb_phases(int count, const SolverSettings& settings) {
  return solve(SchemeKind::narrowband, count, settings, true);
}

PhaseSchedule solve_pb_phases(int count, const SolverSettings& settings) {
  return solve(SchemeKind::passband, count, settings, true);
}

PhaseSchedule solve_phases(SchemeKind kind, int count, const SolverSettings& settings) {
  switch (kind) {
    case SchemeKind::single:
      if (count != 1) throw InvalidInput("pulses", "a single-pulse scheme has exactly one pulse");
      return single_schedule();
    case SchemeKind::nmr:
      if (count != 3) throw InvalidInput("pulses", "the NMR scheme has exactly three pulses");
      return nmr_schedule();
    default:
      return solve(kind, count, settings, true);
  }
}

PhaseSchedule solve_phases_serial(SchemeKind kind, int count, const SolverSettings& settings) {
  if (kind == SchemeKind::single || kind == SchemeKind::nmr) return solve_phases(kind, count, settings);
  return solve(kind, count, settings, false);
}

}  // namespace npulse
