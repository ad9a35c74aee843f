#include <cmath>
#include <random>

#include "doctest.h"
#include "npulse/error.hpp"
#include "npulse/majorana.hpp"
#include "npulse/schemes.hpp"
#include "oracles.hpp"

using namespace npulse;
using oracle::kPi;

namespace {

Eigen::Vector3d vec(const SpherePoint& p) { return oracle::unit(p.theta, p.phi); }

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// State whose Majorana roots are `roots` (finite) plus `infinite` at infinity.
StateVector state_with_roots(const std::vector<Complex>& roots, int infinite) {
  const auto c = oracle::expand_roots(roots);
  const int twice_j = static_cast<int>(roots.size()) + infinite;
  CVector psi = CVector::Zero(twice_j + 1);
  for (std::size_t power = 0; power < c.size(); ++power) {
    const int level = twice_j + 1 - static_cast<int>(power);
    psi(level - 1) = c[power] / std::sqrt(binom(twice_j, static_cast<int>(power)));
  }
  return StateVector(psi / psi.norm());
}

// Image of a sphere point under the two-level matrix u, through the spinor whose
// root -beta/alpha sits at the point.
Eigen::Vector3d rotate_point(const oracle::Mat& u, const Eigen::Vector3d& p) {
  const double theta = std::atan2(std::hypot(p.x(), p.y()), p.z());
  const double phi = std::atan2(p.y(), p.x());
  oracle::Vec chi(2);
  chi << std::cos(theta / 2), -std::polar(std::sin(theta / 2), phi);
  const oracle::Vec out = u * chi;
  if (std::abs(out(0)) == 0.0) return {0, 0, -1};
  const Complex x = -out(1) / out(0);
  return oracle::unit(2 * std::atan(std::abs(x)), std::arg(x));
}

// Largest matched distance between two point multisets under the best
// assignment.
double multiset_distance(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b) {
  std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) cost[i][k] = oracle::great_circle(a[i], b[k]);
  const auto perm = oracle::brute_force_assignment(cost, nullptr);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, cost[i][perm[i]]);
  return worst;
}

std::vector<Eigen::Vector3d> points_of(const MajoranaConstellation& c) {
  std::vector<Eigen::Vector3d> out;
  for (const auto& p : c.points) out.push_back(vec(p));
  return out;
}

}  // namespace

TEST_CASE("polynomial coefficients carry binomial weights") {
  CVector e1 = CVector::Zero(3), e2 = CVector::Zero(3), f2 = CVector::Zero(5);
  e1(0) = 1.0;
  e2(1) = 1.0;
  f2(1) = 1.0;
  auto p = majorana_polynomial(StateVector(e1));
  CHECK(p.coefficients == std::vector<Complex>{0.0, 0.0, 1.0});
  p = majorana_polynomial(StateVector(e2));
  CHECK(std::abs(p.coefficients[1] - std::sqrt(2.0)) < 1e-15);
  CHECK(p.coefficients[0] == 0.0);
  CHECK(p.coefficients[2] == 0.0);
  p = majorana_polynomial(StateVector(f2));
  CHECK(std::abs(p.coefficients[3] - 2.0) < 1e-15);
  CHECK(p.nominal_degree() == 4);
  CHECK_THROWS_AS(majorana_polynomial(CVector::Zero(3)), InvalidInput);
}

TEST_CASE("root multisets for degenerate polynomials") {
  const auto r1 = polynomial_roots(MajoranaPolynomial{{0.0, 0.0, 1.0}});
  REQUIRE(r1.size() == 2);
  for (const auto& r : r1) CHECK((!r.infinite && r.value == 0.0));
  const auto r2 = polynomial_roots(MajoranaPolynomial{{0.0, std::sqrt(2.0), 0.0}});
  REQUIRE(r2.size() == 2);
  CHECK((!r2[0].infinite && r2[0].value == 0.0));
  CHECK(r2[1].infinite);
  CHECK_THROWS_AS(polynomial_roots(MajoranaPolynomial{{0.0, 0.0}}), InvalidInput);
}

TEST_CASE("roots reproduce the polynomial") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const int levels = 2 + trial % 8;
    const CVector psi = oracle::random_state(rng, levels);
    const auto poly = majorana_polynomial(psi);
    const auto roots = polynomial_roots(poly);
    REQUIRE(roots.size() == static_cast<std::size_t>(levels - 1));
    std::vector<Complex> finite;
    for (const auto& r : roots) {
      REQUIRE_FALSE(r.infinite);
      finite.push_back(r.value);
    }
    const auto rebuilt = oracle::expand_roots(finite);
    const Complex lead = poly.coefficients.back();
    for (std::size_t k = 0; k < rebuilt.size(); ++k) {
      CHECK(std::abs(rebuilt[k] - poly.coefficients[k] / lead) < 1e-8 * (1.0 + std::abs(poly.coefficients[k] / lead)));
    }
  }
}

TEST_CASE("sphere map conventions") {
  const auto c = roots_to_constellation({{Complex(1.0), false}, {Complex(0.0), true}, {Complex(0.0, -2.0), false}});
  CHECK(c.points[0].theta == doctest::Approx(kPi / 2));
  CHECK(c.points[0].phi == 0.0);
  CHECK(c.points[1].theta == kPi);
  CHECK(c.points[1].phi == 0.0);
  CHECK(c.points[2].phi == doctest::Approx(1.5 * kPi));
  for (int levels = 2; levels <= 9; ++levels) {
    const auto north = constellation(StateVector::basis(levels, 1));
    const auto south = constellation(StateVector::basis(levels, levels));
    REQUIRE(north.points.size() == static_cast<std::size_t>(levels - 1));
    for (const auto& p : north.points) CHECK((p.theta == 0.0 && p.phi == 0.0));
    for (const auto& p : south.points) CHECK((p.theta == kPi && p.phi == 0.0));
  }
  const auto pair = constellation(StateVector::basis(3, 2));
  CHECK(angular_distance(pair.points[0], pair.points[1]) == doctest::Approx(kPi));
}

TEST_CASE("spin one half point") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> th(0.01, kPi - 0.01), ph(0.0, 2 * kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = th(rng), phi = ph(rng);
    CVector psi(2);
    psi << std::cos(theta / 2), -std::polar(std::sin(theta / 2), phi);
    const auto c = constellation(StateVector(psi));
    CHECK(angular_distance(c.points[0], SpherePoint{theta, phi}) < 1e-12);
    // The Bloch vector <sigma> of the same state sits half a turn away in azimuth.
    const Complex coh = 2.0 * std::conj(psi(0)) * psi(1);
    const Eigen::Vector3d bloch(coh.real(), coh.imag(), std::norm(psi(0)) - std::norm(psi(1)));
    const Eigen::Vector3d point = vec(c.points[0]);
    CHECK((point - Eigen::Vector3d(-bloch.x(), -bloch.y(), bloch.z())).norm() < 1e-12);
  }
}

TEST_CASE("constellations rotate with the lifted propagator") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 500; ++trial) {
    const int levels = 2 + trial % 8;
    const CVector psi = oracle::random_state(rng, levels);
    auto [a, b] = oracle::random_unit_pair(rng);
    const UnitaryN d = wigner_d(make_spin(levels), CayleyKlein{a, b}, 0.0);
    const auto before = points_of(constellation(StateVector(psi)));
    const CVector moved_psi = d.matrix() * psi;
    const auto after = points_of(constellation(StateVector(moved_psi / moved_psi.norm())));
    std::vector<Eigen::Vector3d> expected;
    for (const auto& p : before) expected.push_back(rotate_point(oracle::su2(a, b), p));
    CHECK(multiset_distance(expected, after) < 1e-7);
  }
}

TEST_CASE("coincident points stay coincident") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const int levels = 3 + trial % 7;
    auto [a, b] = oracle::random_unit_pair(rng);
    const UnitaryN d = wigner_d(make_spin(levels), CayleyKlein{a, b}, 0.0);
    const CVector psi = d.matrix().col(0);
    const auto c = constellation(StateVector(psi / psi.norm()));
    const Eigen::Vector3d image = rotate_point(oracle::su2(a, b), {0, 0, 1});
    for (const auto& p : c.points) CHECK(oracle::great_circle(vec(p), image) < 1e-7);
  }
  // A triple root with a simple one beside it.
  const Complex r(0.3, -0.4), s(-2.0, 1.0);
  const auto c = constellation(state_with_roots({r, r, r, s}, 0));
  const Eigen::Vector3d pr = oracle::unit(2 * std::atan(std::abs(r)), std::arg(r));
  const Eigen::Vector3d ps = oracle::unit(2 * std::atan(std::abs(s)), std::arg(s));
  CHECK(multiset_distance(points_of(c), {pr, pr, pr, ps}) < 1e-7);
  // A double root at infinity and a triple one near the North pole.
  const Complex z(1e-3, 2e-3);
  const auto c2 = constellation(state_with_roots({z, z, z, Complex(0.5)}, 2));
  const Eigen::Vector3d pz = oracle::unit(2 * std::atan(std::abs(z)), std::arg(z));
  const Eigen::Vector3d ph = oracle::unit(2 * std::atan(0.5), 0.0);
  CHECK(multiset_distance(points_of(c2), {pz, pz, pz, ph, {0, 0, -1}, {0, 0, -1}}) < 1e-7);
}

TEST_CASE("rotated basis states split into two antipodal clusters") {
  // Level k has N - k points at the North pole and k - 1 at the South pole;
  // a rotation moves both clusters rigidly. Quarter turns put them on the
  // unit circle of the root plane, near-inversions grade the coefficients.
  // |a|^50 must stay a normal double, or the stored state is no longer the
  // rotated one to the precision of a 50-fold root.
  std::mt19937_64 rng(61);
  std::vector<std::pair<Complex, Complex>> rotations{
      {std::sqrt(0.5), std::sqrt(0.5)},
      {std::sqrt(0.5), Complex(0, std::sqrt(0.5))},
      {Complex(0.5, 0.5), Complex(-0.5, 0.5)},
      {Complex(1e-6, 2e-7), std::polar(std::sqrt(1.0 - 1e-12 - 4e-14), 1.1)},
      {std::polar(std::sqrt(1.0 - 1e-12), 0.4), Complex(0.0, 1e-6)},
  };
  for (int t = 0; t < 3; ++t) rotations.push_back(oracle::random_unit_pair(rng));
  for (int levels : {2, 3, 4, 5, 8, 13, 21, 34, 51}) {
    for (const auto& [a, b] : rotations) {
      const UnitaryN d = wigner_d(make_spin(levels), CayleyKlein{a, b}, 0.0);
      const Eigen::Vector3d north = rotate_point(oracle::su2(a, b), {0, 0, 1});
      const Eigen::Vector3d south = -north;
      for (int level = 1; level <= levels; level += std::max(1, levels / 6)) {
        const CVector psi = d.matrix().col(level - 1);
        const auto c = constellation(StateVector(psi / psi.norm()));
        int at_north = 0, at_south = 0;
        double worst = 0.0;
        for (const auto& p : c.points) {
          const double dn = oracle::great_circle(vec(p), north);
          const double ds = oracle::great_circle(vec(p), south);
          (dn < ds ? at_north : at_south) += 1;
          worst = std::max(worst, std::min(dn, ds));
        }
        INFO("levels " << levels << " level " << level << " a " << a << " b " << b);
        CHECK(at_north == levels - level);
        CHECK(at_south == level - 1);
        CHECK(worst < 1e-7);
      }
    }
  }
}

TEST_CASE("well separated points move little under small perturbations") {
  std::mt19937_64 rng(61);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int levels = 2 + trial % 8;
    const CVector psi = oracle::random_state(rng, levels);
    const auto base = points_of(constellation(StateVector(psi)));
    double min_sep = kPi;
    for (std::size_t i = 0; i < base.size(); ++i)
      for (std::size_t k = i + 1; k < base.size(); ++k) min_sep = std::min(min_sep, oracle::great_circle(base[i], base[k]));
    if (min_sep <= 0.1) continue;
    ++checked;
    CVector perturbed = psi + 1e-11 * oracle::random_state(rng, levels);
    perturbed /= perturbed.norm();
    CHECK(multiset_distance(base, points_of(constellation(StateVector(perturbed)))) < 1e-4);
  }
  CHECK(checked > 100);
}

TEST_CASE("match_points is an optimal assignment") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, 2 * kPi);
  for (int n : {1, 2, 3, 5, 7, 8, 9}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<SpherePoint> prev(n), next(n);
      for (auto& p : prev) p = {th(rng), ph(rng)};
      for (auto& p : next) p = {th(rng), ph(rng)};
      const auto assignment = match_points(prev, next);
      std::vector<std::vector<double>> cost(n, std::vector<double>(n));
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) cost[i][k] = oracle::great_circle(vec(prev[i]), vec(next[k]));
      double best = 0.0, got = 0.0;
      oracle::brute_force_assignment(cost, &best);
      for (int i = 0; i < n; ++i) got += cost[i][assignment[i]];
      CHECK(got == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("match_points for larger sets recovers a shuffled copy") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, 2 * kPi);
  const int n = 14;
  std::vector<SpherePoint> prev(n);
  for (auto& p : prev) p = {th(rng), ph(rng)};
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<SpherePoint> next(n);
  for (int i = 0; i < n; ++i) next[perm[i]] = {prev[i].theta + 1e-4, prev[i].phi};
  CHECK(match_points(prev, next) == perm);
}

TEST_CASE("ties keep the previous indices") {
  const std::vector<SpherePoint> same(4, SpherePoint{0.0, 0.0});
  CHECK(match_points(same, same) == std::vector<int>{0, 1, 2, 3});
  const std::vector<SpherePoint> many(11, SpherePoint{1.0, 2.0});
  std::vector<int> identity(11);
  std::iota(identity.begin(), identity.end(), 0);
  CHECK(match_points(many, many) == identity);
  CHECK_THROWS_AS(match_points(same, many), InvalidInput);
}

TEST_CASE("single pi pulse tracks") {
  const auto seq = build_sequence(SchemeKind::single, single_schedule(), 0.0);
  const auto two = track_trajectory(evolve_state(StateVector::basis(2, 1), seq, 50));
  REQUIRE(two.tracks.size() == 1);
  const auto& t = two.tracks[0];
  CHECK(t.front().theta == 0.0);
  CHECK(t.back().theta == doctest::Approx(kPi).epsilon(1e-12));
  for (std::size_t s = 1; s + 1 < t.size(); ++s) {
    CHECK(t[s].theta > t[s - 1].theta);
    CHECK(t[s].phi == doctest::Approx(t[1].phi).epsilon(1e-12));
  }
  CHECK(rigid_rotation_deviation(two) == 0.0);

  const auto three = track_trajectory(evolve_state(StateVector::basis(3, 1), seq, 50));
  REQUIRE(three.tracks.size() == 2);
  for (std::size_t s = 0; s < three.times.size(); ++s) {
    CHECK(angular_distance(three.tracks[0][s], three.tracks[1][s]) < 1e-7);
  }
  CHECK(three.tracks[0].back().theta == doctest::Approx(kPi).epsilon(1e-7));
}

TEST_CASE("tracks of composite sequences are rigid") {
  struct Case {
    int levels, initial;
    SchemeKind kind;
    PhaseSchedule schedule;
    double delta;
    Envelope env;
  };
  const std::vector<Case> cases{
      {3, 2, SchemeKind::broadband, solve_bb_phases(5), 0.2, Envelope::rectangular},
      {5, 2, SchemeKind::nmr, nmr_schedule(), 0.0, Envelope::rectangular},
      {4, 1, SchemeKind::passband, solve_pb_phases(7), -0.4, Envelope::gaussian},
      {9, 3, SchemeKind::broadband, solve_bb_phases(15), 0.1, Envelope::rectangular},
  };
  for (const auto& c : cases) {
    const auto seq = build_sequence(c.kind, c.schedule, c.delta, c.env);
    const auto traj = evolve_state(StateVector::basis(c.levels, c.initial), seq, 40);
    const auto tracks = track_trajectory(traj);
    CHECK(rigid_rotation_deviation(tracks) <= 1e-8);
  }
}

TEST_CASE("long evolutions stay normalised and rigid") {
  // 1400 samples at 2j = 20 end with one point near the North pole and a
  // 19-fold point near the South pole, coefficients spanning over 100 decades.
  const auto seq = build_sequence(SchemeKind::broadband, solve_bb_phases(7), 0.2);
  const auto traj = evolve_state(StateVector::basis(21, 2), seq, 200);
  for (const auto& state : traj.states) CHECK(std::abs(state.amplitudes().norm() - 1.0) < 1e-13);
  CHECK(rigid_rotation_deviation(track_trajectory(traj)) <= 1e-8);
}

TEST_CASE("detuned pulses keep tracks rigid") {
  CompositeSequence seq{{PulseSpec{2.0, 0.3, 1.5, Envelope::gaussian, 1.0}, PulseSpec{1.0, 2.0, -0.7}}, "x"};
  std::mt19937_64 rng(73);
  const CVector psi = oracle::random_state(rng, 6);
  const auto tracks = track_trajectory(evolve_state(StateVector(psi), seq, 60));
  CHECK(rigid_rotation_deviation(tracks) <= 1e-8);
}

TEST_CASE("track_trajectory input checks") {
  CHECK_THROWS_AS(track_trajectory(Trajectory{}), InvalidInput);
  Trajectory ragged;
  ragged.times = {0.0, 1.0};
  ragged.states = {StateVector::basis(3, 1)};
  CHECK_THROWS_AS(track_trajectory(ragged), InvalidInput);
  Trajectory mixed;
  mixed.times = {0.0, 1.0};
  mixed.states = {StateVector::basis(3, 1), StateVector::basis(4, 1)};
  CHECK_THROWS_AS(track_trajectory(mixed), InvalidInput);
}
