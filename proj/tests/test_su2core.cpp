#include <cmath>
#include <random>

#include "doctest.h"
#include "npulse/error.hpp"
#include "npulse/su2core.hpp"
#include "oracles.hpp"

using namespace npulse;
using oracle::kPi;

namespace {

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("make_spin rejects fewer than two levels") {
  CHECK_THROWS_AS(make_spin(1), InvalidInput);
  CHECK(make_spin(2).twice_j() == 1);
  CHECK(make_spin(9).j() == doctest::Approx(4.0));
}

TEST_CASE("constant rotation matches the exponential of the two-level Hamiltonian") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double rabi = std::abs(u(rng)) + 0.1, det = u(rng), phase = u(rng), t = std::abs(u(rng));
    const auto ck = constant_rotation(rabi, det, t);
    const CMatrix lib = su2_propagator(ck, phase).matrix();
    const CMatrix ref = oracle::expm_i(oracle::two_level_h(rabi, det, phase), t);
    CHECK(max_abs_diff(lib, ref) < 1e-12);
  }
}

TEST_CASE("cayley_klein of a resonant pi pulse swaps the levels") {
  const auto ck = cayley_klein(PulseSpec{kPi, 0.0, 0.0, Envelope::rectangular, 1.0});
  CHECK(std::abs(ck.a) < 1e-15);
  CHECK(std::abs(ck.b - Complex(0.0, 1.0)) < 1e-15);
}

TEST_CASE("wigner_d agrees with the tensor-product construction") {
  std::mt19937_64 rng(7);
  for (int twice_j = 1; twice_j <= 6; ++twice_j) {
    const Spin spin = make_spin(twice_j + 1);
    for (int trial = 0; trial < 10; ++trial) {
      auto [a, b] = oracle::random_unit_pair(rng);
      const CMatrix lib = wigner_d(spin, CayleyKlein{a, b}, 0.0).matrix();
      CHECK(max_abs_diff(lib, oracle::tensor_lift(oracle::su2(a, b), twice_j)) < 1e-12);
    }
  }
}

TEST_CASE("wigner_d of spin one half is the two-level propagator") {
  std::mt19937_64 rng(3);
  auto [a, b] = oracle::random_unit_pair(rng);
  const double phase = 0.7;
  const CMatrix lib = wigner_d(make_spin(2), CayleyKlein{a, b}, phase).matrix();
  CHECK(max_abs_diff(lib, oracle::su2(a, b * std::polar(1.0, -phase))) < 1e-15);
}

TEST_CASE("wigner_d j = 1 entries and column orthogonality") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto [a, b] = oracle::random_unit_pair(rng);
    const CMatrix d = wigner_d(make_spin(3), CayleyKlein{a, b}, 0.0).matrix();
    CHECK(max_abs_diff(d, oracle::d1_matrix(a, b)) < 1e-12);
    CHECK(std::abs(d.col(0).dot(d.col(2))) < 1e-12);
  }
}

TEST_CASE("wigner_d is a unitary homomorphism up to 2j = 50") {
  std::mt19937_64 rng(17);
  for (int levels : {2, 5, 9, 20, 35, 51}) {
    const Spin spin = make_spin(levels);
    auto [a1, b1] = oracle::random_unit_pair(rng);
    auto [a2, b2] = oracle::random_unit_pair(rng);
    const CayleyKlein u1{a1, b1}, u2{a2, b2};
    const UnitaryN d1 = wigner_d(spin, u1, 0.0);
    const UnitaryN d2 = wigner_d(spin, u2, 0.0);
    const UnitaryN d12 = wigner_d(spin, compose(u1, u2), 0.0);
    CHECK(d1.unitarity_error() < 1e-10);
    CHECK(max_abs_diff(d12.matrix(), d1.matrix() * d2.matrix()) < 1e-10);
    // Corner entry is b^{2j}.
    CHECK(std::abs(d1(0, levels - 1) - std::pow(b1, levels - 1)) < 1e-12);
  }
}

TEST_CASE("wigner_d input checks") {
  CHECK_THROWS_AS(wigner_d(make_spin(52), CayleyKlein{}, 0.0), RangeError);
  CHECK_THROWS_AS(wigner_d(make_spin(3), CayleyKlein{Complex(1.0), Complex(0.1)}, 0.0), InvalidInput);
  CHECK_THROWS_AS(wigner_d(make_spin(3), CayleyKlein{Complex(NAN), Complex(0.0)}, 0.0), NumericError);
}

TEST_CASE("ladder Hamiltonian exponential equals the lifted pulse") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int levels = 2; levels <= 9; ++levels) {
    const Spin spin = make_spin(levels);
    for (int trial = 0; trial < 5; ++trial) {
      PulseSpec p{std::abs(u(rng)) * kPi, u(rng), u(rng), Envelope::rectangular, 0.5 + std::abs(u(rng))};
      const CMatrix lifted = wigner_d(spin, cayley_klein(p), p.phase).matrix();
      const CMatrix direct = expm_hermitian(pulse_hamiltonian(spin, p), p.duration).matrix();
      const CMatrix ref = oracle::expm_i(oracle::ladder_h(levels, p.area / p.duration, p.detuning, p.phase),
                                         p.duration);
      CHECK(max_abs_diff(lifted, ref) < 1e-10);
      CHECK(max_abs_diff(direct, ref) < 1e-10);
    }
  }
}

TEST_CASE("cook_shore_hamiltonian layout") {
  const HermitianN h = cook_shore_hamiltonian(make_spin(4), Complex(2.0, 0.0), 0.5, -1.0);
  CHECK(std::abs(h.matrix()(0, 1) - std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(h.matrix()(1, 2) - 2.0) < 1e-15);
  CHECK(std::abs(h.matrix()(2, 1) - 2.0) < 1e-15);
  CHECK(std::abs(h.matrix()(3, 3) - 1.0) < 1e-15);
  CHECK(std::abs(h.matrix()(0, 2)) == 0.0);
}

TEST_CASE("HermitianN and StateVector validation") {
  CMatrix m(2, 2);
  m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0;
  CHECK_THROWS_AS(HermitianN{m}, InvalidInput);
  CVector v(3);
  v << 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(StateVector{v}, InvalidInput);
  try {
    (void)StateVector::basis(3, 4);
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    CHECK(e.field() == "initial_level");
  }
}

TEST_CASE("gaussian envelope integrates to the requested area") {
  PulseSpec p{2.3, 0.0, 0.0, Envelope::gaussian, 0.8};
  const double quad = oracle::simpson([&](double t) { return pulse_envelope(p, t); }, 0.0, p.duration, 4000);
  CHECK(quad == doctest::Approx(p.area).epsilon(1e-12));
  CHECK(envelope_area(p, 0.0, p.duration) == doctest::Approx(p.area).epsilon(1e-14));
  const double half = oracle::simpson([&](double t) { return pulse_envelope(p, t); }, 0.0, 0.3, 4000);
  CHECK(envelope_area(p, 0.0, 0.3) == doctest::Approx(half).epsilon(1e-11));
  CHECK(pulse_envelope(p, 0.4) > pulse_envelope(p, 0.1));
  CHECK_THROWS_AS(pulse_envelope(p, 0.81), RangeError);
  CHECK_THROWS_AS(pulse_envelope(p, -0.01), RangeError);
}

TEST_CASE("resonant gaussian and rectangular pulses of equal area coincide") {
  for (int levels : {2, 3, 5, 9}) {
    const Spin spin = make_spin(levels);
    PulseSpec rect{kPi, 0.4, 0.0, Envelope::rectangular, 1.0};
    PulseSpec gauss = rect;
    gauss.envelope = Envelope::gaussian;
    CompositeSequence s1{{rect}, "r"}, s2{{gauss}, "g"};
    CHECK(max_abs_diff(sequence_propagator(spin, s1).matrix(), sequence_propagator(spin, s2).matrix()) < 1e-9);
  }
}

TEST_CASE("detuned gaussian pulse agrees with direct time integration") {
  PulseSpec p{kPi, 0.3, 1.7, Envelope::gaussian, 1.0};
  const CMatrix u = su2_propagator(cayley_klein(p, 400), p.phase).matrix();
  oracle::Vec psi0(2);
  psi0 << 1.0, 0.0;
  const auto h = [&](double t) { return oracle::two_level_h(pulse_envelope(p, std::min(t, p.duration)), p.detuning, p.phase); };
  const oracle::Vec psi = oracle::rk4(h, psi0, 0.0, p.duration, 20000);
  CHECK((u.col(0) - psi).norm() < 1e-5);
}

TEST_CASE("evolve_state samples and endpoint") {
  const Spin spin = make_spin(4);
  CompositeSequence seq{{PulseSpec{kPi / 2, 0.0, 0.2, Envelope::rectangular, 1.0},
                         PulseSpec{kPi, 1.1, 0.0, Envelope::gaussian, 2.0}},
                        "two"};
  const StateVector psi0 = StateVector::basis(4, 2);
  const Trajectory traj = evolve_state(spin, psi0, seq, 10);
  REQUIRE(traj.times.size() == 21);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times.back() == doctest::Approx(3.0));
  for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
  CHECK((traj.states.front().amplitudes() - psi0.amplitudes()).norm() == 0.0);
  const CVector expected = sequence_propagator(spin, seq, 10).matrix() * psi0.amplitudes();
  CHECK((traj.states.back().amplitudes() - expected).norm() < 1e-12);
  for (const auto& s : traj.states) CHECK(std::abs(s.amplitudes().norm() - 1.0) < 1e-12);
  CHECK_THROWS_AS(evolve_state(spin, psi0, seq, 1), InvalidInput);
  CHECK_THROWS_AS(evolve_state(make_spin(3), psi0, seq, 10), InvalidInput);
}

TEST_CASE("pulse validation") {
  CHECK_THROWS_AS(validate(PulseSpec{-1.0}), InvalidInput);
  CHECK_THROWS_AS(validate(PulseSpec{1.0, 0.0, 0.0, Envelope::rectangular, 0.0}), InvalidInput);
  CHECK_THROWS_AS(validate(PulseSpec{NAN}), NumericError);
  CHECK_THROWS_AS(validate(CompositeSequence{}), InvalidInput);
  CHECK_THROWS_AS(envelope_from_string("square"), InvalidInput);
  CHECK(envelope_from_string("gaussian") == Envelope::gaussian);
}

TEST_CASE("unitarity and homomorphism over random inputs of every size") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> size(2, kMaxTwiceJ + 1);
  double worst_unitarity = 0.0, worst_product = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Spin spin = make_spin(size(rng));
    auto [a1, b1] = oracle::random_unit_pair(rng);
    auto [a2, b2] = oracle::random_unit_pair(rng);
    const UnitaryN d1 = wigner_d(spin, {a1, b1}, 0.3);
    worst_unitarity = std::max(worst_unitarity, d1.unitarity_error());
    if (trial % 10 == 0) {
      const UnitaryN d2 = wigner_d(spin, {a2, b2}, 0.0);
      const UnitaryN d12 = wigner_d(spin, compose(with_phase({a1, b1}, 0.3), {a2, b2}), 0.0);
      worst_product = std::max(worst_product, max_abs_diff(d12.matrix(), d1.matrix() * d2.matrix()));
    }
    const UnitaryN u2 = su2_propagator({a1, b1}, 0.3);
    worst_unitarity = std::max(worst_unitarity, u2.unitarity_error());
  }
  CHECK(worst_unitarity < 1e-10);
  CHECK(worst_product < 1e-9);
}

TEST_CASE("wigner_d near the identity and near minus the identity") {
  for (int levels : {2, 9, 51}) {
    const Spin spin = make_spin(levels);
    CHECK(wigner_d(spin, CayleyKlein{}, 0.0).unitarity_error() < 1e-13);
    const UnitaryN minus = wigner_d(spin, CayleyKlein{Complex(-1.0), Complex(0.0)}, 0.0);
    const double sign = (levels - 1) % 2 == 0 ? 1.0 : -1.0;
    CHECK(max_abs_diff(minus.matrix(), sign * CMatrix::Identity(levels, levels)) == 0.0);
    const double eps = 1e-9;
    const CayleyKlein near{Complex(-std::sqrt(1.0 - eps * eps), 0.0), Complex(0.0, eps)};
    const UnitaryN d = wigner_d(spin, near, 0.0);
    CHECK(d.unitarity_error() < 1e-10);
    CHECK(max_abs_diff(d.matrix(), sign * CMatrix::Identity(levels, levels)) < 1e-7);
  }
}
