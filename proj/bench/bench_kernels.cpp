// Serial reference vs OpenMP for each parallel kernel.

#include <benchmark/benchmark.h>

#include <numbers>

#include "npulse/majorana.hpp"
#include "npulse/schemes.hpp"

using namespace npulse;

namespace {

const PhaseSchedule& bb7() {
  static const PhaseSchedule s = solve_phases(SchemeKind::broadband, 7);
  return s;
}

template <bool Parallel>
void profile(benchmark::State& state) {
  const auto grid = uniform_grid(-std::numbers::pi, std::numbers::pi, static_cast<int>(state.range(0)));
  const Spin spin = make_spin(9);
  for (auto _ : state) {
    auto curve = Parallel ? profile_scan(spin, SchemeKind::broadband, bb7(), grid, 1, Envelope::gaussian)
                          : profile_scan_serial(spin, SchemeKind::broadband, bb7(), grid, 1, Envelope::gaussian);
    benchmark::DoNotOptimize(curve.probabilities.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void solver(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = Parallel ? solve_phases(SchemeKind::broadband, count) : solve_phases_serial(SchemeKind::broadband, count);
    benchmark::DoNotOptimize(s.phases.data());
  }
}

template <bool Parallel>
void constellations(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  const auto seq = build_sequence(SchemeKind::broadband, bb7(), 0.2);
  const auto traj = evolve_state(StateVector::basis(levels, 2), seq, 200);
  for (auto _ : state) {
    auto tracks = Parallel ? track_trajectory(traj) : track_trajectory_serial(traj);
    benchmark::DoNotOptimize(tracks.tracks.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(traj.states.size()));
}

}  // namespace

BENCHMARK(profile<false>)->Name("profile_scan/serial")->Arg(401)->Arg(4001)->Unit(benchmark::kMillisecond);
BENCHMARK(profile<true>)->Name("profile_scan/openmp")->Arg(401)->Arg(4001)->Unit(benchmark::kMillisecond);
BENCHMARK(solver<false>)->Name("solve_phases/serial")->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(solver<true>)->Name("solve_phases/openmp")->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(constellations<false>)->Name("track_trajectory/serial")->Arg(5)->Arg(21)->Unit(benchmark::kMillisecond);
BENCHMARK(constellations<true>)->Name("track_trajectory/openmp")->Arg(5)->Arg(21)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
