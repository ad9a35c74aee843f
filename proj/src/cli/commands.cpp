#include "npulse/cli.hpp"
#include "npulse/error.hpp"
#include "npulse/majorana.hpp"
#include "npulse/phase_cache.hpp"
#include "npulse/svg.hpp"

namespace npulse {

namespace {

struct Prepared {
  Spin spin;
  PhaseSchedule schedule;
  CompositeSequence sequence;
};

Prepared prepare(const RunConfig& config, const std::filesystem::path& cache) {
  validate(config);
  Spin spin = make_spin(config.levels);
  PhaseSchedule schedule = cached_schedule(config.scheme, config.pulses(), cache);
  CompositeSequence sequence = build_sequence(config.scheme, schedule, config.delta, config.envelope);
  return {spin, std::move(schedule), std::move(sequence)};
}

Trajectory simulate(const RunConfig& config, const Prepared& p) {
  const auto initial = StateVector::basis(config.levels, config.initial_level);
  return evolve_state(p.spin, initial, p.sequence, config.samples_per_pulse);
}

}  // namespace

CsvDocument run_simulate(const RunConfig& config, const std::filesystem::path& cache) {
  const Prepared p = prepare(config, cache);
  const Trajectory traj = simulate(config, p);
  CsvDocument doc;
  doc.header.push_back("time");
  for (int n = 1; n <= config.levels; ++n) doc.header.push_back("pop_" + std::to_string(n));
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    std::vector<double> row{traj.times[s]};
    const auto pops = traj.states[s].populations();
    row.insert(row.end(), pops.begin(), pops.end());
    doc.add_row(std::move(row));
  }
  return doc;
}

CsvDocument run_profile(const RunConfig& config, const std::filesystem::path& cache) {
  validate(config);
  const Spin spin = make_spin(config.levels);
  const PhaseSchedule schedule = cached_schedule(config.scheme, config.pulses(), cache);
  const auto grid = uniform_grid(config.delta_grid.min, config.delta_grid.max, config.delta_grid.count);
  const ProfileCurve curve =
      profile_scan(spin, config.scheme, schedule, grid, config.initial_level, config.envelope);
  CsvDocument doc;
  doc.header = {"delta", "probability"};
  for (std::size_t i = 0; i < curve.deltas.size(); ++i) doc.add_row({curve.deltas[i], curve.probabilities[i]});
  return doc;
}

CsvDocument run_majorana(const RunConfig& config, const std::filesystem::path& cache) {
  const Prepared p = prepare(config, cache);
  const PointTracks tracks = track_trajectory(simulate(config, p));
  CsvDocument doc;
  doc.header = {"time", "point_index", "theta", "phi"};
  for (std::size_t s = 0; s < tracks.times.size(); ++s) {
    for (std::size_t k = 0; k < tracks.tracks.size(); ++k) {
      const SpherePoint& pt = tracks.tracks[k][s];
      doc.add_row({tracks.times[s], static_cast<double>(k + 1), pt.theta, pt.phi});
    }
  }
  if (!config.svg_path.empty()) write_file_atomic(config.svg_path, render_tracks_svg(tracks));
  return doc;
}

CsvDocument run_solve_phases(SchemeKind kind, int count, const std::filesystem::path& cache) {
  if (kind != SchemeKind::broadband && kind != SchemeKind::narrowband && kind != SchemeKind::passband) {
    throw InvalidInput("scheme", "solve-phases needs broadband, narrowband or passband");
  }
  const PhaseSchedule schedule = cached_schedule(kind, count, cache);
  CsvDocument doc;
  doc.header = {"k", "phase"};
  for (int k = 0; k < schedule.count(); ++k) doc.add_row({static_cast<double>(k + 1), schedule.phases[k]});
  return doc;
}

std::string emit(const CsvDocument& doc, const RunConfig& config) {
  if (config.output_path.empty()) return doc.to_string();
  doc.write(config.output_path);
  return {};
}

}  // namespace npulse
