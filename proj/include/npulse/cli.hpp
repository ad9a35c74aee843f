#pragma once

// Run configuration and the four subcommand kernels behind the npulse tool.

#include <filesystem>
#include <numbers>
#include <optional>
#include <string>

#include "npulse/csv.hpp"
#include "npulse/phase_cache.hpp"
#include "npulse/schemes.hpp"
#include "npulse/su2core.hpp"

namespace npulse {

struct GridSpec {
  double min = -std::numbers::pi;
  double max = std::numbers::pi;
  int count = 401;
};

/// "min:max:count"; the bounds accept plain numbers and multiples of pi such
/// as "-pi", "0.3pi" or "pi/30". Throws InvalidInput("grid").
GridSpec parse_grid(const std::string& text);

/// A number or a multiple of pi, as in parse_grid. Throws InvalidInput(field).
double parse_angle(const std::string& text, const std::string& field);

struct RunConfig {
  int levels = 3;
  SchemeKind scheme = SchemeKind::single;
  /// Unset means the scheme default: 1 for single, 3 for nmr, 5 otherwise.
  std::optional<int> pulse_count;
  double delta = 0.0;
  Envelope envelope = Envelope::rectangular;
  int initial_level = 1;
  int samples_per_pulse = kDefaultSubsteps;
  GridSpec delta_grid;
  std::string output_path;  // empty: standard output
  std::string svg_path;     // majorana only; empty: none

  int pulses() const;
};

/// Throws InvalidInput naming the first offending field.
void validate(const RunConfig& config);

/// JSON text with every field, pulse count resolved.
std::string config_to_json(const RunConfig& config);

/// Overlays the fields present in `text` onto `base`. Unknown keys and
/// ill-typed values throw InvalidInput naming the key.
RunConfig merge_config_json(const RunConfig& base, const std::string& text);

/// Reads and merges a config file; a missing or unreadable file is IoError.
RunConfig load_config_file(const RunConfig& base, const std::filesystem::path& path);

/// time, pop_1..pop_N.
CsvDocument run_simulate(const RunConfig& config,
                         const std::filesystem::path& cache = default_phase_cache_path());

/// delta, probability (transfer initial_level -> N - initial_level + 1).
CsvDocument run_profile(const RunConfig& config,
                        const std::filesystem::path& cache = default_phase_cache_path());

/// time, point_index, theta, phi. Writes the SVG when config.svg_path is set.
CsvDocument run_majorana(const RunConfig& config,
                         const std::filesystem::path& cache = default_phase_cache_path());

/// k, phase (k from 1); reads and updates the phase cache.
CsvDocument run_solve_phases(SchemeKind kind, int count,
                             const std::filesystem::path& cache = default_phase_cache_path());

/// Writes `doc` to config.output_path, or returns its text when the path is
/// empty.
std::string emit(const CsvDocument& doc, const RunConfig& config);

}  // namespace npulse
