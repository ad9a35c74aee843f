// npulse: composite-pulse simulations of N-level systems.
//
// Exit status: 0 success, 2 usage (bad flag or config field), 3 numeric
// failure, 4 I/O failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "npulse/cli.hpp"
#include "npulse/error.hpp"
#include "npulse/phase_cache.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kNumeric = 3;
constexpr int kIo = 4;

struct Flags {
  std::optional<int> levels;
  std::optional<std::string> scheme;
  std::optional<int> pulses;
  std::optional<std::string> delta;
  std::optional<std::string> envelope;
  std::optional<int> initial_level;
  std::optional<int> samples;
  std::optional<std::string> grid;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  std::string config;
  bool show_config = false;
};

npulse::RunConfig resolve(const Flags& f) {
  npulse::RunConfig c;
  if (!f.config.empty()) c = npulse::load_config_file(c, f.config);
  if (f.levels) c.levels = *f.levels;
  if (f.scheme) c.scheme = npulse::scheme_from_string(*f.scheme);
  if (f.pulses) c.pulse_count = *f.pulses;
  if (f.delta) c.delta = npulse::parse_angle(*f.delta, "delta");
  if (f.envelope) c.envelope = npulse::envelope_from_string(*f.envelope);
  if (f.initial_level) c.initial_level = *f.initial_level;
  if (f.samples) c.samples_per_pulse = *f.samples;
  if (f.grid) c.delta_grid = npulse::parse_grid(*f.grid);
  if (f.out) c.output_path = *f.out;
  if (f.svg) c.svg_path = *f.svg;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite-pulse population transfer in N-level (spin-j) systems."};
  app.footer(std::string("Environment:\n  ") + npulse::kPhaseCacheEnv +
             "  path of the solved phase-table cache (default ./npulse_phases.json)\n\n"
             "Angles (--delta, --grid bounds) accept numbers or multiples of pi: -pi, 0.3pi, pi/30.\n"
             "Exit status: 0 ok, 2 usage, 3 numeric failure, 4 I/O failure.");
  app.fallthrough();
  app.require_subcommand(0, 1);

  Flags f;
  auto opt = [&app](const std::string& name, auto& target, const std::string& help) {
    return app.add_option(name, target, help);
  };
  opt("--levels", f.levels, "number of levels N = 2j + 1 (default 3)");
  opt("--scheme", f.scheme, "single | nmr | broadband | narrowband | passband (default single)");
  opt("--pulses", f.pulses, "pulse count M, odd (default by scheme: 1, 3 or 5)");
  opt("--delta", f.delta, "pulse-area error delta in [-pi, pi] (default 0)");
  opt("--envelope", f.envelope, "rectangular | gaussian (default rectangular)");
  opt("--initial-level", f.initial_level, "initially populated level (default 1)");
  opt("--samples", f.samples, "time samples per pulse (default 200)");
  opt("--grid", f.grid, "profile grid min:max:count (default -pi:pi:401)");
  opt("--out", f.out, "output CSV path (default standard output)");
  opt("--svg", f.svg, "majorana: also write the track picture here");
  app.add_option("--config", f.config, "JSON run configuration; flags override its values");
  app.add_flag("--show-config", f.show_config, "print the resolved configuration and exit");

  auto* simulate = app.add_subcommand("simulate", "level populations over time");
  auto* profile = app.add_subcommand("profile", "transfer probability over a delta grid");
  auto* majorana = app.add_subcommand("majorana", "Majorana point tracks over time");
  auto* solve = app.add_subcommand("solve-phases", "solve and cache a composite phase schedule");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    const npulse::RunConfig config = resolve(f);
    if (f.show_config) {
      std::cout << npulse::config_to_json(config);
      return 0;
    }
    npulse::CsvDocument doc;
    if (*simulate) {
      doc = npulse::run_simulate(config);
    } else if (*profile) {
      doc = npulse::run_profile(config);
    } else if (*majorana) {
      doc = npulse::run_majorana(config);
    } else if (*solve) {
      npulse::validate(config);
      doc = npulse::run_solve_phases(config.scheme, config.pulses());
    } else {
      std::cerr << app.help();
      return kUsage;
    }
    std::cout << npulse::emit(doc, config);
    std::cout.flush();
    if (!std::cout) throw npulse::IoError("failed writing standard output");
    return 0;
  } catch (const npulse::InvalidInput& e) {
    std::cerr << "npulse: usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const npulse::NumericError& e) {
    std::cerr << "npulse: numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const npulse::IoError& e) {
    std::cerr << "npulse: I/O failure: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "npulse: " << e.what() << "\n";
    return kNumeric;
  }
}
