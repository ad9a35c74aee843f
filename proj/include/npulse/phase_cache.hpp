#pragma once

// On-disk table of solved phase schedules, keyed by (scheme, pulse count).
//
// Layout:
//   { "format": 1,
//     "schedules": { "broadband:5": { "phases": [...], "top_order": 10,
//                                     "bottom_order": 2, "flat_order": 10,
//                                     "residual": 3.6e-16,
//                                     "solver_settings": {...} }, ... } }

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "npulse/schemes.hpp"

namespace npulse {

/// Environment variable that overrides the cache location.
inline constexpr const char* kPhaseCacheEnv = "NPULSE_PHASE_CACHE";

/// $NPULSE_PHASE_CACHE if set, otherwise ./npulse_phases.json.
std::filesystem::path default_phase_cache_path();

class PhaseTable {
 public:
  /// A missing file yields an empty table; a malformed one throws IoError.
  static PhaseTable load(const std::filesystem::path& path);
  static PhaseTable parse(const std::string& text);

  /// Entry for (kind, count) solved with exactly `settings`, if any.
  std::optional<PhaseSchedule> find(SchemeKind kind, int count, const SolverSettings& settings) const;
  void store(const PhaseSchedule& schedule, const SolverSettings& settings);

  std::size_t size() const noexcept { return entries_.size(); }
  std::string to_json() const;

  /// Write via a temporary file and rename.
  void save(const std::filesystem::path& path) const;

 private:
  struct Entry {
    PhaseSchedule schedule;
    SolverSettings settings;
  };
  std::map<std::string, Entry> entries_;
};

/// Look up (kind, count) in the cache at `path`, solving and writing it back on
/// a miss. `hit`, when given, reports whether the cache answered.
PhaseSchedule cached_schedule(SchemeKind kind, int count, const std::filesystem::path& path,
                              const SolverSettings& settings = {}, bool* hit = nullptr);

/// Write `content` to `path` atomically (temporary sibling + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace npulse
