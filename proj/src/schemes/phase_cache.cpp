#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "json.hpp"
#include "npulse/error.hpp"
#include "npulse/phase_cache.hpp"

namespace npulse {

namespace {

using nlohmann::json;

std::string key_of(SchemeKind kind, int count) { return to_string(kind) + ":" + std::to_string(count); }

json settings_json(const SolverSettings& s) {
  return json{{"starts", s.starts},
              {"seed", s.seed},
              {"tolerance", s.tolerance},
              {"max_evaluations", s.max_evaluations},
              {"residual", "series coefficients of U11 about pi / U21 about 0, scaled by 2^k"},
              {"method", "multi-start Levenberg-Marquardt, palindromic phases"}};
}

SolverSettings settings_from(const json& j) {
  SolverSettings s;
  s.starts = j.at("starts").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.tolerance = j.at("tolerance").get<double>();
  s.max_evaluations = j.at("max_evaluations").get<int>();
  return s;
}

}  // namespace

std::filesystem::path default_phase_cache_path() {
  if (const char* env = std::getenv(kPhaseCacheEnv); env != nullptr && *env != '\0') return env;
  return "npulse_phases.json";
}

PhaseTable PhaseTable::parse(const std::string& text) {
  PhaseTable table;
  try {
    const json doc = json::parse(text);
    for (const auto& [key, value] : doc.at("schedules").items()) {
      const auto colon = key.find(':');
      if (colon == std::string::npos) throw IoError("malformed phase-table key '" + key + "'");
      Entry entry;
      entry.schedule.kind = scheme_from_string(key.substr(0, colon));
      entry.schedule.phases = value.at("phases").get<std::vector<double>>();
      entry.schedule.top_order = value.at("top_order").get<int>();
      entry.schedule.bottom_order = value.at("bottom_order").get<int>();
      entry.schedule.residual = value.at("residual").get<double>();
      entry.settings = settings_from(value.at("solver_settings"));
      table.entries_[key] = std::move(entry);
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed phase table: ") + e.what());
  } catch (const InvalidInput& e) {
    throw IoError(std::string("malformed phase table: ") + e.what());
  }
  return table;
}

PhaseTable PhaseTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return {};
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

std::optional<PhaseSchedule> PhaseTable::find(SchemeKind kind, int count,
                                              const SolverSettings& settings) const {
  const auto it = entries_.find(key_of(kind, count));
  if (it == entries_.end() || !(it->second.settings == settings)) return std::nullopt;
  return it->second.schedule;
}

void PhaseTable::store(const PhaseSchedule& schedule, const SolverSettings& settings) {
  entries_[key_of(schedule.kind, schedule.count())] = Entry{schedule, settings};
}

std::string PhaseTable::to_json() const {
  json schedules = json::object();
  for (const auto& [key, entry] : entries_) {
    schedules[key] = json{{"phases", entry.schedule.phases},
                          {"top_order", entry.schedule.top_order},
                          {"bottom_order", entry.schedule.bottom_order},
                          {"flat_order", entry.schedule.flat_order()},
                          {"residual", entry.schedule.residual},
                          {"solver_settings", settings_json(entry.settings)}};
  }
  return json{{"format", 1}, {"schedules", schedules}}.dump(2) + "\n";
}

void PhaseTable::save(const std::filesystem::path& path) const { write_file_atomic(path, to_json()); }

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace " + path.string());
  }
}

PhaseSchedule cached_schedule(SchemeKind kind, int count, const std::filesystem::path& path,
                              const SolverSettings& settings, bool* hit) {
  if (kind == SchemeKind::single || kind == SchemeKind::nmr) {
    if (hit != nullptr) *hit = true;
    return solve_phases(kind, count, settings);
  }
  PhaseTable table = PhaseTable::load(path);
  if (auto found = table.find(kind, count, settings)) {
    if (hit != nullptr) *hit = true;
    return *found;
  }
  if (hit != nullptr) *hit = false;
  PhaseSchedule schedule = solve_phases(kind, count, settings);
  // Re-read before writing so concurrent writers lose at most their own entry.
  table = PhaseTable::load(path);
  table.store(schedule, settings);
  table.save(path);
  return schedule;
}

}  // namespace npulse
