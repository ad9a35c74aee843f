#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "npulse/cli.hpp"
#include "npulse/error.hpp"

namespace npulse {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw InvalidInput(key, "'" + key + "' must be an integer");
  return v.get<int>();
}

double get_real(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_angle(v.get<std::string>(), key);
  throw InvalidInput(key, "'" + key + "' must be a number");
}

std::string get_text(const json& v, const std::string& key) {
  if (!v.is_string()) throw InvalidInput(key, "'" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

double parse_angle(const std::string& text, const std::string& field) {
  const std::string s = trim(text);
  double value = 0.0;
  if (parse_number(s, value)) return value;
  const auto at = s.find("pi");
  if (at == std::string::npos) throw InvalidInput(field, "cannot parse '" + text + "' as a number");
  std::string head = trim(s.substr(0, at));
  const std::string tail = trim(s.substr(at + 2));
  if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
  double scale = 1.0;
  if (head == "-") {
    scale = -1.0;
  } else if (!head.empty() && head != "+" && !parse_number(head, scale)) {
    throw InvalidInput(field, "cannot parse '" + text + "' as a multiple of pi");
  }
  double denom = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/' || !parse_number(trim(tail.substr(1)), denom) || denom == 0.0) {
      throw InvalidInput(field, "cannot parse '" + text + "' as a multiple of pi");
    }
  }
  return scale * std::numbers::pi / denom;
}

GridSpec parse_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
    throw InvalidInput("grid", "expected min:max:count, got '" + text + "'");
  }
  GridSpec g;
  g.min = parse_angle(text.substr(0, first), "grid");
  g.max = parse_angle(text.substr(first + 1, second - first - 1), "grid");
  double count = 0.0;
  if (!parse_number(trim(text.substr(second + 1)), count) || count != std::floor(count) || count > 1e7) {
    throw InvalidInput("grid", "grid count must be a positive integer");
  }
  g.count = static_cast<int>(count);
  return g;
}

int RunConfig::pulses() const {
  if (pulse_count) return *pulse_count;
  switch (scheme) {
    case SchemeKind::single:
      return 1;
    case SchemeKind::nmr:
      return 3;
    default:
      return 5;
  }
}

void validate(const RunConfig& c) {
  if (c.levels < 2 || c.levels > kMaxTwiceJ + 1) {
    throw InvalidInput("levels", "levels must be within 2.." + std::to_string(kMaxTwiceJ + 1));
  }
  const int m = c.pulses();
  if (c.scheme == SchemeKind::single && m != 1) {
    throw InvalidInput("pulses", "the single scheme has exactly one pulse");
  }
  if (c.scheme == SchemeKind::nmr && m != 3) {
    throw InvalidInput("pulses", "the nmr scheme has exactly three pulses");
  }
  if (m < 1 || m > 25 || m % 2 == 0) throw InvalidInput("pulses", "pulse count must be odd and within 1..25");
  if (!std::isfinite(c.delta) || std::abs(c.delta) > std::numbers::pi) {
    throw InvalidInput("delta", "delta must lie in [-pi, pi]");
  }
  if (c.initial_level < 1 || c.initial_level > c.levels) {
    throw InvalidInput("initial_level", "initial level must be within 1.." + std::to_string(c.levels));
  }
  if (c.samples_per_pulse < 2) throw InvalidInput("samples", "samples per pulse must be at least 2");
  const GridSpec& g = c.delta_grid;
  if (g.count < 1) throw InvalidInput("grid", "grid count must be at least 1");
  if (!std::isfinite(g.min) || !std::isfinite(g.max) || g.min > g.max) {
    throw InvalidInput("grid", "grid needs min <= max");
  }
  if (g.count > 1 && !(g.max > g.min)) throw InvalidInput("grid", "a grid of several points needs max > min");
  if (std::abs(g.min) > std::numbers::pi || std::abs(g.max) > std::numbers::pi) {
    throw InvalidInput("grid", "grid bounds must lie in [-pi, pi]");
  }
}

std::string config_to_json(const RunConfig& c) {
  json j = json::object();
  j["levels"] = c.levels;
  j["scheme"] = to_string(c.scheme);
  j["pulses"] = c.pulses();
  j["delta"] = c.delta;
  j["envelope"] = to_string(c.envelope);
  j["initial_level"] = c.initial_level;
  j["samples"] = c.samples_per_pulse;
  j["grid"] = json{{"min", c.delta_grid.min}, {"max", c.delta_grid.max}, {"count", c.delta_grid.count}};
  j["out"] = c.output_path;
  j["svg"] = c.svg_path;
  return j.dump(2) + "\n";
}

RunConfig merge_config_json(const RunConfig& base, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput("config", std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("config", "config must be a JSON object");
  RunConfig c = base;
  for (const auto& [key, v] : doc.items()) {
    if (key == "levels") {
      c.levels = get_int(v, key);
    } else if (key == "scheme") {
      c.scheme = scheme_from_string(get_text(v, key));
    } else if (key == "pulses") {
      c.pulse_count = get_int(v, key);
    } else if (key == "delta") {
      c.delta = get_real(v, key);
    } else if (key == "envelope") {
      c.envelope = envelope_from_string(get_text(v, key));
    } else if (key == "initial_level") {
      c.initial_level = get_int(v, key);
    } else if (key == "samples") {
      c.samples_per_pulse = get_int(v, key);
    } else if (key == "grid") {
      if (v.is_string()) {
        c.delta_grid = parse_grid(v.get<std::string>());
      } else if (v.is_object()) {
        for (const auto& [gk, gv] : v.items()) {
          if (gk == "min") {
            c.delta_grid.min = get_real(gv, "grid");
          } else if (gk == "max") {
            c.delta_grid.max = get_real(gv, "grid");
          } else if (gk == "count") {
            c.delta_grid.count = get_int(gv, "grid");
          } else {
            throw InvalidInput("grid", "unknown grid key '" + gk + "'");
          }
        }
      } else {
        throw InvalidInput("grid", "'grid' must be an object or \"min:max:count\"");
      }
    } else if (key == "out") {
      c.output_path = get_text(v, key);
    } else if (key == "svg") {
      c.svg_path = get_text(v, key);
    } else {
      throw InvalidInput(key, "unknown config key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_config_file(const RunConfig& base, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return merge_config_json(base, text.str());
}

}  // namespace npulse
