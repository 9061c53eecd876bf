#include "radareye/cli/config_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "radareye/geometry.hpp"

namespace radareye::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

class LineParser {
 public:
  LineParser(std::string source, std::size_t line) : source_(std::move(source)), line_(line) {}

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(source_, line_, message); }

  double number(std::string_view text, std::string_view field) const {
    const std::string t(text);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size() || !std::isfinite(v))
      fail("field '" + std::string(field) + "': expected a number, got '" + t + "'");
    return v;
  }

  std::size_t count(std::string_view text, std::string_view field) const {
    const std::string t(text);
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size())
      fail("field '" + std::string(field) + "': expected a non-negative integer, got '" + t + "'");
    return v;
  }

  // "a" or "a:b"
  std::pair<double, double> span(std::string_view text, std::string_view field) const {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
      const double v = number(text, field);
      return {v, v};
    }
    return {number(text.substr(0, colon), field), number(text.substr(colon + 1), field)};
  }

  PathLabel label(const std::string& text) const {
    try {
      return parse_path_label(text);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  // label followed by key=value tokens
  std::map<std::string, std::string> attributes(const std::vector<std::string>& tokens,
                                                std::initializer_list<std::string_view> allowed) const {
    std::map<std::string, std::string> out;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto eq = tokens[t].find('=');
      if (eq == std::string::npos) fail("expected key=value, got '" + tokens[t] + "'");
      std::string key = tokens[t].substr(0, eq);
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) fail("unknown attribute '" + key + "'");
      out[key] = tokens[t].substr(eq + 1);
    }
    return out;
  }

 private:
  std::string source_;
  std::size_t line_;
};

}  // namespace

ConfigError::ConfigError(std::string source, std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message : source + ": " + message),
      line_(line) {}

SimulationConfig parse_simulation_config(std::istream& in, const std::string& source) {
  SimulationConfig cfg;
  cfg.scenario.level_trajectory.clear();
  cfg.scenario.interferers.clear();
  cfg.scenario.static_clutter.clear();
  cfg.scenario.snr_db = std::numeric_limits<double>::infinity();

  // Deferred so that radar_height may appear after the paths that use it.
  struct PendingInterferer {
    std::size_t line;
    PathLabel label;
    std::map<std::string, std::string> attrs;
  };
  struct PendingClutter {
    std::size_t line;
    PathLabel label;
    std::map<std::string, std::string> attrs;
  };
  std::vector<PendingInterferer> interferers;
  std::vector<PendingClutter> clutter;
  std::vector<std::pair<std::size_t, double>> fill_levels;
  std::vector<std::pair<std::size_t, LevelKnot>> levels;
  std::map<std::string, std::size_t> seen;

  std::string raw;
  for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const LineParser p(source, line_no);

    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) p.fail("key '" + key + "' has no value");

    const bool repeatable = key == "level" || key == "fill_level" || key == "interferer" || key == "clutter";
    if (!repeatable && seen.contains(key))
      p.fail("key '" + key + "' repeated (first set on line " + std::to_string(seen[key]) + ")");
    seen.emplace(key, line_no);

    auto& sc = cfg.scenario;
    if (key == "scenario") {
      if (value == "pour") cfg.kind = ScenarioKind::Pour;
      else if (value == "static_fill") cfg.kind = ScenarioKind::StaticFill;
      else p.fail("scenario must be 'pour' or 'static_fill', got '" + value + "'");
    } else if (key == "carrier_frequency") {
      cfg.radar.carrier_frequency = p.number(value, key);
    } else if (key == "bandwidth") {
      cfg.radar.bandwidth = p.number(value, key);
    } else if (key == "num_antennas") {
      cfg.radar.num_antennas = p.count(value, key);
    } else if (key == "num_freq_points") {
      cfg.radar.num_freq_points = p.count(value, key);
    } else if (key == "element_spacing") {
      cfg.radar.element_spacing = p.number(value, key);
    } else if (key == "radar_height") {
      sc.geometry.radar_height = p.number(value, key);
    } else if (key == "max_level") {
      sc.geometry.max_level = p.number(value, key);
    } else if (key == "num_slots") {
      sc.num_slots = p.count(value, key);
    } else if (key == "slot_duration") {
      sc.slot_duration = p.number(value, key);
    } else if (key == "snr_db") {
      sc.snr_db = p.number(value, key);
    } else if (key == "surface_magnitude") {
      sc.surface_magnitude = p.number(value, key);
    } else if (key == "level") {
      const auto tok = split_ws(value);
      if (tok.size() != 2) p.fail("level expects '<slot> <meters>'");
      levels.emplace_back(line_no,
                          LevelKnot{static_cast<std::int64_t>(p.count(tok[0], "level slot")), p.number(tok[1], "level")});
    } else if (key == "fill_level") {
      fill_levels.emplace_back(line_no, p.number(value, key));
    } else if (key == "fill_range") {
      const auto tok = split_ws(value);
      if (tok.size() != 3) p.fail("fill_range expects '<first> <last> <count>'");
      const double first = p.number(tok[0], key);
      const double last = p.number(tok[1], key);
      const std::size_t n = p.count(tok[2], key);
      if (n < 1) p.fail("fill_range count must be >= 1");
      for (std::size_t s = 0; s < n; ++s)
        fill_levels.emplace_back(line_no, n == 1 ? first : first + (last - first) * static_cast<double>(s) / static_cast<double>(n - 1));
    } else if (key == "interferer") {
      const auto tok = split_ws(value);
      interferers.push_back({line_no, p.label(tok[0]),
                             p.attributes(tok, {"start", "end", "aoa", "range", "ratio", "presence", "aoa_jitter",
                                                "range_jitter"})});
    } else if (key == "clutter") {
      const auto tok = split_ws(value);
      clutter.push_back({line_no, p.label(tok[0]), p.attributes(tok, {"aoa", "range", "magnitude", "phase"})});
    } else {
      p.fail("unknown key '" + key + "'");
    }
  }

  auto& sc = cfg.scenario;
  const double h = sc.geometry.radar_height;
  auto line_of = [&](const std::string& key) { return seen.contains(key) ? seen[key] : std::size_t{0}; };

  if (!(h > 0.0)) throw ConfigError(source, line_of("radar_height"), "radar_height must be positive");
  try {
    sc.geometry.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source, line_of("max_level"), std::string("max_level: ") + e.what());
  }

  for (const auto& [line_no, level] : fill_levels) {
    if (!(level >= 0.0) || !(level < h))
      throw ConfigError(source, line_no,
                        "fill_level " + std::to_string(level) + " must lie in [0, radar_height = " + std::to_string(h) + ")");
    cfg.fill_levels.push_back(level);
  }
  for (const auto& [line_no, knot] : levels) {
    if (!(knot.level >= 0.0) || !(knot.level < h))
      throw ConfigError(source, line_no,
                        "level " + std::to_string(knot.level) + " must lie in [0, radar_height = " + std::to_string(h) + ")");
    if (!sc.level_trajectory.empty() && knot.slot <= sc.level_trajectory.back().slot)
      throw ConfigError(source, line_no, "level knots must have strictly increasing slots");
    sc.level_trajectory.push_back(knot);
  }

  for (const auto& pending : interferers) {
    const LineParser p(source, pending.line);
    const auto& a = pending.attrs;
    auto get = [&](const char* k, const char* fallback) { return a.contains(k) ? a.at(k) : std::string(fallback); };
    if (!a.contains("aoa") || !a.contains("range")) p.fail("interferer requires aoa= and range=");
    InterfererSpec itf;
    itf.label = pending.label;
    itf.start_slot = static_cast<std::int64_t>(p.count(get("start", "0"), "start"));
    itf.end_slot = a.contains("end") ? static_cast<std::int64_t>(p.count(a.at("end"), "end"))
                                     : static_cast<std::int64_t>(sc.num_slots) - 1;
    const auto [aoa0, aoa1] = p.span(a.at("aoa"), "aoa");
    const auto [r0, r1] = p.span(a.at("range"), "range");
    if (!(r0 > 0.0) || !(r1 > 0.0)) p.fail("interferer range must be positive");
    itf.aoa_start = deg_to_rad(aoa0);
    itf.aoa_end = deg_to_rad(aoa1);
    itf.tof_start = range_to_tof(r0);
    itf.tof_end = range_to_tof(r1);
    itf.magnitude_ratio = p.number(get("ratio", "1.5"), "ratio");
    itf.presence = p.number(get("presence", "1"), "presence");
    itf.aoa_jitter = deg_to_rad(p.number(get("aoa_jitter", "0"), "aoa_jitter"));
    const double range_jitter = p.number(get("range_jitter", "0"), "range_jitter");
    if (range_jitter < 0.0) p.fail("range_jitter must be non-negative");
    itf.tof_jitter = 2.0 * range_jitter / kSpeedOfLight;
    sc.interferers.push_back(itf);
  }
  for (const auto& pending : clutter) {
    const LineParser p(source, pending.line);
    const auto& a = pending.attrs;
    if (!a.contains("aoa") || !a.contains("range")) p.fail("clutter requires aoa= and range=");
    const double range = p.number(a.at("range"), "range");
    if (!(range > 0.0)) p.fail("clutter range must be positive");
    const double magnitude = a.contains("magnitude") ? p.number(a.at("magnitude"), "magnitude") : 1.0;
    const double phase = a.contains("phase") ? p.number(a.at("phase"), "phase") : 0.0;
    PropagationPath path{deg_to_rad(p.number(a.at("aoa"), "aoa")), range_to_tof(range),
                         std::polar(magnitude, deg_to_rad(phase)), pending.label};
    try {
      path.validate();
    } catch (const std::invalid_argument& e) {
      p.fail(e.what());
    }
    sc.static_clutter.push_back(path);
  }

  try {
    cfg.radar.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source, 0, e.what());
  }
  if (cfg.kind == ScenarioKind::StaticFill) {
    if (cfg.fill_levels.empty()) throw ConfigError(source, 0, "static_fill scenario needs fill_level or fill_range");
  } else {
    if (sc.level_trajectory.empty()) throw ConfigError(source, 0, "pour scenario needs at least one 'level' knot");
    try {
      sc.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, 0, e.what());
    }
  }
  return cfg;
}

SimulationConfig load_simulation_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  return parse_simulation_config(in, path.string());
}

}  // namespace radareye::cli
