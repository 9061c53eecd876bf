#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "radareye/radar_model.hpp"
#include "radareye/scenario.hpp"

namespace radareye::cli {

/// Parse or validation failure, tagged with the offending line (0 when the
/// problem is not tied to a single line).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class ScenarioKind { StaticFill, Pour };

/// Everything `simulate` needs, read from a flat `key = value` file.
///
///   scenario = pour | static_fill
///   radar_height = 0.30
///   level = <slot> <meters>                       (repeatable)
///   fill_level = <meters>                         (repeatable)
///   fill_range = <first> <last> <count>
///   interferer = <label> start=<slot> end=<slot> aoa=<deg>[:<deg>] range=<m>[:<m>]
///                ratio=<x> presence=<p> aoa_jitter=<deg> range_jitter=<m>
///   clutter = <label> aoa=<deg> range=<m> magnitude=<x> phase=<deg>
///
/// Angles are in degrees and distances in meters. `#` starts a comment.
struct SimulationConfig {
  ScenarioKind kind = ScenarioKind::Pour;
  RadarConfig radar = default_config();
  ScenarioConfig scenario;
  std::vector<double> fill_levels;
};

SimulationConfig parse_simulation_config(std::istream& in, const std::string& source = "<config>");
SimulationConfig load_simulation_config(const std::filesystem::path& path);

}  // namespace radareye::cli
