#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "radareye/geometry.hpp"
#include "radareye/radar_model.hpp"

namespace radareye {

/// (slot, liquid height in meters) knot of a piecewise-linear level curve.
struct LevelKnot {
  std::int64_t slot = 0;
  double level = 0.0;
};

/// A moving non-surface reflector (gripper, source container, pour stream).
///
/// While active, it moves on a straight line in the AoA-ToF plane from
/// (aoa_start, tof_start) at `start_slot` to (aoa_end, tof_end) at `end_slot`.
/// Each active slot it is present with probability `presence`, carries a
/// fresh uniformly random phase, and is displaced from the line by uniform
/// jitter of up to +-aoa_jitter / +-tof_jitter (clamped to grid coverage).
struct InterfererSpec {
  PathLabel label = PathLabel::Gripper;
  std::int64_t start_slot = 0;
  std::int64_t end_slot = 0;
  double aoa_start = kPi / 2;
  double aoa_end = kPi / 2;
  double tof_start = 0.0;
  double tof_end = 0.0;
  double magnitude_ratio = 1.5;  ///< |alpha| relative to the surface path
  double presence = 1.0;
  double aoa_jitter = 0.0;  ///< radians
  double tof_jitter = 0.0;  ///< seconds

  bool active(std::int64_t slot) const { return slot >= start_slot && slot <= end_slot; }
  /// (aoa, tof) at an active slot
  std::pair<double, double> position(std::int64_t slot) const;
};

struct ScenarioConfig {
  MountGeometry geometry;
  std::size_t num_slots = 60;
  double slot_duration = 0.25;  ///< seconds
  std::vector<LevelKnot> level_trajectory;
  std::vector<InterfererSpec> interferers;
  double surface_magnitude = 1.0;
  std::vector<PropagationPath> static_clutter;
  /// Per-sample SNR of the surface path; +inf means noiseless.
  double snr_db = std::numeric_limits<double>::infinity();
  /// Grid coverage every moving path must stay inside; defaults to default_extent(geometry).
  std::optional<GridExtent> coverage;

  double level_at(std::int64_t slot) const;
  GridExtent resolved_coverage() const { return coverage.value_or(default_extent(geometry)); }
  void validate() const;
};

/// Frames plus the ground truth they were generated from.
struct LabeledFrameSequence {
  std::vector<Frame> frames;
  std::vector<double> truth_levels;  ///< meters, one per frame
  Frame background;                  ///< static clutter + noise, slot -1
  std::vector<std::vector<PropagationPath>> paths;  ///< every path used per frame
};

/// Per-component noise standard deviation giving `snr_db` per complex sample
/// against a path of magnitude `signal_magnitude`.
double noise_std_for_snr(double signal_magnitude, double snr_db);

/// One frame per fill step with the surface straight below the radar.
LabeledFrameSequence static_fill_scenario(const RadarConfig& config, std::span<const double> steps, double snr_db,
                                          std::uint64_t seed, const MountGeometry& geometry = {});

/// Multi-slot pour with moving interferers and static clutter.
LabeledFrameSequence pouring_scenario(const RadarConfig& config, const ScenarioConfig& scenario, std::uint64_t seed);

/// Level rising 0 -> 7 cm over 60 slots after a 5-slot static phase, one
/// interferer at 1.5x the surface magnitude whose trace crosses the surface
/// trace mid-pour, a desktop and a container-rim reflector, 20 dB SNR.
ScenarioConfig default_pour_scenario();

/// The 0 -> 7.4 cm stepwise fill levels (16 steps).
std::vector<double> default_fill_steps();

}  // namespace radareye
