#pragma once

#include <numbers>

namespace radareye {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

/// Radar mounted directly above the target container, looking straight down.
struct MountGeometry {
  double radar_height = 0.30;  ///< meters above the container's inner bottom
  double max_level = 0.24;     ///< usable container depth, meters

  void validate() const;
};

/// Rectangle of the AoA-ToF plane covered by a steering grid.
struct GridExtent {
  double aoa_min = 0.0;  ///< radians
  double aoa_max = 0.0;
  double tof_min = 0.0;  ///< seconds
  double tof_max = 0.0;

  bool contains(double aoa, double tof) const {
    return aoa >= aoa_min && aoa <= aoa_max && tof >= tof_min && tof <= tof_max;
  }
  void validate() const;
};

/// Two-way delay to one-way range. Throws std::invalid_argument for tof <= 0.
double tof_to_range(double tof);
double range_to_tof(double range);

/// Liquid height for a vertical range, clamped to [0, max_level].
double level_from_range(const MountGeometry& geometry, double range);

/// Two-way delay of the surface echo for a given liquid height (no clamping).
double tof_for_level(const MountGeometry& geometry, double level);

double level_from_tof(const MountGeometry& geometry, double tof);

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Default grid coverage for a mount: AoA in [60, 120] degrees, ToF spanning
/// an empty to a full container, padded by 10% of the span on both sides.
GridExtent default_extent(const MountGeometry& geometry);

}  // namespace radareye
