#include "radareye/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace radareye {

void MountGeometry::validate() const {
  if (!std::isfinite(radar_height) || !std::isfinite(max_level))
    throw std::invalid_argument("mount geometry: non-finite value");
  if (!(max_level > 0.0) || !(max_level < radar_height))
    throw std::invalid_argument("mount geometry: require 0 < max_level < radar_height");
}

void GridExtent::validate() const {
  if (!(aoa_min < aoa_max)) throw std::invalid_argument("grid extent: aoa range inverted or empty");
  if (!(tof_min < tof_max)) throw std::invalid_argument("grid extent: tof range inverted or empty");
  if (!(tof_min > 0.0)) throw std::invalid_argument("grid extent: tof_min must be positive");
  if (aoa_min < 0.0 || aoa_max > kPi) throw std::invalid_argument("grid extent: aoa outside [0, pi]");
}

double tof_to_range(double tof) {
  if (!(tof > 0.0) || !std::isfinite(tof))
    throw std::invalid_argument("tof_to_range: tof must be positive and finite, got " +
                                std::to_string(tof));
  return kSpeedOfLight * tof / 2.0;
}

double range_to_tof(double range) {
  if (!(range > 0.0) || !std::isfinite(range))
    throw std::invalid_argument("range_to_tof: range must be positive and finite");
  return 2.0 * range / kSpeedOfLight;
}

double level_from_range(const MountGeometry& geometry, double range) {
  return std::clamp(geometry.radar_height - range, 0.0, geometry.max_level);
}

double tof_for_level(const MountGeometry& geometry, double level) {
  return range_to_tof(geometry.radar_height - level);
}

double level_from_tof(const MountGeometry& geometry, double tof) {
  return level_from_range(geometry, kSpeedOfLight * tof / 2.0);
}

GridExtent default_extent(const MountGeometry& geometry) {
  geometry.validate();
  const double near = 2.0 * (geometry.radar_height - geometry.max_level) / kSpeedOfLight;
  const double far = 2.0 * geometry.radar_height / kSpeedOfLight;
  const double pad = 0.1 * (far - near);
  return GridExtent{deg_to_rad(60.0), deg_to_rad(120.0), near - pad, far + pad};
}

}  // namespace radareye
