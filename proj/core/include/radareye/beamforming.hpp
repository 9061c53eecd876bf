#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "radareye/geometry.hpp"
#include "radareye/radar_model.hpp"

namespace radareye {

/// Bin coordinates on the AoA-ToF grid: `aoa` indexes rows, `tof` columns.
struct Bin {
  std::size_t aoa = 0;
  std::size_t tof = 0;
  friend bool operator==(const Bin&, const Bin&) = default;
};

/// Precomputed delay-and-steer tables over an N x N AoA-ToF grid.
///
/// Each steering entry factors as
///   phi_{m,k}(i,j) = exp(-j 2 pi f_k tau_j) * exp(-j 2 pi f_k m d cos(theta_i) / c),
/// so a_{i,j}^H r is evaluated in two stages: antenna phases are compensated
/// per AoA row (N x K result), then one (N x K) * (K x N) product applies the
/// delay phases. The tables are N*M*K + N*K entries instead of N^2*M*K.
class SteeringGrid {
 public:
  SteeringGrid(const RadarConfig& config, std::size_t n, const GridExtent& extent);

  std::size_t size() const { return n_; }
  std::size_t num_bins() const { return n_ * n_; }
  std::size_t num_antennas() const { return num_antennas_; }
  std::size_t num_freq_points() const { return num_freq_points_; }
  const GridExtent& extent() const { return extent_; }

  const std::vector<double>& aoa_bins() const { return aoa_bins_; }
  const std::vector<double>& tof_bins() const { return tof_bins_; }
  double aoa_step() const { return aoa_bins_[1] - aoa_bins_[0]; }
  double tof_step() const { return tof_bins_[1] - tof_bins_[0]; }

  /// phi_{m,k}(i,j)
  cplx steering(Bin bin, std::size_t m, std::size_t k) const;

  /// Unnormalized spectrum magnitudes, row-major N x N.
  void beamform(const Frame& frame, std::vector<double>& magnitudes) const;

  /// Bin nearest to a continuous (aoa, tof) point, clamped to the grid.
  Bin nearest_bin(double aoa, double tof) const;

 private:
  std::size_t n_;
  std::size_t num_antennas_;
  std::size_t num_freq_points_;
  GridExtent extent_;
  std::vector<double> aoa_bins_;
  std::vector<double> tof_bins_;
  Eigen::MatrixXcd aoa_conj_;  ///< N x (M*K): conj of the antenna phase term
  Eigen::MatrixXcd tof_conj_;  ///< K x N: conj of the delay phase term
};

SteeringGrid build_grid(const RadarConfig& config, std::size_t n, const GridExtent& extent);

/// N x N magnitude map P(i,j) with an exclusion mask.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(std::int64_t slot, std::size_t n);
  Spectrum(std::int64_t slot, std::size_t n, std::vector<double> values);

  std::int64_t slot() const { return slot_; }
  void set_slot(std::int64_t slot) { slot_ = slot; }
  std::size_t size() const { return n_; }

  double& at(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  double at(Bin b) const { return at(b.aoa, b.tof); }

  bool masked(std::size_t i, std::size_t j) const { return mask_[i * n_ + j] != 0; }
  bool masked(Bin b) const { return masked(b.aoa, b.tof); }
  void set_masked(std::size_t i, std::size_t j, bool value) { mask_[i * n_ + j] = value ? 1 : 0; }

  bool normalized() const { return normalized_; }
  void set_normalized(bool value) { normalized_ = value; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::size_t unmasked_count() const;

 private:
  std::int64_t slot_ = 0;
  std::size_t n_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
  bool normalized_ = false;
};

/// P(i,j) = |a_{i,j}^H r|. With `normalize`, values are scaled so the maximum
/// over unmasked bins is 1 (an all-zero frame stays all-zero).
Spectrum compute_spectrum(const SteeringGrid& grid, const Frame& frame, bool normalize);

/// Divides by the maximum over unmasked bins; no-op on an all-zero spectrum.
void normalize(Spectrum& spectrum);

/// Element-wise `frame - background`, keeping the frame's slot.
Frame subtract_background(const Frame& frame, const Frame& background);

/// Masks every bin whose ToF lies strictly below `tof_floor`.
Spectrum apply_los_mask(Spectrum spectrum, const SteeringGrid& grid, double tof_floor);

struct Peak {
  Bin bin;
  double magnitude = 0.0;
};

/// Argmax over unmasked bins; ties go to the smallest ToF index, then the
/// smallest AoA index. Throws std::domain_error when every bin is masked.
Peak static_peak(const Spectrum& spectrum);

struct RefinedPeak {
  double aoa = 0.0;  ///< radians
  double tof = 0.0;  ///< seconds
};

/// Sub-bin position from independent three-point parabolic fits along the ToF
/// row and the AoA column. An axis falls back to the bin center at the grid
/// border, next to a masked bin, or when the neighborhood is not concave.
RefinedPeak refine_peak(const Spectrum& spectrum, const SteeringGrid& grid, Bin bin);

/// Vertex offset of the parabola through (-1, left), (0, center), (1, right),
/// clamped to [-1, 1]. Returns nullopt when the three points are not concave.
std::optional<double> parabolic_offset(double left, double center, double right);

}  // namespace radareye
