#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "radareye/beamforming.hpp"

namespace radareye {

struct BaselineParams {
  std::size_t top_n = 5;   ///< strongest bins taken from each spectrum
  std::size_t window = 3;  ///< trailing frames pooled per estimate

  void validate() const;
};

/// Independent per-slot argmax.
std::vector<Bin> peak_pick_track(std::span<const Spectrum> spectra);

/// The `top_n` largest unmasked bins of one spectrum, strongest first
/// (ties by ToF index, then AoA index).
std::vector<Peak> top_bins(const Spectrum& spectrum, std::size_t top_n);

/// Envelope smoothing: pools the top bins of the trailing window and returns
/// their magnitude-weighted mean (aoa, tof). Early slots use the available prefix.
std::vector<RefinedPeak> smoothed_peak_track(std::span<const Spectrum> spectra, const SteeringGrid& grid,
                                             const BaselineParams& params);

/// Streaming form of smoothed_peak_track for slot-by-slot use.
class SmoothedPeakTracker {
 public:
  SmoothedPeakTracker(const SteeringGrid& grid, BaselineParams params);

  RefinedPeak update(const Spectrum& spectrum);

 private:
  const SteeringGrid* grid_;
  BaselineParams params_;
  std::deque<std::vector<Peak>> window_;
};

}  // namespace radareye
