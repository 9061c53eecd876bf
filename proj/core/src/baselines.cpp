#include "radareye/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace radareye {

void BaselineParams::validate() const {
  if (top_n < 1) throw std::invalid_argument("baseline params: top_n must be >= 1");
  if (window < 1) throw std::invalid_argument("baseline params: window must be >= 1");
}

std::vector<Bin> peak_pick_track(std::span<const Spectrum> spectra) {
  std::vector<Bin> bins;
  bins.reserve(spectra.size());
  for (const auto& s : spectra) bins.push_back(static_peak(s).bin);
  return bins;
}

std::vector<Peak> top_bins(const Spectrum& spectrum, std::size_t top_n) {
  const std::size_t n = spectrum.size();
  std::vector<Peak> all;
  all.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (!spectrum.masked(i, j)) all.push_back(Peak{Bin{i, j}, spectrum.at(i, j)});
  if (all.empty()) throw std::domain_error("top_bins: every bin is masked");

  const std::size_t keep = std::min(top_n, all.size());
  // `all` is in (ToF, AoA) order, so a stable ordering by magnitude keeps the tie-break.
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    [](const Peak& a, const Peak& b) {
                      if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
                      if (a.bin.tof != b.bin.tof) return a.bin.tof < b.bin.tof;
                      return a.bin.aoa < b.bin.aoa;
                    });
  all.resize(keep);
  return all;
}

SmoothedPeakTracker::SmoothedPeakTracker(const SteeringGrid& grid, BaselineParams params)
    : grid_(&grid), params_(params) {
  params_.validate();
}

RefinedPeak SmoothedPeakTracker::update(const Spectrum& spectrum) {
  if (spectrum.size() != grid_->size()) throw std::invalid_argument("smoothed tracker: spectrum does not match grid");
  window_.push_back(top_bins(spectrum, params_.top_n));
  if (window_.size() > params_.window) window_.pop_front();

  double weight = 0.0, aoa = 0.0, tof = 0.0, plain_aoa = 0.0, plain_tof = 0.0;
  std::size_t count = 0;
  for (const auto& peaks : window_)
    for (const auto& p : peaks) {
      const double a = grid_->aoa_bins()[p.bin.aoa];
      const double t = grid_->tof_bins()[p.bin.tof];
      weight += p.magnitude;
      aoa += p.magnitude * a;
      tof += p.magnitude * t;
      plain_aoa += a;
      plain_tof += t;
      ++count;
    }
  if (weight > 0.0) return RefinedPeak{aoa / weight, tof / weight};
  // all-zero window: fall back to the unweighted centroid
  return RefinedPeak{plain_aoa / static_cast<double>(count), plain_tof / static_cast<double>(count)};
}

std::vector<RefinedPeak> smoothed_peak_track(std::span<const Spectrum> spectra, const SteeringGrid& grid,
                                             const BaselineParams& params) {
  SmoothedPeakTracker tracker(grid, params);
  std::vector<RefinedPeak> out;
  out.reserve(spectra.size());
  for (const auto& s : spectra) out.push_back(tracker.update(s));
  return out;
}

}  // namespace radareye
