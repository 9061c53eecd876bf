#include "radareye/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "phase.hpp"

namespace radareye {

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + static_cast<double>(i) * step;
  out.back() = hi;
  return out;
}

}  // namespace

SteeringGrid::SteeringGrid(const RadarConfig& config, std::size_t n, const GridExtent& extent)
    : n_(n),
      num_antennas_(config.num_antennas),
      num_freq_points_(config.num_freq_points),
      extent_(extent) {
  config.validate();
  if (n < 2) throw std::invalid_argument("steering grid: n must be >= 2");
  extent.validate();

  aoa_bins_ = linspace(extent.aoa_min, extent.aoa_max, n);
  tof_bins_ = linspace(extent.tof_min, extent.tof_max, n);

  const std::size_t M = num_antennas_;
  const std::size_t K = num_freq_points_;
  const long double d = config.spacing();
  const auto freqs = detail::precise_frequencies(config);

  aoa_conj_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(M * K));
  for (std::size_t i = 0; i < n; ++i) {
    const long double cos_aoa = std::cos(static_cast<long double>(aoa_bins_[i]));
    for (std::size_t m = 0; m < M; ++m) {
      const long double delay = static_cast<long double>(m) * d * cos_aoa / kSpeedOfLight;
      for (std::size_t k = 0; k < K; ++k)
        aoa_conj_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m * K + k)) =
            detail::unit_phasor(-detail::fractional_cycles(freqs[k], delay));
    }
  }
  tof_conj_.resize(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j < n; ++j)
      tof_conj_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          detail::unit_phasor(-detail::fractional_cycles(freqs[k], tof_bins_[j]));
}

cplx SteeringGrid::steering(Bin bin, std::size_t m, std::size_t k) const {
  return std::conj(tof_conj_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(bin.tof)) *
                   aoa_conj_(static_cast<Eigen::Index>(bin.aoa), static_cast<Eigen::Index>(m * num_freq_points_ + k)));
}

void SteeringGrid::beamform(const Frame& frame, std::vector<double>& magnitudes) const {
  const auto n = static_cast<Eigen::Index>(n_);
  const auto K = static_cast<Eigen::Index>(num_freq_points_);
  const auto samples = frame.samples();

  // Antenna-compensated sums per AoA row: N x K.
  Eigen::MatrixXcd per_aoa = Eigen::MatrixXcd::Zero(n, K);
  for (std::size_t m = 0; m < num_antennas_; ++m) {
    const Eigen::Map<const Eigen::RowVectorXcd> r_m(samples.data() + m * num_freq_points_, K);
    per_aoa += (aoa_conj_.middleCols(static_cast<Eigen::Index>(m) * K, K).array().rowwise() * r_m.array()).matrix();
  }
  const Eigen::MatrixXcd beams = per_aoa * tof_conj_;  // N x N, (i, j)

  magnitudes.resize(n_ * n_);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      magnitudes[static_cast<std::size_t>(i * n + j)] = std::abs(beams(i, j));
}

Bin SteeringGrid::nearest_bin(double aoa, double tof) const {
  auto nearest = [this](const std::vector<double>& bins, double x) {
    const double pos = (x - bins.front()) / (bins[1] - bins[0]);
    const double r = std::clamp(std::round(pos), 0.0, static_cast<double>(n_ - 1));
    return static_cast<std::size_t>(r);
  };
  return Bin{nearest(aoa_bins_, aoa), nearest(tof_bins_, tof)};
}

SteeringGrid build_grid(const RadarConfig& config, std::size_t n, const GridExtent& extent) {
  return SteeringGrid(config, n, extent);
}

Spectrum::Spectrum(std::int64_t slot, std::size_t n)
    : slot_(slot), n_(n), values_(n * n, 0.0), mask_(n * n, 0) {}

Spectrum::Spectrum(std::int64_t slot, std::size_t n, std::vector<double> values)
    : slot_(slot), n_(n), values_(std::move(values)), mask_(n * n, 0) {
  if (values_.size() != n * n) throw std::invalid_argument("spectrum: value count does not match N*N");
}

std::size_t Spectrum::unmasked_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{0}));
}

Spectrum compute_spectrum(const SteeringGrid& grid, const Frame& frame, bool normalize_values) {
  if (frame.num_antennas() != grid.num_antennas() ||
      frame.num_freq_points() != grid.num_freq_points())
    throw std::invalid_argument("compute_spectrum: frame is " + std::to_string(frame.num_antennas()) +
                                "x" + std::to_string(frame.num_freq_points()) + ", grid expects " +
                                std::to_string(grid.num_antennas()) + "x" +
                                std::to_string(grid.num_freq_points()));

  Spectrum spectrum(frame.slot(), grid.size());
  grid.beamform(frame, spectrum.values());

  if (normalize_values) normalize(spectrum);
  return spectrum;
}

void normalize(Spectrum& spectrum) {
  double peak = 0.0;
  const auto& mask = spectrum.mask();
  auto& values = spectrum.values();
  for (std::size_t b = 0; b < values.size(); ++b)
    if (!mask[b]) peak = std::max(peak, values[b]);
  if (peak > 0.0) {
    const double scale = 1.0 / peak;
    for (auto& v : values) v *= scale;
  }
  spectrum.set_normalized(true);
}

Frame subtract_background(const Frame& frame, const Frame& background) {
  if (!frame.same_shape(background))
    throw std::invalid_argument("subtract_background: frame and background dimensions differ");
  Frame out = frame;
  auto dst = out.samples();
  const auto bg = background.samples();
  for (std::size_t s = 0; s < dst.size(); ++s) dst[s] -= bg[s];
  return out;
}

Spectrum apply_los_mask(Spectrum spectrum, const SteeringGrid& grid, double tof_floor) {
  const auto& tofs = grid.tof_bins();
  for (std::size_t j = 0; j < tofs.size() && tofs[j] < tof_floor; ++j)
    for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum.set_masked(i, j, true);
  return spectrum;
}

Peak static_peak(const Spectrum& spectrum) {
  const std::size_t n = spectrum.size();
  Peak best;
  bool found = false;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (spectrum.masked(i, j)) continue;
      const double v = spectrum.at(i, j);
      if (!found || v > best.magnitude) {
        best = Peak{Bin{i, j}, v};
        found = true;
      }
    }
  }
  if (!found) throw std::domain_error("static_peak: every bin is masked");
  return best;
}

std::optional<double> parabolic_offset(double left, double center, double right) {
  const double curvature = left - 2.0 * center + right;
  if (!(curvature < 0.0)) return std::nullopt;
  const double offset = 0.5 * (left - right) / curvature;
  return std::clamp(offset, -1.0, 1.0);
}

RefinedPeak refine_peak(const Spectrum& spectrum, const SteeringGrid& grid, Bin bin) {
  const std::size_t n = spectrum.size();
  RefinedPeak out{grid.aoa_bins()[bin.aoa], grid.tof_bins()[bin.tof]};

  const double center = spectrum.at(bin);
  if (bin.tof > 0 && bin.tof + 1 < n && !spectrum.masked(bin.aoa, bin.tof - 1) &&
      !spectrum.masked(bin.aoa, bin.tof + 1)) {
    if (auto off = parabolic_offset(spectrum.at(bin.aoa, bin.tof - 1), center,
                                    spectrum.at(bin.aoa, bin.tof + 1)))
      out.tof += *off * grid.tof_step();
  }
  if (bin.aoa > 0 && bin.aoa + 1 < n && !spectrum.masked(bin.aoa - 1, bin.tof) &&
      !spectrum.masked(bin.aoa + 1, bin.tof)) {
    if (auto off = parabolic_offset(spectrum.at(bin.aoa - 1, bin.tof), center,
                                    spectrum.at(bin.aoa + 1, bin.tof)))
      out.aoa += *off * grid.aoa_step();
  }
  return out;
}

}  // namespace radareye
