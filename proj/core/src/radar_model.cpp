#include "radareye/radar_model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "phase.hpp"
#include "radareye/geometry.hpp"

namespace radareye {

double RadarConfig::frequency(std::size_t k) const {
  if (num_freq_points == 1) return carrier_frequency;
  const double step = bandwidth / static_cast<double>(num_freq_points - 1);
  return carrier_frequency - bandwidth / 2.0 + static_cast<double>(k) * step;
}

std::vector<double> RadarConfig::frequencies() const {
  std::vector<double> f(num_freq_points);
  for (std::size_t k = 0; k < num_freq_points; ++k) f[k] = frequency(k);
  return f;
}

double RadarConfig::spacing() const {
  return element_spacing > 0.0 ? element_spacing : kSpeedOfLight / (2.0 * carrier_frequency);
}

void RadarConfig::validate() const {
  if (num_antennas < 1) throw std::invalid_argument("radar config: num_antennas must be >= 1");
  if (num_freq_points < 1) throw std::invalid_argument("radar config: num_freq_points must be >= 1");
  if (!std::isfinite(bandwidth) || bandwidth < 0.0)
    throw std::invalid_argument("radar config: bandwidth must be finite and >= 0");
  if (!std::isfinite(carrier_frequency) || !(carrier_frequency > bandwidth / 2.0))
    throw std::invalid_argument("radar config: carrier_frequency must exceed bandwidth/2");
  if (!std::isfinite(element_spacing) || element_spacing < 0.0)
    throw std::invalid_argument("radar config: element_spacing must be positive (or 0 for default)");
  if (!std::isfinite(noise_std) || noise_std < 0.0)
    throw std::invalid_argument("radar config: noise_std must be finite and >= 0");
}

RadarConfig default_config() {
  RadarConfig config;
  config.carrier_frequency = 61.8e9;
  config.bandwidth = 3.6e9;
  config.num_antennas = 4;
  config.num_freq_points = 128;
  config.element_spacing = kSpeedOfLight / (2.0 * config.carrier_frequency);
  config.noise_std = 0.0;
  return config;
}

std::string_view to_string(PathLabel label) {
  switch (label) {
    case PathLabel::LiquidSurface: return "surface";
    case PathLabel::Gripper: return "gripper";
    case PathLabel::SourceContainer: return "source_container";
    case PathLabel::Desktop: return "desktop";
    case PathLabel::Other: return "other";
  }
  return "other";
}

PathLabel parse_path_label(std::string_view text) {
  for (auto label : {PathLabel::LiquidSurface, PathLabel::Gripper, PathLabel::SourceContainer,
                     PathLabel::Desktop, PathLabel::Other}) {
    if (to_string(label) == text) return label;
  }
  throw std::invalid_argument("unknown path label '" + std::string(text) + "'");
}

void PropagationPath::validate() const {
  if (!std::isfinite(aoa) || !std::isfinite(tof) || !std::isfinite(attenuation.real()) ||
      !std::isfinite(attenuation.imag()))
    throw std::invalid_argument("propagation path: non-finite parameter");
  if (!(tof > 0.0)) throw std::invalid_argument("propagation path: tof must be positive");
  if (!(aoa > 0.0 && aoa < kPi)) throw std::invalid_argument("propagation path: aoa must lie in (0, pi)");
  if (std::abs(attenuation) == 0.0)
    throw std::invalid_argument("propagation path: attenuation must be non-zero");
}

Frame::Frame(std::int64_t slot, std::size_t num_antennas, std::size_t num_freq_points)
    : slot_(slot),
      num_antennas_(num_antennas),
      num_freq_points_(num_freq_points),
      samples_(num_antennas * num_freq_points) {}

Frame::Frame(std::int64_t slot, std::size_t num_antennas, std::size_t num_freq_points,
             std::vector<cplx> samples)
    : slot_(slot),
      num_antennas_(num_antennas),
      num_freq_points_(num_freq_points),
      samples_(std::move(samples)) {
  if (samples_.size() != num_antennas_ * num_freq_points_)
    throw std::invalid_argument("frame: sample count does not match M*K");
}

Frame synthesize_frame(const RadarConfig& config, std::span<const PropagationPath> paths,
                       std::int64_t slot, std::uint64_t rng_seed) {
  config.validate();
  for (const auto& path : paths) path.validate();

  const std::size_t M = config.num_antennas;
  const std::size_t K = config.num_freq_points;
  const long double d = config.spacing();
  const auto freqs = detail::precise_frequencies(config);
  Frame frame(slot, M, K);

  for (const auto& path : paths) {
    const long double cos_aoa = std::cos(static_cast<long double>(path.aoa));
    for (std::size_t m = 0; m < M; ++m) {
      const long double delay =
          path.tof + static_cast<long double>(m) * d * cos_aoa / kSpeedOfLight;
      for (std::size_t k = 0; k < K; ++k)
        frame.at(m, k) += path.attenuation * detail::unit_phasor(detail::fractional_cycles(freqs[k], delay));
    }
  }

  if (config.noise_std > 0.0) {
    std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                      static_cast<std::uint32_t>(slot), static_cast<std::uint32_t>(slot >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, config.noise_std);
    for (auto& s : frame.samples()) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      s += cplx(re, im);
    }
  }
  return frame;
}

}  // namespace radareye
