#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace radareye {

using cplx = std::complex<double>;

/// Array geometry and stepped-frequency waveform of the radar.
///
/// Frequency samples are uniform and symmetric about the carrier:
/// f_k = carrier - bandwidth/2 + k * bandwidth/(K-1), k = 0..K-1 (a single
/// sample sits at the carrier when K == 1).
struct RadarConfig {
  double carrier_frequency = 61.8e9;  ///< Hz
  double bandwidth = 3.6e9;           ///< Hz
  std::size_t num_antennas = 4;       ///< M, receive elements of the ULA
  std::size_t num_freq_points = 128;  ///< K
  double element_spacing = 0.0;       ///< meters; 0 selects half a carrier wavelength
  double noise_std = 0.0;             ///< per real/imag component

  double frequency(std::size_t k) const;
  std::vector<double> frequencies() const;
  double spacing() const;  // resolved element spacing
  std::size_t samples_per_frame() const { return num_antennas * num_freq_points; }

  void validate() const;
};

/// Carrier 61.8 GHz, 3.6 GHz bandwidth, 4 receive elements, 128 frequency
/// points, half-wavelength spacing, noiseless.
RadarConfig default_config();

enum class PathLabel : std::uint8_t { LiquidSurface, Gripper, SourceContainer, Desktop, Other };

std::string_view to_string(PathLabel label);
PathLabel parse_path_label(std::string_view text);

/// One reflector. AoA is measured from the array axis; ToF is two-way.
struct PropagationPath {
  double aoa = 0.0;
  double tof = 0.0;
  cplx attenuation{1.0, 0.0};
  PathLabel label = PathLabel::Other;

  void validate() const;
};

/// Received vector r(t) for one slot, stored antenna-major:
/// index m*K + k holds r_{m,k}.
class Frame {
 public:
  Frame() = default;
  Frame(std::int64_t slot, std::size_t num_antennas, std::size_t num_freq_points);
  Frame(std::int64_t slot, std::size_t num_antennas, std::size_t num_freq_points,
        std::vector<cplx> samples);

  std::int64_t slot() const { return slot_; }
  void set_slot(std::int64_t slot) { slot_ = slot; }
  std::size_t num_antennas() const { return num_antennas_; }
  std::size_t num_freq_points() const { return num_freq_points_; }
  std::size_t size() const { return samples_.size(); }

  cplx& at(std::size_t m, std::size_t k) { return samples_[m * num_freq_points_ + k]; }
  const cplx& at(std::size_t m, std::size_t k) const { return samples_[m * num_freq_points_ + k]; }

  std::span<const cplx> samples() const { return samples_; }
  std::span<cplx> samples() { return samples_; }

  bool same_shape(const Frame& other) const {
    return num_antennas_ == other.num_antennas_ && num_freq_points_ == other.num_freq_points_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::int64_t slot_ = 0;
  std::size_t num_antennas_ = 0;
  std::size_t num_freq_points_ = 0;
  std::vector<cplx> samples_;
};

/// Noise-free sum of all path contributions with a unit probe signal,
/// followed by circular Gaussian noise drawn from (rng_seed, slot).
Frame synthesize_frame(const RadarConfig& config, std::span<const PropagationPath> paths,
                       std::int64_t slot, std::uint64_t rng_seed);

}  // namespace radareye
