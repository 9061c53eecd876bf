#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "radareye/geometry.hpp"
#include "radareye/radar_model.hpp"

namespace radareye::detail {

// f * delay with the integer part removed, evaluated in extended precision so
// that phases of ~100+ cycles keep full double accuracy after reduction.
inline double fractional_cycles(long double frequency, long double delay) {
  const long double cycles = frequency * delay;
  return static_cast<double>(cycles - std::nearbyint(cycles));
}

// f_k in extended precision; one double ulp at 60 GHz already shifts the
// phase of a nanosecond delay by ~1e-13 rad.
inline std::vector<long double> precise_frequencies(const RadarConfig& config) {
  const std::size_t K = config.num_freq_points;
  std::vector<long double> f(K, config.carrier_frequency);
  if (K == 1) return f;
  const long double lo = static_cast<long double>(config.carrier_frequency) - config.bandwidth / 2.0L;
  const long double step = static_cast<long double>(config.bandwidth) / static_cast<long double>(K - 1);
  for (std::size_t k = 0; k < K; ++k) f[k] = lo + static_cast<long double>(k) * step;
  return f;
}

// exp(-j 2 pi cycles)
inline std::complex<double> unit_phasor(double cycles) {
  const double phase = -2.0 * kPi * cycles;
  return {std::cos(phase), std::sin(phase)};
}

}  // namespace radareye::detail
