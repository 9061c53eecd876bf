#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "radareye/baselines.hpp"
#include "radareye/beamforming.hpp"
#include "radareye/cli/config_file.hpp"
#include "radareye/cli/frame_file.hpp"
#include "radareye/geometry.hpp"
#include "radareye/tracker.hpp"

namespace radareye::cli {

/// Settings shared by every command that turns frames into spectra.
struct PipelineOptions {
  std::size_t grid_n = 64;
  MountGeometry geometry;
  double carrier_frequency = 61.8e9;
  double bandwidth = 3.6e9;
  double element_spacing = 0.0;  ///< 0 selects half a carrier wavelength
  bool use_background = true;
  bool normalize = true;
  std::optional<double> los_floor;  ///< seconds; bins below it are masked
};

/// Frame -> [background removal] -> spectrum -> [LoS mask] -> [normalization].
class SpectrumPipeline {
 public:
  SpectrumPipeline(const PipelineOptions& options, std::size_t num_antennas, std::size_t num_freq_points,
                   std::optional<Frame> background);

  Spectrum process(const Frame& frame) const;
  const SteeringGrid& grid() const { return grid_; }

 private:
  PipelineOptions options_;
  SteeringGrid grid_;
  std::optional<Frame> background_;
};

FrameFile simulate(const SimulationConfig& config, std::uint64_t seed);

enum class Method { Peak, Smooth, Track, All };
Method parse_method(const std::string& text);

struct TrackOptions {
  PipelineOptions pipeline;
  TrackerParams tracker;
  BaselineParams baseline;
  Method method = Method::All;
  std::size_t warmup = 5;  ///< pre-pour slots averaged for the tracker's start bin
};

struct RunRow {
  std::int64_t slot = 0;
  std::optional<double> truth;
  std::optional<double> track;
  std::optional<double> peak;
  std::optional<double> smooth;
  double latency_us = 0.0;
};

struct RunSummary {
  std::optional<double> track_median_abs_error;  ///< meters
  std::optional<double> peak_median_abs_error;
  std::optional<double> smooth_median_abs_error;
  double median_latency_us = 0.0;
};

struct RunReport {
  Method method = Method::All;
  std::vector<RunRow> rows;
  RunSummary summary;
};

/// Replays a frame file through the pipeline and the selected estimators.
/// Latency covers the spectrum and the tracker update of each slot (or the
/// selected baseline when the tracker is not run); file IO is excluded.
RunReport run_track(const FrameFile& file, const TrackOptions& options);

void write_report_csv(std::ostream& out, const RunReport& report);
std::string summary_line(const RunReport& report);

/// Spectrum of one slot of a frame file.
Spectrum spectrum_for_slot(const FrameFile& file, std::size_t slot, const SpectrumPipeline& pipeline);

/// Header row of ToF bin centers (s), first column of AoA bin centers (rad).
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum, const SteeringGrid& grid);

struct BenchOptions {
  std::size_t grid_n = 64;
  std::size_t num_antennas = 4;
  std::size_t num_freq_points = 128;
  std::size_t q = 5;
  std::size_t repetitions = 1000;
  std::size_t warmup = 10;  ///< raised to 10 if smaller
  std::uint64_t seed = 1;
};

struct BenchResult {
  std::size_t repetitions = 0;
  double min_us = 0.0;
  double median_us = 0.0;
  double p99_us = 0.0;
  std::uint64_t max_step_evaluations = 0;
  std::uint64_t evaluation_bound = 0;  ///< N^2 (2Q+1)^2
};

/// Times one spectrum plus one tracker step per repetition on simulated pour frames.
BenchResult run_bench(const BenchOptions& options);

std::string format_number(double value);
double median(std::vector<double> values);

}  // namespace radareye::cli
