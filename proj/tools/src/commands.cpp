#include "radareye/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "radareye/scenario.hpp"

namespace radareye::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point start, Clock::time_point stop) {
  return std::chrono::duration<double, std::micro>(stop - start).count();
}

RadarConfig radar_for(const PipelineOptions& options, std::size_t num_antennas, std::size_t num_freq_points) {
  RadarConfig config;
  config.carrier_frequency = options.carrier_frequency;
  config.bandwidth = options.bandwidth;
  config.num_antennas = num_antennas;
  config.num_freq_points = num_freq_points;
  config.element_spacing = options.element_spacing;
  return config;
}

bool runs_tracker(Method m) { return m == Method::Track || m == Method::All; }
bool runs_peak(Method m) { return m == Method::Peak || m == Method::All; }
bool runs_smooth(Method m) { return m == Method::Smooth || m == Method::All; }

std::optional<double> median_abs_error(const std::vector<RunRow>& rows, std::optional<double> RunRow::*column) {
  std::vector<double> errors;
  for (const auto& row : rows)
    if (row.truth && row.*column) errors.push_back(std::abs(*(row.*column) - *row.truth));
  if (errors.empty()) return std::nullopt;
  return median(std::move(errors));
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

SpectrumPipeline::SpectrumPipeline(const PipelineOptions& options, std::size_t num_antennas,
                                   std::size_t num_freq_points, std::optional<Frame> background)
    : options_(options),
      grid_(radar_for(options, num_antennas, num_freq_points), options.grid_n, default_extent(options.geometry)),
      background_(options.use_background ? std::move(background) : std::nullopt) {
  if (options.use_background && !background_)
    throw std::invalid_argument("frame file has no background frame (use --no-background)");
}

Spectrum SpectrumPipeline::process(const Frame& frame) const {
  Spectrum spectrum = background_ ? compute_spectrum(grid_, subtract_background(frame, *background_), false)
                                  : compute_spectrum(grid_, frame, false);
  if (options_.los_floor) spectrum = apply_los_mask(std::move(spectrum), grid_, *options_.los_floor);
  if (options_.normalize) normalize(spectrum);
  return spectrum;
}

FrameFile simulate(const SimulationConfig& config, std::uint64_t seed) {
  LabeledFrameSequence seq = config.kind == ScenarioKind::StaticFill
                                 ? static_fill_scenario(config.radar, config.fill_levels, config.scenario.snr_db, seed,
                                                        config.scenario.geometry)
                                 : pouring_scenario(config.radar, config.scenario, seed);
  FrameFile file;
  file.num_antennas = static_cast<std::uint32_t>(config.radar.num_antennas);
  file.num_freq_points = static_cast<std::uint32_t>(config.radar.num_freq_points);
  file.background = std::move(seq.background);
  file.frames = std::move(seq.frames);
  std::vector<float> truth;
  for (double level : seq.truth_levels) truth.push_back(static_cast<float>(level));
  file.truth = std::move(truth);
  return file;
}

Method parse_method(const std::string& text) {
  if (text == "peak") return Method::Peak;
  if (text == "smooth") return Method::Smooth;
  if (text == "track") return Method::Track;
  if (text == "all") return Method::All;
  throw std::invalid_argument("unknown method '" + text + "' (expected peak|smooth|track|all)");
}

RunReport run_track(const FrameFile& file, const TrackOptions& options) {
  if (file.frames.empty()) throw std::invalid_argument("frame file contains no frames");
  options.tracker.validate();
  options.baseline.validate();
  if (options.warmup < 1) throw std::invalid_argument("warmup must be >= 1");

  const SpectrumPipeline pipeline(options.pipeline, file.num_antennas, file.num_freq_points, file.background);
  const auto& grid = pipeline.grid();
  const auto& geometry = options.pipeline.geometry;
  const std::size_t warmup = std::min(options.warmup, file.frames.size());

  RunReport report;
  report.method = options.method;
  SmoothedPeakTracker smoother(grid, options.baseline);
  std::optional<TrackerState> tracker;
  std::vector<Spectrum> warmup_spectra;
  std::optional<Spectrum> previous;

  for (std::size_t t = 0; t < file.frames.size(); ++t) {
    Frame frame = file.frames[t];
    frame.set_slot(static_cast<std::int64_t>(t));
    RunRow row;
    row.slot = static_cast<std::int64_t>(t);
    if (file.truth) row.truth = static_cast<double>((*file.truth)[t]);

    const auto start = Clock::now();
    Spectrum spectrum = pipeline.process(frame);
    if (runs_tracker(options.method)) {
      if (t < warmup) {
        warmup_spectra.push_back(spectrum);
        if (t + 1 == warmup) tracker = init_tracker(options.tracker, warmup_spectra);
      } else {
        step(*tracker, options.tracker, *previous, spectrum);
      }
    } else if (options.method == Method::Peak) {
      row.peak = level_from_tof(geometry, refine_peak(spectrum, grid, static_peak(spectrum).bin).tof);
    } else {
      row.smooth = level_from_tof(geometry, smoother.update(spectrum).tof);
    }
    row.latency_us = elapsed_us(start, Clock::now());

    if (runs_tracker(options.method)) {
      if (tracker) {
        row.track = estimate_level(*tracker, grid, geometry);
      } else {
        // Static phase before the start bin is fixed: running mean peak.
        Spectrum mean = warmup_spectra.front();
        for (std::size_t s = 1; s < warmup_spectra.size(); ++s)
          for (std::size_t b = 0; b < mean.values().size(); ++b) mean.values()[b] += warmup_spectra[s].values()[b];
        row.track = level_from_tof(geometry, refine_peak(mean, grid, static_peak(mean).bin).tof);
      }
    }
    if (options.method == Method::All) {
      row.peak = level_from_tof(geometry, refine_peak(spectrum, grid, static_peak(spectrum).bin).tof);
      row.smooth = level_from_tof(geometry, smoother.update(spectrum).tof);
    }
    previous = std::move(spectrum);
    report.rows.push_back(row);
  }

  std::vector<double> latencies;
  for (const auto& row : report.rows) latencies.push_back(row.latency_us);
  report.summary.median_latency_us = median(latencies);
  report.summary.track_median_abs_error = median_abs_error(report.rows, &RunRow::track);
  report.summary.peak_median_abs_error = median_abs_error(report.rows, &RunRow::peak);
  report.summary.smooth_median_abs_error = median_abs_error(report.rows, &RunRow::smooth);
  return report;
}

void write_report_csv(std::ostream& out, const RunReport& report) {
  const Method m = report.method;
  auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  auto error = [](const std::optional<double>& truth, const std::optional<double>& estimate) {
    return truth && estimate ? format_number(std::abs(*estimate - *truth)) : std::string();
  };

  out << "slot,truth_m";
  if (runs_tracker(m)) out << ",track_m,track_abs_err_m";
  if (runs_peak(m)) out << ",peak_m,peak_abs_err_m";
  if (runs_smooth(m)) out << ",smooth_m,smooth_abs_err_m";
  out << ",latency_us\n";
  for (const auto& row : report.rows) {
    out << std::to_string(row.slot) << ',' << cell(row.truth);
    if (runs_tracker(m)) out << ',' << cell(row.track) << ',' << error(row.truth, row.track);
    if (runs_peak(m)) out << ',' << cell(row.peak) << ',' << error(row.truth, row.peak);
    if (runs_smooth(m)) out << ',' << cell(row.smooth) << ',' << error(row.truth, row.smooth);
    out << ',' << format_number(row.latency_us) << '\n';
  }
}

std::string summary_line(const RunReport& report) {
  std::string line = "summary: slots=" + std::to_string(report.rows.size());
  auto add = [&line](const char* name, const std::optional<double>& err) {
    if (err) line += std::string(" ") + name + "_median_abs_err_cm=" + format_number(*err * 100.0);
  };
  add("track", report.summary.track_median_abs_error);
  add("peak", report.summary.peak_median_abs_error);
  add("smooth", report.summary.smooth_median_abs_error);
  line += " median_latency_ms=" + format_number(report.summary.median_latency_us / 1000.0);
  return line;
}

Spectrum spectrum_for_slot(const FrameFile& file, std::size_t slot, const SpectrumPipeline& pipeline) {
  if (slot >= file.frames.size())
    throw std::out_of_range("slot " + std::to_string(slot) + " out of range (file has " +
                            std::to_string(file.frames.size()) + " frames)");
  Frame frame = file.frames[slot];
  frame.set_slot(static_cast<std::int64_t>(slot));
  return pipeline.process(frame);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum, const SteeringGrid& grid) {
  out << "aoa_rad\\tof_s";
  for (double tof : grid.tof_bins()) out << ',' << format_number(tof);
  out << '\n';
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    out << format_number(grid.aoa_bins()[i]);
    for (std::size_t j = 0; j < spectrum.size(); ++j) out << ',' << format_number(spectrum.at(i, j));
    out << '\n';
  }
}

BenchResult run_bench(const BenchOptions& options) {
  if (options.grid_n < 2 || options.num_antennas < 1 || options.num_freq_points < 1 || options.q < 1 ||
      options.repetitions < 1)
    throw std::invalid_argument("bench parameters must be positive (grid n >= 2)");

  RadarConfig config = default_config();
  config.num_antennas = options.num_antennas;
  config.num_freq_points = options.num_freq_points;
  const ScenarioConfig scenario = default_pour_scenario();
  const LabeledFrameSequence seq = pouring_scenario(config, scenario, options.seed);
  std::vector<Frame> frames;
  for (const auto& f : seq.frames) frames.push_back(subtract_background(f, seq.background));

  const SteeringGrid grid(config, options.grid_n, scenario.resolved_coverage());
  TrackerParams params;
  params.q = options.q;

  Spectrum previous = compute_spectrum(grid, frames.front(), true);
  previous.set_slot(0);
  const Spectrum warm[] = {previous};
  TrackerState state = init_tracker(params, warm);

  const std::size_t warmup = std::max<std::size_t>(options.warmup, 10);
  std::vector<double> samples;
  samples.reserve(options.repetitions);
  BenchResult result;
  for (std::size_t r = 0; r < warmup + options.repetitions; ++r) {
    const Frame& frame = frames[(r + 1) % frames.size()];
    const auto start = Clock::now();
    Spectrum spectrum = compute_spectrum(grid, frame, true);
    spectrum.set_slot(previous.slot() + 1);
    step(state, params, previous, spectrum);
    const auto stop = Clock::now();
    previous = std::move(spectrum);
    result.max_step_evaluations = std::max(result.max_step_evaluations, state.last_step_evaluations);
    if (r >= warmup) samples.push_back(elapsed_us(start, stop));
  }

  std::sort(samples.begin(), samples.end());
  result.repetitions = samples.size();
  result.min_us = samples.front();
  result.median_us = median(samples);
  const auto p99_index = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(samples.size()))) - 1;
  result.p99_us = samples[std::min(p99_index, samples.size() - 1)];
  const std::uint64_t width = 2 * options.q + 1;
  result.evaluation_bound = std::uint64_t{options.grid_n} * options.grid_n * width * width;
  return result;
}

}  // namespace radareye::cli
