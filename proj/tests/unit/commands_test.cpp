#include "radareye/cli/commands.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include "radareye/scenario.hpp"

namespace radareye::cli {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

SimulationConfig small_pour() {
  SimulationConfig cfg;
  cfg.kind = ScenarioKind::Pour;
  cfg.scenario = default_pour_scenario();
  cfg.scenario.num_slots = 20;
  cfg.scenario.level_trajectory = {{0, 0.0}, {5, 0.0}, {19, 0.03}};
  for (auto& itf : cfg.scenario.interferers) itf.end_slot = 19;
  return cfg;
}

TEST(Simulate, IsDeterministic) {
  const SimulationConfig cfg = small_pour();
  EXPECT_EQ(encode_frame_file(simulate(cfg, 5)), encode_frame_file(simulate(cfg, 5)));
  EXPECT_NE(encode_frame_file(simulate(cfg, 5)), encode_frame_file(simulate(cfg, 6)));
  const FrameFile file = simulate(cfg, 5);
  EXPECT_EQ(file.frames.size(), 20u);
  ASSERT_TRUE(file.truth.has_value());
  EXPECT_TRUE(file.background.has_value());
}

TEST(Simulate, StaticFillFromBundledConfig) {
  const FrameFile file = simulate(load_simulation_config(RADAREYE_CONFIG_DIR "/static_fill.cfg"), 1);
  EXPECT_EQ(file.frames.size(), 16u);
  EXPECT_FLOAT_EQ(file.truth->back(), 0.074f);
}

TEST(ParseMethod, KnownNames) {
  EXPECT_EQ(parse_method("peak"), Method::Peak);
  EXPECT_EQ(parse_method("smooth"), Method::Smooth);
  EXPECT_EQ(parse_method("track"), Method::Track);
  EXPECT_EQ(parse_method("all"), Method::All);
  EXPECT_THROW(parse_method("viterbi"), std::invalid_argument);
}

TEST(RunTrack, AllMethodsProduceEveryColumn) {
  const FrameFile file = simulate(small_pour(), 1);
  const RunReport report = run_track(file, TrackOptions{});
  ASSERT_EQ(report.rows.size(), 20u);
  for (const auto& row : report.rows) {
    EXPECT_TRUE(row.track && row.peak && row.smooth);
    EXPECT_GT(row.latency_us, 0.0);
  }
  EXPECT_TRUE(report.summary.track_median_abs_error && report.summary.peak_median_abs_error &&
              report.summary.smooth_median_abs_error);

  std::ostringstream csv;
  write_report_csv(csv, report);
  const auto rows = lines(csv.str());
  ASSERT_EQ(rows.size(), 21u);
  EXPECT_EQ(rows[0], "slot,truth_m,track_m,track_abs_err_m,peak_m,peak_abs_err_m,smooth_m,smooth_abs_err_m,latency_us");
  for (std::size_t r = 1; r < rows.size(); ++r) EXPECT_EQ(split(rows[r], ',').size(), 9u);

  const std::string summary = summary_line(report);
  EXPECT_EQ(summary.rfind("summary: slots=20 track_median_abs_err_cm=", 0), 0u) << summary;
  EXPECT_NE(summary.find("median_latency_ms="), std::string::npos);
}

TEST(RunTrack, SingleMethodColumns) {
  const FrameFile file = simulate(small_pour(), 1);
  for (auto [method, header] : {std::pair{Method::Peak, "slot,truth_m,peak_m,peak_abs_err_m,latency_us"},
                                std::pair{Method::Smooth, "slot,truth_m,smooth_m,smooth_abs_err_m,latency_us"},
                                std::pair{Method::Track, "slot,truth_m,track_m,track_abs_err_m,latency_us"}}) {
    TrackOptions opts;
    opts.method = method;
    const RunReport report = run_track(file, opts);
    std::ostringstream csv;
    write_report_csv(csv, report);
    EXPECT_EQ(lines(csv.str())[0], header);
    EXPECT_EQ(report.rows[3].track.has_value(), method == Method::Track);
    EXPECT_EQ(report.rows[3].peak.has_value(), method == Method::Peak);
    EXPECT_EQ(report.rows[3].smooth.has_value(), method == Method::Smooth);
  }
}

TEST(RunTrack, MissingTruthLeavesErrorColumnsEmpty) {
  FrameFile file = simulate(small_pour(), 1);
  file.truth.reset();
  const RunReport report = run_track(file, TrackOptions{});
  EXPECT_FALSE(report.summary.track_median_abs_error.has_value());
  std::ostringstream csv;
  write_report_csv(csv, report);
  const auto cells = split(lines(csv.str())[1], ',');
  ASSERT_EQ(cells.size(), 9u);
  EXPECT_TRUE(cells[1].empty());
  EXPECT_FALSE(cells[2].empty());
  EXPECT_TRUE(cells[3].empty());
  EXPECT_TRUE(cells[5].empty());
  EXPECT_TRUE(cells[7].empty());
  const std::string summary = summary_line(report);
  EXPECT_EQ(summary.find("err"), std::string::npos) << summary;
}

TEST(RunTrack, RequiresBackgroundUnlessDisabled) {
  FrameFile file = simulate(small_pour(), 1);
  file.background.reset();
  EXPECT_THROW(run_track(file, TrackOptions{}), std::invalid_argument);
  TrackOptions opts;
  opts.pipeline.use_background = false;
  EXPECT_NO_THROW(run_track(file, opts));
}

TEST(RunTrack, StaticFillPeakIsAccurate) {
  const FrameFile file = simulate(load_simulation_config(RADAREYE_CONFIG_DIR "/static_fill.cfg"), 1);
  TrackOptions opts;
  opts.method = Method::Peak;
  EXPECT_LT(*run_track(file, opts).summary.peak_median_abs_error, 0.002);
}

TEST(SpectrumCsv, ShapeAndPeak) {
  SimulationConfig cfg;
  cfg.kind = ScenarioKind::StaticFill;
  cfg.fill_levels = {0.03};
  const FrameFile file = simulate(cfg, 1);
  PipelineOptions opts;
  opts.grid_n = 4;
  opts.normalize = false;
  const SpectrumPipeline pipeline(opts, 4, 128, file.background);
  const Spectrum s = spectrum_for_slot(file, 0, pipeline);
  std::ostringstream out;
  write_spectrum_csv(out, s, pipeline.grid());
  const auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& r : rows) EXPECT_EQ(split(r, ',').size(), 5u);
  EXPECT_EQ(split(rows[0], ',')[0], "aoa_rad\\tof_s");
  EXPECT_THROW(spectrum_for_slot(file, 1, pipeline), std::out_of_range);
}

TEST(SpectrumCsv, ZeroFrameIsAllZeros) {
  FrameFile file;
  file.num_antennas = 4;
  file.num_freq_points = 128;
  file.frames.push_back(Frame(0, 4, 128));
  PipelineOptions opts;
  opts.grid_n = 3;
  opts.use_background = false;
  const SpectrumPipeline pipeline(opts, 4, 128, std::nullopt);
  std::ostringstream out;
  write_spectrum_csv(out, spectrum_for_slot(file, 0, pipeline), pipeline.grid());
  const auto rows = lines(out.str());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto cells = split(rows[r], ',');
    for (std::size_t c = 1; c < cells.size(); ++c) EXPECT_EQ(cells[c], "0");
  }
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

TEST(FormatNumber, IgnoresGlobalLocale) {
  const std::locale previous = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  RunReport report;
  report.method = Method::Peak;
  RunRow row;
  row.slot = 1234;
  row.truth = 0.5;
  row.peak = 0.25;
  row.latency_us = 1500.5;
  report.rows.push_back(row);
  std::ostringstream out;
  write_report_csv(out, report);
  const std::string number = format_number(0.125);
  std::locale::global(previous);
  EXPECT_EQ(number, "0.125");
  EXPECT_EQ(lines(out.str())[1], "1234,0.5,0.25,0.25,1500.5");
}

TEST(FormatNumber, RoundTrips) {
  for (double v : {0.0, 1.0, -2.5, 1.2345678901234567e-9, 0.074}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_THROW(median({}), std::invalid_argument);
}

TEST(Bench, SingleRepetitionHasEqualStatistics) {
  BenchOptions opts;
  opts.grid_n = 16;
  opts.repetitions = 1;
  const BenchResult r = run_bench(opts);
  EXPECT_EQ(r.repetitions, 1u);
  EXPECT_EQ(r.min_us, r.median_us);
  EXPECT_EQ(r.median_us, r.p99_us);
  EXPECT_EQ(r.evaluation_bound, 16u * 16u * 121u);
  EXPECT_LE(r.max_step_evaluations, r.evaluation_bound);
}

TEST(Bench, DoublingQRoughlyQuadruplesWork) {
  BenchOptions opts;
  opts.grid_n = 128;
  opts.num_freq_points = 16;
  opts.repetitions = 2;
  opts.q = 4;
  const BenchResult small = run_bench(opts);
  opts.q = 8;
  const BenchResult large = run_bench(opts);
  const double ratio = double(large.max_step_evaluations) / double(small.max_step_evaluations);
  EXPECT_GT(ratio, 3.4);
  EXPECT_LE(ratio, 4.0);
}

}  // namespace
}  // namespace radareye::cli
