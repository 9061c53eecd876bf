#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "radareye/cli/commands.hpp"
#include "radareye/cli/config_file.hpp"
#include "radareye/cli/frame_file.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

using namespace radareye;
using namespace radareye::cli;

void add_pipeline_flags(CLI::App& cmd, PipelineOptions& p, std::optional<double>& los_floor_ns) {
  cmd.add_option("--grid-n", p.grid_n, "AoA-ToF grid size N")->capture_default_str()->check(CLI::Range(2, 4096));
  cmd.add_option("--radar-height", p.geometry.radar_height, "radar height above the container bottom [m]")
      ->capture_default_str();
  cmd.add_option("--max-level", p.geometry.max_level, "usable container depth [m]")->capture_default_str();
  cmd.add_option("--carrier", p.carrier_frequency, "carrier frequency [Hz]")->capture_default_str();
  cmd.add_option("--bandwidth", p.bandwidth, "sweep bandwidth [Hz]")->capture_default_str();
  cmd.add_option("--spacing", p.element_spacing, "element spacing [m], 0 = half wavelength")->capture_default_str();
  cmd.add_flag("!--no-background", p.use_background, "do not subtract the background frame");
  cmd.add_flag("--normalize,!--no-normalize", p.normalize, "normalize each spectrum to unit maximum");
  cmd.add_option("--los-floor-ns", los_floor_ns, "mask ToF bins below this delay [ns]");
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radareye: mmWave liquid-level simulation, tracking and benchmarking"};
  app.require_subcommand(1);

  // simulate
  std::string sim_config, sim_output;
  std::uint64_t seed = 1;
  auto* sim = app.add_subcommand("simulate", "synthesize a frame file from a scenario config");
  sim->add_option("config", sim_config, "scenario config file")->required()->check(CLI::ExistingFile);
  sim->add_option("-o,--output", sim_output, "output frame file")->required();
  sim->add_option("--seed", seed, "random seed")->capture_default_str();

  // track
  TrackOptions track_opts;
  track_opts.pipeline.normalize = true;
  std::optional<double> track_los_ns;
  std::string track_input, track_output, method = "all";
  auto* track = app.add_subcommand("track", "replay a frame file through the estimators");
  track->add_option("frames", track_input, "frame file")->required()->check(CLI::ExistingFile);
  track->add_option("-o,--output", track_output, "per-slot CSV (default stdout)");
  track->add_option("--method", method, "peak|smooth|track|all")
      ->check(CLI::IsMember({"peak", "smooth", "track", "all"}))
      ->capture_default_str();
  track->add_option("--q", track_opts.tracker.q, "transition neighborhood radius Q [bins]")->capture_default_str();
  track->add_option("--omega", track_opts.tracker.omega, "displacement weight")->capture_default_str();
  track->add_option("--omega-theta", track_opts.tracker.omega_theta, "AoA displacement weight")->capture_default_str();
  track->add_option("--omega-tau", track_opts.tracker.omega_tau, "ToF displacement weight")->capture_default_str();
  track->add_flag("--free-start", track_opts.tracker.free_start, "do not pin the path to the warm-up peak");
  track->add_option("--warmup", track_opts.warmup, "static slots used to pick the start bin")->capture_default_str();
  track->add_option("--top-n", track_opts.baseline.top_n, "bins pooled per frame by the smoothing baseline")
      ->capture_default_str();
  track->add_option("--window", track_opts.baseline.window, "frames pooled by the smoothing baseline")
      ->capture_default_str();
  track->add_option("--seed", seed, "accepted for symmetry with simulate; replay is deterministic");
  add_pipeline_flags(*track, track_opts.pipeline, track_los_ns);

  // spectrum
  PipelineOptions spec_opts;
  spec_opts.normalize = false;
  std::optional<double> spec_los_ns;
  std::string spec_input, spec_output;
  std::size_t spec_slot = 0;
  auto* spectrum = app.add_subcommand("spectrum", "export one slot's AoA-ToF spectrum as CSV");
  spectrum->add_option("frames", spec_input, "frame file")->required()->check(CLI::ExistingFile);
  spectrum->add_option("--slot", spec_slot, "slot index")->capture_default_str();
  spectrum->add_option("-o,--output", spec_output, "CSV output (default stdout)");
  add_pipeline_flags(*spectrum, spec_opts, spec_los_ns);

  // bench
  BenchOptions bench_opts;
  bool count_evals = false;
  auto* bench = app.add_subcommand("bench", "measure per-update latency (spectrum + tracker step)");
  bench->add_option("--grid-n", bench_opts.grid_n, "grid size N")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--antennas", bench_opts.num_antennas, "M")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--freq-points", bench_opts.num_freq_points, "K")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--q", bench_opts.q, "Q")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--reps", bench_opts.repetitions, "timed repetitions")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_opts.seed, "scenario seed")->capture_default_str();
  bench->add_flag("--count-evals", count_evals, "report transition evaluations per step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) {
      const SimulationConfig config = load_simulation_config(sim_config);
      write_frame_file(sim_output, simulate(config, seed));
      std::cerr << "wrote " << sim_output << "\n";
    } else if (*track) {
      track_opts.method = parse_method(method);
      if (track_los_ns) track_opts.pipeline.los_floor = *track_los_ns * 1e-9;
      const FrameFile file = read_frame_file(track_input);
      const RunReport report = run_track(file, track_opts);
      std::ofstream out_file;
      write_report_csv(open_output(track_output, out_file), report);
      std::cerr << summary_line(report) << "\n";
    } else if (*spectrum) {
      if (spec_los_ns) spec_opts.los_floor = *spec_los_ns * 1e-9;
      const FrameFile file = read_frame_file(spec_input);
      const SpectrumPipeline pipeline(spec_opts, file.num_antennas, file.num_freq_points, file.background);
      const Spectrum s = spectrum_for_slot(file, spec_slot, pipeline);
      std::ofstream out_file;
      write_spectrum_csv(open_output(spec_output, out_file), s, pipeline.grid());
    } else if (*bench) {
      const BenchResult r = run_bench(bench_opts);
      std::cout << "reps=" << r.repetitions << " N=" << bench_opts.grid_n << " M=" << bench_opts.num_antennas
                << " K=" << bench_opts.num_freq_points << " Q=" << bench_opts.q << "\n"
                << "latency_us min=" << format_number(r.min_us) << " median=" << format_number(r.median_us)
                << " p99=" << format_number(r.p99_us) << "\n";
      if (count_evals)
        std::cout << "evaluations_per_step max=" << r.max_step_evaluations << " bound=" << r.evaluation_bound << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitData;
  } catch (const FrameFileError& e) {
    std::cerr << "frame file error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
