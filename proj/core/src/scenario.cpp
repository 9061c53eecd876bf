#include "radareye/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace radareye {

std::pair<double, double> InterfererSpec::position(std::int64_t slot) const {
  if (end_slot == start_slot) return {aoa_start, tof_start};
  const double u = static_cast<double>(slot - start_slot) / static_cast<double>(end_slot - start_slot);
  return {aoa_start + u * (aoa_end - aoa_start), tof_start + u * (tof_end - tof_start)};
}

double ScenarioConfig::level_at(std::int64_t slot) const {
  if (level_trajectory.empty()) return 0.0;
  if (slot <= level_trajectory.front().slot) return level_trajectory.front().level;
  for (std::size_t k = 1; k < level_trajectory.size(); ++k) {
    const auto& a = level_trajectory[k - 1];
    const auto& b = level_trajectory[k];
    if (slot <= b.slot) {
      const double u = static_cast<double>(slot - a.slot) / static_cast<double>(b.slot - a.slot);
      return a.level + u * (b.level - a.level);
    }
  }
  return level_trajectory.back().level;
}

void ScenarioConfig::validate() const {
  geometry.validate();
  if (num_slots < 2) throw std::invalid_argument("scenario: num_slots must be >= 2");
  if (!(slot_duration > 0.0)) throw std::invalid_argument("scenario: slot_duration must be positive");
  if (!(surface_magnitude > 0.0) || !std::isfinite(surface_magnitude))
    throw std::invalid_argument("scenario: surface_magnitude must be positive");
  if (std::isnan(snr_db)) throw std::invalid_argument("scenario: snr_db is NaN");

  for (std::size_t k = 0; k < level_trajectory.size(); ++k) {
    const auto& knot = level_trajectory[k];
    if (!(knot.level >= 0.0) || !(knot.level < geometry.radar_height))
      throw std::invalid_argument("scenario: level " + std::to_string(knot.level) +
                                  " outside [0, radar_height) at slot " + std::to_string(knot.slot));
    if (k > 0 && knot.slot <= level_trajectory[k - 1].slot)
      throw std::invalid_argument("scenario: level knots must have strictly increasing slots");
  }

  const GridExtent cover = resolved_coverage();
  cover.validate();
  for (std::size_t t = 0; t < num_slots; ++t) {
    const auto slot = static_cast<std::int64_t>(t);
    const double tof = tof_for_level(geometry, level_at(slot));
    if (!cover.contains(kPi / 2, tof))
      throw std::invalid_argument("scenario: surface path leaves grid coverage at slot " + std::to_string(slot));
    for (const auto& itf : interferers) {
      if (!itf.active(slot)) continue;
      const auto [aoa, itof] = itf.position(slot);
      if (!cover.contains(aoa, itof))
        throw std::invalid_argument("scenario: " + std::string(to_string(itf.label)) +
                                    " interferer leaves grid coverage at slot " + std::to_string(slot));
    }
  }
  for (const auto& itf : interferers) {
    if (itf.end_slot < itf.start_slot) throw std::invalid_argument("scenario: interferer end_slot before start_slot");
    if (!(itf.magnitude_ratio > 0.0)) throw std::invalid_argument("scenario: interferer magnitude must be positive");
    if (!(itf.presence >= 0.0 && itf.presence <= 1.0))
      throw std::invalid_argument("scenario: interferer presence must lie in [0, 1]");
    if (!(itf.aoa_jitter >= 0.0) || !(itf.tof_jitter >= 0.0))
      throw std::invalid_argument("scenario: interferer jitter must be non-negative");
  }
  for (const auto& p : static_clutter) p.validate();
}

double noise_std_for_snr(double signal_magnitude, double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  const double noise_power = signal_magnitude * signal_magnitude / std::pow(10.0, snr_db / 10.0);
  return std::sqrt(noise_power / 2.0);
}

LabeledFrameSequence static_fill_scenario(const RadarConfig& config, std::span<const double> steps, double snr_db,
                                          std::uint64_t seed, const MountGeometry& geometry) {
  geometry.validate();
  if (steps.empty()) throw std::invalid_argument("static_fill_scenario: no fill steps");
  RadarConfig noisy = config;
  noisy.noise_std = noise_std_for_snr(1.0, snr_db);

  LabeledFrameSequence out;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const double level = steps[s];
    if (!(level >= 0.0) || !(level < geometry.radar_height))
      throw std::invalid_argument("static_fill_scenario: level " + std::to_string(level) +
                                  " outside [0, radar_height)");
    const std::vector<PropagationPath> paths{
        PropagationPath{kPi / 2, tof_for_level(geometry, level), cplx(1.0, 0.0), PathLabel::LiquidSurface}};
    out.frames.push_back(synthesize_frame(noisy, paths, static_cast<std::int64_t>(s), seed));
    out.truth_levels.push_back(level);
    out.paths.push_back(paths);
  }
  out.background = synthesize_frame(noisy, {}, -1, seed);
  return out;
}

LabeledFrameSequence pouring_scenario(const RadarConfig& config, const ScenarioConfig& scenario, std::uint64_t seed) {
  scenario.validate();
  RadarConfig noisy = config;
  noisy.noise_std = noise_std_for_snr(scenario.surface_magnitude, scenario.snr_db);

  // Interferer presence and phase come from their own stream so that changing
  // them never perturbs the noise realization.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x9e3779b9u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const GridExtent cover = scenario.resolved_coverage();

  LabeledFrameSequence out;
  out.frames.reserve(scenario.num_slots);
  for (std::size_t t = 0; t < scenario.num_slots; ++t) {
    const auto slot = static_cast<std::int64_t>(t);
    const double level = scenario.level_at(slot);
    std::vector<PropagationPath> paths = scenario.static_clutter;
    paths.push_back(PropagationPath{kPi / 2, tof_for_level(scenario.geometry, level),
                                    cplx(scenario.surface_magnitude, 0.0), PathLabel::LiquidSurface});
    for (const auto& itf : scenario.interferers) {
      // Draw for every interferer on every slot to keep streams aligned.
      const double present = unit(rng);
      const double phase = 2.0 * kPi * unit(rng);
      const double jitter_aoa = (2.0 * unit(rng) - 1.0) * itf.aoa_jitter;
      const double jitter_tof = (2.0 * unit(rng) - 1.0) * itf.tof_jitter;
      if (!itf.active(slot) || present >= itf.presence) continue;
      const auto [nominal_aoa, nominal_tof] = itf.position(slot);
      const double aoa = std::clamp(nominal_aoa + jitter_aoa, cover.aoa_min, cover.aoa_max);
      const double tof = std::clamp(nominal_tof + jitter_tof, cover.tof_min, cover.tof_max);
      paths.push_back(
          PropagationPath{aoa, tof, std::polar(itf.magnitude_ratio * scenario.surface_magnitude, phase), itf.label});
    }
    out.frames.push_back(synthesize_frame(noisy, paths, slot, seed));
    out.truth_levels.push_back(level);
    out.paths.push_back(std::move(paths));
  }
  out.background = synthesize_frame(noisy, scenario.static_clutter, -1, seed);
  return out;
}

std::vector<double> default_fill_steps() {
  std::vector<double> steps;
  for (int s = 0; s <= 15; ++s) steps.push_back(0.074 * s / 15.0);
  return steps;
}

ScenarioConfig default_pour_scenario() {
  ScenarioConfig sc;
  sc.geometry = MountGeometry{0.30, 0.24};
  sc.num_slots = 60;
  sc.slot_duration = 0.25;
  sc.level_trajectory = {{0, 0.0}, {5, 0.0}, {59, 0.07}};
  sc.surface_magnitude = 1.0;
  sc.snr_db = 20.0;

  const double h = sc.geometry.radar_height;
  InterfererSpec gripper;
  gripper.label = PathLabel::Gripper;
  gripper.start_slot = 8;
  gripper.end_slot = 59;
  gripper.aoa_start = deg_to_rad(64.0);
  gripper.aoa_end = deg_to_rad(70.0);
  // starts 8.5 cm above the empty-container surface and ends just below it
  gripper.tof_start = range_to_tof(h - 0.085);
  gripper.tof_end = range_to_tof(h + 0.005);
  gripper.magnitude_ratio = 1.5;
  gripper.presence = 0.8;
  gripper.aoa_jitter = deg_to_rad(3.0);
  gripper.tof_jitter = range_to_tof(0.04);
  sc.interferers.push_back(gripper);

  sc.static_clutter = {
      PropagationPath{deg_to_rad(65.0), range_to_tof(h + 0.03), cplx(2.0, 0.0), PathLabel::Desktop},
      PropagationPath{deg_to_rad(75.0), range_to_tof(h - 0.095), cplx(0.0, 0.8), PathLabel::Other},
  };
  return sc;
}

}  // namespace radareye
