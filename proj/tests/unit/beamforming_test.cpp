#include "radareye/beamforming.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "radareye/scenario.hpp"

namespace radareye {
namespace {

using testing::direct_beam;
using testing::steering_entry;

const MountGeometry kMount{0.30, 0.24};

SteeringGrid default_grid(std::size_t n = 64) { return build_grid(default_config(), n, default_extent(kMount)); }

Frame on_grid_frame(const SteeringGrid& grid, const std::vector<std::pair<Bin, cplx>>& paths, std::int64_t slot = 0) {
  std::vector<PropagationPath> p;
  for (const auto& [bin, alpha] : paths)
    p.push_back({grid.aoa_bins()[bin.aoa], grid.tof_bins()[bin.tof], alpha, PathLabel::Other});
  return synthesize_frame(default_config(), p, slot, 1);
}

TEST(SteeringGrid, BinsAreUniformAndCoverExtent) {
  const SteeringGrid grid = default_grid(16);
  const auto& e = grid.extent();
  EXPECT_EQ(grid.aoa_bins().front(), e.aoa_min);
  EXPECT_EQ(grid.aoa_bins().back(), e.aoa_max);
  EXPECT_EQ(grid.tof_bins().front(), e.tof_min);
  EXPECT_EQ(grid.tof_bins().back(), e.tof_max);
  for (std::size_t i = 1; i < 16; ++i) {
    EXPECT_GT(grid.aoa_bins()[i], grid.aoa_bins()[i - 1]);
    EXPECT_GT(grid.tof_bins()[i], grid.tof_bins()[i - 1]);
  }
  EXPECT_THROW(build_grid(default_config(), 1, e), std::invalid_argument);
}

TEST(SteeringGrid, SingleToneWholeCyclesGiveUnitEntries) {
  RadarConfig cfg;
  cfg.carrier_frequency = 60e9;
  cfg.bandwidth = 0.0;
  cfg.num_freq_points = 1;
  const GridExtent extent{kPi / 2 - 0.1, kPi / 2 + 0.1, 1e-9, 3e-9};
  const SteeringGrid grid = build_grid(cfg, 3, extent);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t m = 0; m < cfg.num_antennas; ++m) {
      const cplx phi = grid.steering({1, j}, m, 0);
      EXPECT_NEAR(phi.real(), 1.0, 1e-12);
      EXPECT_NEAR(phi.imag(), 0.0, 1e-12);
    }
}

TEST(SteeringGrid, EntriesHaveUnitModulus) {
  const SteeringGrid grid = default_grid(8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t k = 0; k < 128; k += 7) EXPECT_NEAR(std::abs(grid.steering({i, j}, m, k)), 1.0, 1e-14);
}

TEST(SteeringGrid, RandomEntriesMatchDefinition) {
  const RadarConfig cfg = default_config();
  const SteeringGrid grid = default_grid(64);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> bin(0, 63), ant(0, 3), freq(0, 127);
  for (int trial = 0; trial < 10; ++trial) {
    const Bin b{bin(rng), bin(rng)};
    const std::size_t m = ant(rng), k = freq(rng);
    const auto want = steering_entry(cfg, grid.aoa_bins()[b.aoa], grid.tof_bins()[b.tof], m, k);
    const cplx got = grid.steering(b, m, k);
    EXPECT_LT(std::abs(got - cplx(double(want.real()), double(want.imag()))), 1e-14)
        << "bin (" << b.aoa << "," << b.tof << ") m=" << m << " k=" << k;
  }
}

TEST(SteeringGrid, NearestBinClamps) {
  const SteeringGrid grid = default_grid(16);
  EXPECT_EQ(grid.nearest_bin(grid.aoa_bins()[5], grid.tof_bins()[9]), (Bin{5, 9}));
  EXPECT_EQ(grid.nearest_bin(0.0, 0.0), (Bin{0, 0}));
  EXPECT_EQ(grid.nearest_bin(kPi, 1.0), (Bin{15, 15}));
}

TEST(Spectrum, ZeroFrameGivesZeroSpectrum) {
  const SteeringGrid grid = default_grid(16);
  const Spectrum s = compute_spectrum(grid, Frame(0, 4, 128), true);
  for (double v : s.values()) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(s.normalized());
}

TEST(Spectrum, OnGridPathReachesCoherentGain) {
  const SteeringGrid grid = default_grid(64);
  const Bin target{32, 40};
  const Spectrum s = compute_spectrum(grid, on_grid_frame(grid, {{target, {1.0, 0.0}}}), false);
  EXPECT_NEAR(s.at(target), 512.0, 512.0 * 1e-9);
  EXPECT_EQ(static_peak(s).bin, target);
  for (double v : s.values()) EXPECT_LE(v, 512.0 * (1.0 + 1e-12));
}

TEST(Spectrum, MatchesDirectSummation) {
  const RadarConfig cfg = default_config();
  const SteeringGrid grid = default_grid(12);
  std::vector<PropagationPath> paths{{deg_to_rad(83.0), 1.4e-9, {0.7, 0.2}, PathLabel::Other},
                                     {deg_to_rad(101.0), 1.9e-9, {-0.3, 0.9}, PathLabel::Other}};
  RadarConfig noisy = cfg;
  noisy.noise_std = 0.2;
  const Frame frame = synthesize_frame(noisy, paths, 5, 77);
  const Spectrum s = compute_spectrum(grid, frame, false);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) {
      const double want = double(direct_beam(cfg, grid.aoa_bins()[i], grid.tof_bins()[j], frame));
      EXPECT_NEAR(s.at(i, j), want, 1e-9 * std::max(1.0, want));
    }
}

TEST(Spectrum, TwoSeparatedPathsShowBothPeaks) {
  const SteeringGrid grid = default_grid(64);
  const Bin a{16, 8}, b{48, 56};
  const Frame frame = on_grid_frame(grid, {{a, {1.0, 0.0}}, {b, {0.5, 0.0}}});
  const Spectrum s = compute_spectrum(grid, frame, false);
  EXPECT_NEAR(s.at(a), 512.0, 0.1 * 512.0);
  EXPECT_NEAR(s.at(b), 256.0, 0.1 * 512.0);
  EXPECT_EQ(static_peak(s).bin, a);
  const RadarConfig cfg = default_config();
  EXPECT_NEAR(s.at(b), double(direct_beam(cfg, grid.aoa_bins()[b.aoa], grid.tof_bins()[b.tof], frame)), 1e-9);
}

TEST(Spectrum, NormalizationSetsMaxToOne) {
  const SteeringGrid grid = default_grid(32);
  const Spectrum s = compute_spectrum(grid, on_grid_frame(grid, {{{3, 4}, {2.5, -1.0}}}), true);
  double peak = 0.0;
  for (double v : s.values()) peak = std::max(peak, v);
  EXPECT_NEAR(peak, 1.0, 1e-15);
  EXPECT_TRUE(s.normalized());
}

TEST(Spectrum, RejectsShapeMismatch) {
  const SteeringGrid grid = default_grid(8);
  EXPECT_THROW(compute_spectrum(grid, Frame(0, 3, 128), false), std::invalid_argument);
  EXPECT_THROW(compute_spectrum(grid, Frame(0, 4, 64), false), std::invalid_argument);
}

TEST(Spectrum, InvariantToGlobalPhase) {
  const SteeringGrid grid = default_grid(16);
  RadarConfig cfg = default_config();
  cfg.noise_std = 0.3;
  const std::vector<PropagationPath> paths{{deg_to_rad(95.0), 1.5e-9, {1.0, 0.0}, PathLabel::Other}};
  const Frame frame = synthesize_frame(cfg, paths, 0, 3);
  Frame rotated = frame;
  for (auto& s : rotated.samples()) s *= std::polar(1.0, 1.234);
  const Spectrum a = compute_spectrum(grid, frame, false);
  const Spectrum b = compute_spectrum(grid, rotated, false);
  for (std::size_t x = 0; x < a.values().size(); ++x) EXPECT_NEAR(a.values()[x], b.values()[x], 1e-10);
}

TEST(Spectrum, ArgmaxInvariantToScale) {
  const SteeringGrid grid = default_grid(32);
  RadarConfig cfg = default_config();
  cfg.noise_std = 0.5;
  const std::vector<PropagationPath> paths{{deg_to_rad(88.0), 1.2e-9, {1.0, 0.0}, PathLabel::Other}};
  const Frame frame = synthesize_frame(cfg, paths, 0, 5);
  for (double c : {1e-6, 0.3, 7.0, 1e5}) {
    Frame scaled = frame;
    for (auto& s : scaled.samples()) s *= c;
    EXPECT_EQ(static_peak(compute_spectrum(grid, scaled, false)).bin,
              static_peak(compute_spectrum(grid, frame, false)).bin);
  }
}

TEST(Spectrum, BoundedByTotalSampleMagnitude) {
  const SteeringGrid grid = default_grid(16);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Frame frame(0, 4, 128);
    double total = 0.0;
    for (auto& s : frame.samples()) {
      s = {g(rng), g(rng)};
      total += std::abs(s);
    }
    for (double v : compute_spectrum(grid, frame, false).values()) EXPECT_LE(v, total * (1.0 + 1e-12));
  }
}

TEST(Spectrum, DistantBinsDoNotReachCoherentGain) {
  const SteeringGrid grid = default_grid(64);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, 63);
  for (int trial = 0; trial < 20; ++trial) {
    const Bin target{pick(rng), pick(rng)};
    const Spectrum s = compute_spectrum(grid, on_grid_frame(grid, {{target, {1.0, 0.0}}}), false);
    for (std::size_t j = 0; j < 64; ++j) {
      if (j + 20 > target.tof && j < target.tof + 20) continue;
      for (std::size_t i = 0; i < 64; ++i) EXPECT_LT(s.at(i, j), 512.0 * 0.5);
    }
  }
}

TEST(Background, SubtractingItselfGivesZero) {
  RadarConfig cfg = default_config();
  cfg.noise_std = 0.1;
  const std::vector<PropagationPath> clutter{{deg_to_rad(70.0), 2.1e-9, {2.0, 0.0}, PathLabel::Desktop}};
  const Frame bg = synthesize_frame(cfg, clutter, -1, 4);
  const Frame diff = subtract_background(bg, bg);
  for (const auto& s : diff.samples()) EXPECT_EQ(s, cplx(0.0, 0.0));
  EXPECT_THROW(subtract_background(bg, Frame(0, 4, 64)), std::invalid_argument);
}

TEST(Background, RemovesStaticClutterExactly) {
  const RadarConfig cfg = default_config();
  const PropagationPath clutter{deg_to_rad(70.0), 2.1e-9, {2.0, 0.0}, PathLabel::Desktop};
  const PropagationPath surface{kPi / 2, 1.7e-9, {1.0, 0.0}, PathLabel::LiquidSurface};
  const std::vector<PropagationPath> both{clutter, surface}, only_clutter{clutter}, only_surface{surface};
  const Frame diff = subtract_background(synthesize_frame(cfg, both, 3, 1), synthesize_frame(cfg, only_clutter, -1, 1));
  const Frame want = synthesize_frame(cfg, only_surface, 3, 1);
  EXPECT_EQ(diff.slot(), 3);
  for (std::size_t s = 0; s < diff.size(); ++s) EXPECT_LT(std::abs(diff.samples()[s] - want.samples()[s]), 1e-12);
}

TEST(Background, NoiseResidualMatchesTwoIndependentDraws) {
  // The residual of two independent noise draws has variance 4 sigma^2 per
  // complex sample, so E P^2 = 4 sigma^2 M K at any bin.
  const SteeringGrid grid = default_grid(16);
  RadarConfig cfg = default_config();
  cfg.noise_std = noise_std_for_snr(1.0, 20.0);
  const PropagationPath clutter{deg_to_rad(70.0), 2.1e-9, {2.0, 0.0}, PathLabel::Desktop};
  const PropagationPath surface{kPi / 2, 1.7e-9, {1.0, 0.0}, PathLabel::LiquidSurface};
  const std::vector<PropagationPath> scene{clutter, surface}, background{clutter};
  const Bin truth = grid.nearest_bin(surface.aoa, surface.tof);
  double sum_sq = 0.0;
  std::size_t samples = 0, hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Frame bg = synthesize_frame(cfg, background, -1, seed);
    const Spectrum noise_only = compute_spectrum(grid, subtract_background(synthesize_frame(cfg, background, 0, seed), bg), false);
    for (double v : noise_only.values()) sum_sq += v * v;
    samples += noise_only.values().size();
    const Spectrum s = compute_spectrum(grid, subtract_background(synthesize_frame(cfg, scene, 0, seed), bg), false);
    const Bin peak = static_peak(s).bin;
    if (peak.tof + 1 >= truth.tof && peak.tof <= truth.tof + 1) ++hits;
  }
  const double expected = 4.0 * cfg.noise_std * cfg.noise_std * 512.0;
  EXPECT_NEAR(sum_sq / double(samples), expected, 0.1 * expected);
  EXPECT_EQ(hits, 100u);
}

TEST(LosMask, FloorSelectsLeadingColumns) {
  const SteeringGrid grid = default_grid(10);
  const Spectrum base(0, 10);
  EXPECT_EQ(apply_los_mask(base, grid, grid.tof_bins().front()).unmasked_count(), 100u);
  EXPECT_EQ(apply_los_mask(base, grid, 0.0).unmasked_count(), 100u);
  const Spectrum all_but_last = apply_los_mask(base, grid, grid.tof_bins().back());
  EXPECT_EQ(all_but_last.unmasked_count(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_FALSE(all_but_last.masked(i, 9));
  const double mid = 0.5 * (grid.tof_bins()[4] + grid.tof_bins()[5]);
  const Spectrum half = apply_los_mask(base, grid, mid);
  EXPECT_EQ(half.unmasked_count(), 50u);
  EXPECT_TRUE(half.masked(0, 4));
  EXPECT_FALSE(half.masked(0, 5));
}

TEST(LosMask, NormalizationIgnoresMaskedBins) {
  const SteeringGrid grid = default_grid(4);
  Spectrum s(0, 4, std::vector<double>(16, 1.0));
  s.at(0, 0) = 10.0;
  s = apply_los_mask(std::move(s), grid, grid.tof_bins()[1]);
  normalize(s);
  EXPECT_DOUBLE_EQ(s.at(1, 1), 1.0);
  EXPECT_EQ(static_peak(s).bin, (Bin{0, 1}));
}

TEST(StaticPeak, FindsSinglePath) {
  const SteeringGrid grid = default_grid(32);
  const Spectrum s = compute_spectrum(grid, on_grid_frame(grid, {{{21, 7}, {1.0, 0.0}}}), true);
  const Peak p = static_peak(s);
  EXPECT_EQ(p.bin, (Bin{21, 7}));
  EXPECT_NEAR(p.magnitude, 1.0, 1e-15);
}

TEST(StaticPeak, TiesPreferSmallestTofThenAoa) {
  EXPECT_EQ(static_peak(Spectrum(0, 5, std::vector<double>(25, 0.5))).bin, (Bin{0, 0}));
  Spectrum s(0, 5);
  s.at(3, 1) = 1.0;
  s.at(1, 2) = 1.0;
  EXPECT_EQ(static_peak(s).bin, (Bin{3, 1}));
  s.at(0, 1) = 1.0;
  EXPECT_EQ(static_peak(s).bin, (Bin{0, 1}));
}

TEST(StaticPeak, AllMaskedThrows) {
  const SteeringGrid grid = default_grid(4);
  const Spectrum s = apply_los_mask(Spectrum(0, 4), grid, 1.0);
  EXPECT_THROW(static_peak(s), std::domain_error);
}

TEST(ParabolicOffset, Cases) {
  EXPECT_DOUBLE_EQ(*parabolic_offset(0.5, 1.0, 0.5), 0.0);
  EXPECT_NEAR(*parabolic_offset(0.5, 1.0, 0.0), -1.0 / 6.0, 1e-15);
  EXPECT_NEAR(*parabolic_offset(0.0, 1.0, 0.5), 1.0 / 6.0, 1e-15);
  EXPECT_FALSE(parabolic_offset(1.0, 1.0, 1.0).has_value());
  EXPECT_FALSE(parabolic_offset(0.0, 0.5, 1.0).has_value());
  EXPECT_DOUBLE_EQ(*parabolic_offset(2.0, 1.0, -1.5), -1.0);
}

TEST(RefinePeak, SymmetricNeighborhoodStaysOnCenter) {
  const SteeringGrid grid = default_grid(8);
  Spectrum s(0, 8);
  s.at(4, 4) = 1.0;
  s.at(3, 4) = s.at(5, 4) = s.at(4, 3) = s.at(4, 5) = 0.6;
  const RefinedPeak r = refine_peak(s, grid, {4, 4});
  EXPECT_DOUBLE_EQ(r.aoa, grid.aoa_bins()[4]);
  EXPECT_DOUBLE_EQ(r.tof, grid.tof_bins()[4]);
}

TEST(RefinePeak, BorderAndMaskedNeighborsFallBack) {
  const SteeringGrid grid = default_grid(8);
  Spectrum s(0, 8);
  s.at(0, 0) = 1.0;
  s.at(1, 0) = 0.9;
  s.at(0, 1) = 0.9;
  const RefinedPeak corner = refine_peak(s, grid, {0, 0});
  EXPECT_DOUBLE_EQ(corner.aoa, grid.aoa_bins()[0]);
  EXPECT_DOUBLE_EQ(corner.tof, grid.tof_bins()[0]);

  Spectrum t(0, 8);
  t.at(4, 4) = 1.0;
  t.at(4, 3) = 0.9;
  t.at(4, 5) = 0.2;
  t.set_masked(4, 3, true);
  EXPECT_DOUBLE_EQ(refine_peak(t, grid, {4, 4}).tof, grid.tof_bins()[4]);
}

TEST(RefinePeak, RecoversOffGridDelay) {
  const RadarConfig cfg = default_config();
  const SteeringGrid grid = default_grid(64);
  for (double frac : {0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9}) {
    const double tof = grid.tof_bins()[30] + frac * grid.tof_step();
    const std::vector<PropagationPath> paths{{grid.aoa_bins()[32], tof, {1.0, 0.0}, PathLabel::Other}};
    const Spectrum s = compute_spectrum(grid, synthesize_frame(cfg, paths, 0, 1), true);
    const Peak p = static_peak(s);
    const RefinedPeak r = refine_peak(s, grid, p.bin);
    EXPECT_NEAR(r.tof, tof, 0.1 * grid.tof_step()) << "fraction " << frac;
  }
}

TEST(StaticFill, PeakTofWithinOneBinAtTwentyDb) {
  const SteeringGrid grid = default_grid(64);
  const auto steps = default_fill_steps();
  const LabeledFrameSequence seq = static_fill_scenario(default_config(), steps, 20.0, 13, kMount);
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const Spectrum s = compute_spectrum(grid, subtract_background(seq.frames[t], seq.background), true);
    const Bin truth = grid.nearest_bin(kPi / 2, tof_for_level(kMount, seq.truth_levels[t]));
    const Bin peak = static_peak(s).bin;
    EXPECT_LE(std::max(peak.tof, truth.tof) - std::min(peak.tof, truth.tof), 1u) << "step " << t;
  }
}

}  // namespace
}  // namespace radareye
