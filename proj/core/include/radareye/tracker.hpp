#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "radareye/beamforming.hpp"
#include "radareye/geometry.hpp"

namespace radareye {

/// Weights of the transition cost and the size of the reachable set.
struct TrackerParams {
  double omega = 1.0;        ///< global displacement weight
  double omega_theta = 0.1;  ///< per AoA bin of displacement
  double omega_tau = 0.1;    ///< per ToF bin of displacement
  std::size_t q = 5;         ///< Chebyshev radius of one transition, in bins
  bool free_start = false;   ///< start from every bin (D_0 = -P_0) instead of the warm-up peak
  std::size_t history_depth = 256;  ///< backpointer tables kept for backtracking

  void validate() const;
};

/// Cost of moving from `from` in p_t to `to` in p_next:
///   -P_t(from) - P_next(to) + omega * (omega_theta*|di| + omega_tau*|dj|)
/// Masked endpoints cost +infinity.
double transition_cost(const TrackerParams& params, const Spectrum& p_t, const Spectrum& p_next,
                       Bin from, Bin to);

/// Online state of the constrained shortest-path search.
struct TrackerState {
  std::int64_t slot = 0;         ///< slot of the newest spectrum folded in
  std::int64_t start_slot = 0;   ///< slot at which D_0 was defined
  std::size_t grid_size = 0;
  std::vector<double> cost;      ///< D_T, row-major N x N; +inf where unreachable or masked
  Bin current;                   ///< argmin of D_T
  Spectrum latest;               ///< spectrum at `slot`, used for sub-bin refinement
  std::uint64_t last_step_evaluations = 0;

  /// Predecessor tables (flattened bin index, kNoPredecessor if none), oldest first.
  std::deque<std::vector<std::uint32_t>> backpointers;
  std::vector<Bin> start_bins;   ///< bins with D_0 finite; one entry unless free_start

  static constexpr std::uint32_t kNoPredecessor = 0xFFFFFFFFu;

  double cost_at(Bin b) const { return cost[b.aoa * grid_size + b.tof]; }
};

/// Starting state from the pre-pour static phase: the initial bin is the
/// static peak of the element-wise mean of the warm-up spectra, with D_0 = 0
/// there and +inf elsewhere. The state sits at the slot of the last warm-up
/// spectrum, which is also the reference for the next step's p_t.
TrackerState init_tracker(const TrackerParams& params, std::span<const Spectrum> warmup_spectra);

/// Folds in the next slot:
///   D_{T+1}(b') = min_{|b - b'|_inf <= Q} D_T(b) + c_T(b -> b')
/// `p_t` must be the spectrum of state.slot and `p_next` the one after it.
void step(TrackerState& state, const TrackerParams& params, const Spectrum& p_t, const Spectrum& p_next);

/// Liquid height at the current estimate after sub-bin refinement of its ToF.
double estimate_level(const TrackerState& state, const SteeringGrid& grid, const MountGeometry& geometry);

struct TrackedPath {
  std::vector<Bin> bins;       ///< oldest first, ends at state.current
  std::int64_t first_slot = 0; ///< slot of bins.front()
  bool truncated = false;      ///< history was evicted; bins is a suffix of the full path
};

TrackedPath backtrack(const TrackerState& state);

struct PathSearchResult {
  std::vector<Bin> path;
  double cost = 0.0;
};

/// Exhaustive search over every Q-constrained path that starts at `initial`
/// on spectra[0]. Refuses instances with N^2 (2Q+1)^(2(T-1)) > 1e7.
PathSearchResult brute_force_best_path(const TrackerParams& params, std::span<const Spectrum> spectra,
                                       Bin initial);

}  // namespace radareye
