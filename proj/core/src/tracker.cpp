#include "radareye/tracker.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace radareye {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared by the online search and the exhaustive oracle so both sum the exact
// same floating-point expression.
inline double edge_cost(const TrackerParams& params, double from_value, double to_value, std::size_t d_aoa,
                        std::size_t d_tof) {
  return (-from_value - to_value) +
         params.omega * (params.omega_theta * static_cast<double>(d_aoa) +
                         params.omega_tau * static_cast<double>(d_tof));
}

inline std::size_t absdiff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

// argmin with ties to the smallest ToF index, then the smallest AoA index
Bin argmin_cost(const std::vector<double>& cost, std::size_t n) {
  Bin best;
  double best_cost = kInf;
  bool found = false;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const double c = cost[i * n + j];
      if (c < best_cost) {
        best = Bin{i, j};
        best_cost = c;
        found = true;
      }
    }
  if (!found) throw std::domain_error("tracker: no reachable bin");
  return best;
}

void check_same_grid(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size()) throw std::invalid_argument("tracker: spectra have different grid sizes");
}

}  // namespace

void TrackerParams::validate() const {
  if (!(omega >= 0.0) || !(omega_theta >= 0.0) || !(omega_tau >= 0.0))
    throw std::invalid_argument("tracker params: weights must be non-negative");
  if (q < 1) throw std::invalid_argument("tracker params: q must be >= 1");
  if (history_depth < 1) throw std::invalid_argument("tracker params: history_depth must be >= 1");
}

double transition_cost(const TrackerParams& params, const Spectrum& p_t, const Spectrum& p_next, Bin from,
                       Bin to) {
  check_same_grid(p_t, p_next);
  if (p_t.masked(from) || p_next.masked(to)) return kInf;
  return edge_cost(params, p_t.at(from), p_next.at(to), absdiff(from.aoa, to.aoa), absdiff(from.tof, to.tof));
}

TrackerState init_tracker(const TrackerParams& params, std::span<const Spectrum> warmup_spectra) {
  params.validate();
  if (warmup_spectra.empty()) throw std::invalid_argument("init_tracker: need at least one warm-up spectrum");

  const Spectrum& first = warmup_spectra.front();
  const Spectrum& last = warmup_spectra.back();
  const std::size_t n = first.size();
  Spectrum mean = first;
  for (std::size_t s = 1; s < warmup_spectra.size(); ++s) {
    check_same_grid(first, warmup_spectra[s]);
    for (std::size_t b = 0; b < n * n; ++b) mean.values()[b] += warmup_spectra[s].values()[b];
  }
  for (auto& v : mean.values()) v /= static_cast<double>(warmup_spectra.size());

  TrackerState state;
  state.slot = last.slot();
  state.start_slot = last.slot();
  state.grid_size = n;
  state.cost.assign(n * n, kInf);
  state.latest = last;

  if (params.free_start) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!last.masked(i, j)) {
          state.cost[i * n + j] = -last.at(i, j);
          state.start_bins.push_back(Bin{i, j});
        }
    state.current = argmin_cost(state.cost, n);
  } else {
    const Bin initial = static_peak(mean).bin;  // throws if all masked
    state.cost[initial.aoa * n + initial.tof] = 0.0;
    state.start_bins.push_back(initial);
    state.current = initial;
  }
  return state;
}

void step(TrackerState& state, const TrackerParams& params, const Spectrum& p_t, const Spectrum& p_next) {
  const std::size_t n = state.grid_size;
  if (p_t.size() != n || p_next.size() != n) throw std::invalid_argument("step: spectrum size differs from tracker grid");
  if (p_t.slot() != state.slot)
    throw std::invalid_argument("step: p_t is slot " + std::to_string(p_t.slot()) + " but tracker is at slot " +
                                std::to_string(state.slot));
  if (p_next.slot() != p_t.slot() + 1) throw std::invalid_argument("step: p_next must be the slot after p_t");

  const auto q = static_cast<std::ptrdiff_t>(params.q);
  const auto sn = static_cast<std::ptrdiff_t>(n);

  // Displacement penalty per (AoA, ToF) offset.
  const std::size_t width = 2 * params.q + 1;
  std::vector<double> penalty(width * width);
  for (std::size_t a = 0; a < width; ++a)
    for (std::size_t b = 0; b < width; ++b)
      penalty[a * width + b] = params.omega * (params.omega_theta * static_cast<double>(absdiff(a, params.q)) +
                                               params.omega_tau * static_cast<double>(absdiff(b, params.q)));

  std::vector<double> next_cost(n * n, kInf);
  std::vector<std::uint32_t> back;
  if (state.backpointers.size() >= params.history_depth) {
    back = std::move(state.backpointers.front());
    state.backpointers.pop_front();
  }
  back.assign(n * n, TrackerState::kNoPredecessor);

  // Masked sources behave like unreachable ones.
  std::vector<double> prev = state.cost;
  for (std::size_t b = 0; b < prev.size(); ++b)
    if (p_t.mask()[b]) prev[b] = kInf;
  const auto& src_values = p_t.values();
  const auto& dst_values = p_next.values();
  std::uint64_t evaluations = 0;

  for (std::ptrdiff_t di = 0; di < sn; ++di) {
    const std::ptrdiff_t i_lo = std::max<std::ptrdiff_t>(0, di - q);
    const std::ptrdiff_t i_hi = std::min<std::ptrdiff_t>(sn - 1, di + q);
    for (std::ptrdiff_t dj = 0; dj < sn; ++dj) {
      const std::size_t dst = static_cast<std::size_t>(di * sn + dj);
      if (p_next.masked(static_cast<std::size_t>(di), static_cast<std::size_t>(dj))) continue;
      const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, dj - q);
      const std::ptrdiff_t j_hi = std::min<std::ptrdiff_t>(sn - 1, dj + q);
      evaluations += static_cast<std::uint64_t>((i_hi - i_lo + 1) * (j_hi - j_lo + 1));

      const double to_value = dst_values[dst];
      double best = kInf;
      // Ties resolve to the smallest ToF index, then the smallest AoA index.
      std::size_t best_src = TrackerState::kNoPredecessor;
      for (std::ptrdiff_t si = i_lo; si <= i_hi; ++si) {
        const double* pen_row = &penalty[static_cast<std::size_t>(si - di + q) * width];
        for (std::ptrdiff_t sj = j_lo; sj <= j_hi; ++sj) {
          const std::size_t src = static_cast<std::size_t>(si * sn + sj);
          // +inf for unreachable sources never wins the comparison
          const double c = prev[src] + ((-src_values[src] - to_value) + pen_row[sj - dj + q]);
          if (c < best || (c == best && c != kInf && (src % n < best_src % n))) {
            best = c;
            best_src = src;
          }
        }
      }
      next_cost[dst] = best;
      back[dst] = static_cast<std::uint32_t>(best_src);
    }
  }

  state.cost = std::move(next_cost);
  state.backpointers.push_back(std::move(back));
  state.current = argmin_cost(state.cost, n);
  state.slot = p_next.slot();
  state.latest = p_next;
  state.last_step_evaluations = evaluations;
}

double estimate_level(const TrackerState& state, const SteeringGrid& grid, const MountGeometry& geometry) {
  const RefinedPeak refined = refine_peak(state.latest, grid, state.current);
  return level_from_tof(geometry, refined.tof);
}

TrackedPath backtrack(const TrackerState& state) {
  const std::size_t n = state.grid_size;
  const auto steps_taken = static_cast<std::size_t>(state.slot - state.start_slot);

  TrackedPath out;
  out.truncated = state.backpointers.size() < steps_taken;
  out.bins.resize(state.backpointers.size() + 1);
  out.first_slot = state.slot - static_cast<std::int64_t>(state.backpointers.size());

  std::size_t flat = state.current.aoa * n + state.current.tof;
  out.bins.back() = state.current;
  for (std::size_t h = state.backpointers.size(); h-- > 0;) {
    flat = state.backpointers[h][flat];
    if (flat == TrackerState::kNoPredecessor) throw std::logic_error("backtrack: broken predecessor chain");
    out.bins[h] = Bin{flat / n, flat % n};
  }
  return out;
}

namespace {

struct BruteForceSearch {
  const TrackerParams& params;
  std::span<const Spectrum> spectra;
  std::size_t n;
  std::vector<Bin> path;
  std::vector<Bin> best_path;
  double best_cost = kInf;

  void extend(std::size_t t, double cost_so_far) {
    if (t + 1 == spectra.size()) {
      if (cost_so_far < best_cost || (cost_so_far == best_cost && prefers(path, best_path))) {
        best_cost = cost_so_far;
        best_path = path;
      }
      return;
    }
    const Bin from = path.back();
    const auto q = static_cast<std::ptrdiff_t>(params.q);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    for (std::ptrdiff_t dj = -q; dj <= q; ++dj)
      for (std::ptrdiff_t di = -q; di <= q; ++di) {
        const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(from.aoa) + di;
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(from.tof) + dj;
        if (i < 0 || j < 0 || i >= sn || j >= sn) continue;
        const Bin to{static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
        const double c = transition_cost(params, spectra[t], spectra[t + 1], from, to);
        if (c == kInf) continue;
        path.push_back(to);
        extend(t + 1, cost_so_far + c);
        path.pop_back();
      }
  }

  // Mirrors the online search: final bin by (ToF, AoA), then earlier bins
  // walking backwards by (ToF, AoA).
  static bool prefers(const std::vector<Bin>& a, const std::vector<Bin>& b) {
    if (b.empty()) return true;
    for (std::size_t t = a.size(); t-- > 0;) {
      if (a[t] == b[t]) continue;
      if (a[t].tof != b[t].tof) return a[t].tof < b[t].tof;
      return a[t].aoa < b[t].aoa;
    }
    return false;
  }
};

}  // namespace

PathSearchResult brute_force_best_path(const TrackerParams& params, std::span<const Spectrum> spectra, Bin initial) {
  params.validate();
  if (spectra.empty()) throw std::invalid_argument("brute_force_best_path: no spectra");
  const std::size_t n = spectra.front().size();
  for (const auto& s : spectra) check_same_grid(spectra.front(), s);
  if (initial.aoa >= n || initial.tof >= n) throw std::invalid_argument("brute_force_best_path: initial bin outside grid");
  if (spectra.front().masked(initial)) throw std::invalid_argument("brute_force_best_path: initial bin is masked");

  const double width = static_cast<double>(2 * params.q + 1);
  const double size = static_cast<double>(n * n) * std::pow(width, 2.0 * static_cast<double>(spectra.size() - 1));
  if (size > 1e7)
    throw std::invalid_argument("brute_force_best_path: instance too large to enumerate");

  BruteForceSearch search{params, spectra, n, {initial}, {}, kInf};
  search.extend(0, 0.0);
  if (search.best_path.empty()) throw std::domain_error("brute_force_best_path: no admissible path");
  return PathSearchResult{std::move(search.best_path), search.best_cost};
}

}  // namespace radareye
