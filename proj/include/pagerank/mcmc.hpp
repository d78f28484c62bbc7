#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "pagerank/errors.hpp"
#include "pagerank/rank_vector.hpp"
#include "pagerank/rng.hpp"
#include "pagerank/row_sampler.hpp"
#include "pagerank/stochastic_matrix.hpp"

namespace pagerank {

enum class McmcMode { single, parallel, adaptive };
enum class StartRule { node_1, uniform_random };

/// Knobs for the random-walk frequency estimator. alpha is the spectral gap
/// lower bound used by the step-count formulas; with teleport damping it is
/// 1 - delta, otherwise the caller must supply one. c_burn and c_total
/// rescale the burn-in and total step counts around the formula values.
struct McmcConfig {
  double eps = 0.1;
  double sigma = 0.1;
  double alpha = 0.15;
  McmcMode mode = McmcMode::single;
  StartRule start = StartRule::node_1;
  double c_burn = 1.0;
  double c_total = 1.0;
  std::optional<std::uint64_t> max_iter;  // overrides the total-step formula
  std::uint64_t tau = 100;                // adaptive check spacing
  double tol_adapt = 1e-3;                // adaptive l2 stopping tolerance
  unsigned threads = 0;                   // parallel mode; 0 = hardware
};

inline void validate(const McmcConfig& cfg) {
  if (!(std::isfinite(cfg.eps) && cfg.eps > 0.0 && cfg.eps <= 1.0))
    throw InvalidConfig("eps must lie in (0, 1]");
  if (!(std::isfinite(cfg.sigma) && cfg.sigma > 0.0 && cfg.sigma <= 1.0))
    throw InvalidConfig("sigma must lie in (0, 1]");
  if (!(std::isfinite(cfg.alpha) && cfg.alpha > 0.0 && cfg.alpha <= 1.0))
    throw InvalidConfig("alpha must lie in (0, 1]");
  if (!(std::isfinite(cfg.c_burn) && cfg.c_burn >= 0.0))
    throw InvalidConfig("c_burn must be >= 0");
  if (!(std::isfinite(cfg.c_total) && cfg.c_total >= 0.0))
    throw InvalidConfig("c_total must be >= 0");
  if (cfg.tau == 0) throw InvalidConfig("tau must be >= 1");
  if (!(std::isfinite(cfg.tol_adapt) && cfg.tol_adapt > 0.0))
    throw InvalidConfig("tol_adapt must be > 0");
}

namespace detail {
inline std::uint64_t to_steps(double x) {
  const double c = std::ceil(x);
  if (!(c >= 0.0 && c < 9.2e18)) throw InvalidConfig("step count overflows");
  return static_cast<std::uint64_t>(c);
}
}  // namespace detail

/// ceil(c_burn * (1/alpha) * ln(n/eps)): steps until the walk's law is
/// within eps (total variation) of stationary.
inline std::uint64_t burn_in_steps(const McmcConfig& cfg, std::size_t n) {
  validate(cfg);
  if (n == 0) throw EmptyGraph("burn_in_steps needs n >= 1");
  return detail::to_steps(cfg.c_burn / cfg.alpha *
                          std::log(static_cast<double>(n) / cfg.eps));
}

/// ceil(c_total * ln(n/sigma) / (alpha eps^2)): single-trajectory step count.
inline std::uint64_t total_steps(const McmcConfig& cfg, std::size_t n) {
  validate(cfg);
  if (n == 0) throw EmptyGraph("total_steps needs n >= 1");
  return detail::to_steps(cfg.c_total *
                          std::log(static_cast<double>(n) / cfg.sigma) /
                          (cfg.alpha * cfg.eps * cfg.eps));
}

/// ceil((4 + 6 ln(1/sigma)) / eps^2): trajectories for the parallel
/// endpoint estimator.
inline std::uint64_t trajectory_count(double eps, double sigma) {
  if (!(std::isfinite(eps) && eps > 0.0 && eps <= 1.0))
    throw InvalidConfig("eps must lie in (0, 1]");
  if (!(std::isfinite(sigma) && sigma > 0.0 && sigma <= 1.0))
    throw InvalidConfig("sigma must lie in (0, 1]");
  return detail::to_steps((4.0 + 6.0 * std::log(1.0 / sigma)) / (eps * eps));
}

struct McmcResult {
  RankVector estimate;
  std::uint64_t steps_total = 0;  // walk steps (single/adaptive) or N * burn
  std::uint64_t steps_burn = 0;   // discarded prefix (or per-trajectory burn)
  std::uint64_t trajectories = 0;
  std::vector<std::uint64_t> visits;  // counts behind the estimate
  bool max_steps_hit = false;
  double wall_ms = 0.0;
  // adaptive mode: (step, l2 distance to the estimate tau steps earlier)
  std::vector<std::pair<std::uint64_t, double>> adapt_trace;
};

namespace detail {

inline std::size_t start_node(const McmcConfig& cfg, std::size_t n,
                              RngStream& rng) {
  if (cfg.start == StartRule::uniform_random)
    return static_cast<std::size_t>(rng.next_below(n));
  return 0;
}

inline RankVector normalize_counts(const std::vector<std::uint64_t>& counts,
                                   std::uint64_t total) {
  RankVector p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return p;
}

}  // namespace detail

/// One long walk; visits are counted from step T0 on, so the estimate is the
/// empirical node-frequency over the last T - T0 steps.
inline McmcResult run_single(const StochasticMatrix& p_mat,
                             const McmcConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  if (cfg.mode != McmcMode::single)
    throw InvalidConfig("run_single needs cfg.mode = single");
  const std::size_t n = p_mat.n();
  const std::uint64_t t_total = cfg.max_iter ? *cfg.max_iter : total_steps(cfg, n);
  const std::uint64_t t_burn = burn_in_steps(cfg, n);
  if (t_total <= t_burn)
    throw ZeroSteps("total steps must exceed burn-in");

  const auto t0 = std::chrono::steady_clock::now();
  RowSampler sampler(p_mat);
  RngStream rng(seed, 0);
  std::size_t node = detail::start_node(cfg, n, rng);
  std::vector<std::uint64_t> counts(n, 0);
  for (std::uint64_t t = 0; t < t_total; ++t) {
    if (t >= t_burn) ++counts[node];
    node = sampler.sample(node, rng);
  }
  McmcResult res;
  res.steps_total = t_total;
  res.steps_burn = t_burn;
  res.trajectories = 1;
  res.estimate = detail::normalize_counts(counts, t_total - t_burn);
  res.visits = std::move(counts);
  res.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return res;
}

/// N short walks from independent uniform starts; each contributes only its
/// endpoint after a burn-in computed at eps/2, and the estimate averages the
/// endpoint indicators. Trajectory k always uses rng stream k, so the counts
/// are identical for any thread count.
inline McmcResult run_parallel(const StochasticMatrix& p_mat,
                               const McmcConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  if (cfg.mode != McmcMode::parallel)
    throw InvalidConfig("run_parallel needs cfg.mode = parallel");
  const std::size_t n = p_mat.n();
  const std::uint64_t n_traj = trajectory_count(cfg.eps, cfg.sigma);
  McmcConfig half = cfg;
  half.eps = cfg.eps / 2.0;
  const std::uint64_t t_burn = burn_in_steps(half, n);

  const auto t0 = std::chrono::steady_clock::now();
  RowSampler sampler(p_mat);
  unsigned n_threads = cfg.threads != 0 ? cfg.threads
                                        : std::thread::hardware_concurrency();
  n_threads = std::clamp<unsigned>(n_threads, 1, 8);
  n_threads = static_cast<unsigned>(
      std::min<std::uint64_t>(n_threads, std::max<std::uint64_t>(n_traj, 1)));

  std::vector<std::vector<std::uint64_t>> partial(
      n_threads, std::vector<std::uint64_t>(n, 0));
  auto worker = [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
    auto& counts = partial[w];
    for (std::uint64_t k = lo; k < hi; ++k) {
      RngStream rng(seed, k);
      std::size_t node = static_cast<std::size_t>(rng.next_below(n));
      for (std::uint64_t t = 0; t < t_burn; ++t) node = sampler.sample(node, rng);
      ++counts[node];
    }
  };
  {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n_traj + n_threads - 1) / n_threads;
    for (unsigned w = 0; w < n_threads; ++w) {
      const std::uint64_t lo = std::min<std::uint64_t>(w * chunk, n_traj);
      const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, n_traj);
      pool.emplace_back(worker, w, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  std::vector<std::uint64_t> counts(n, 0);
  for (const auto& part : partial)
    for (std::size_t i = 0; i < n; ++i) counts[i] += part[i];

  McmcResult res;
  res.steps_total = n_traj * t_burn;
  res.steps_burn = t_burn;
  res.trajectories = n_traj;
  res.estimate = detail::normalize_counts(counts, n_traj);
  res.visits = std::move(counts);
  res.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return res;
}

/// One walk with no a-priori burn-in: counts start immediately and every tau
/// steps the running estimate is compared with the one tau steps earlier;
/// the walk stops once the l2 gap drops to tol_adapt. The returned estimate
/// discards the prefix up to the newest snapshot taken at or before t/5
/// (snapshots are kept at geometrically spaced times, so only O(1) of them
/// are alive). Hitting the step cap sets max_steps_hit instead of throwing.
inline McmcResult run_adaptive(const StochasticMatrix& p_mat,
                               const McmcConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  if (cfg.mode != McmcMode::adaptive)
    throw InvalidConfig("run_adaptive needs cfg.mode = adaptive");
  const std::size_t n = p_mat.n();
  const std::uint64_t t_cap = cfg.max_iter ? *cfg.max_iter : total_steps(cfg, n);
  if (t_cap == 0) throw ZeroSteps("adaptive run needs a positive step cap");

  const auto t0 = std::chrono::steady_clock::now();
  RowSampler sampler(p_mat);
  RngStream rng(seed, 0);
  std::size_t node = detail::start_node(cfg, n, rng);
  std::vector<std::uint64_t> counts(n, 0);

  struct Snapshot {
    std::uint64_t t;
    std::vector<std::uint64_t> counts;
  };
  std::deque<Snapshot> snaps;
  std::uint64_t next_snap = 5;

  McmcResult res;
  RankVector prev;
  bool prev_valid = false;
  bool stopped = false;
  std::uint64_t t = 0;
  while (t < t_cap && !stopped) {
    ++t;
    ++counts[node];
    node = sampler.sample(node, rng);
    if (t == next_snap) {
      snaps.push_back({t, counts});
      next_snap *= 2;
      while (snaps.size() >= 2 && snaps[1].t * 5 <= t) snaps.pop_front();
    }
    if (t % cfg.tau == 0) {
      RankVector cur = detail::normalize_counts(counts, t);
      if (prev_valid) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double diff = cur[i] - prev[i];
          d += diff * diff;
        }
        d = std::sqrt(d);
        res.adapt_trace.emplace_back(t, d);
        if (d <= cfg.tol_adapt) stopped = true;
      }
      prev = std::move(cur);
      prev_valid = true;
    }
  }
  res.max_steps_hit = !stopped;

  // Correction: drop the prefix up to the newest snapshot at or before t/5.
  std::uint64_t t_cut = 0;
  const std::vector<std::uint64_t>* cut = nullptr;
  for (auto it = snaps.rbegin(); it != snaps.rend(); ++it) {
    if (it->t * 5 <= t) {
      t_cut = it->t;
      cut = &it->counts;
      break;
    }
  }
  if (cut != nullptr) {
    for (std::size_t i = 0; i < n; ++i) counts[i] -= (*cut)[i];
  }
  res.steps_total = t;
  res.steps_burn = t_cut;
  res.trajectories = 1;
  res.estimate = detail::normalize_counts(counts, t - t_cut);
  res.visits = std::move(counts);
  res.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return res;
}

inline McmcResult run_mcmc(const StochasticMatrix& p_mat, const McmcConfig& cfg,
                           std::uint64_t seed) {
  switch (cfg.mode) {
    case McmcMode::single: return run_single(p_mat, cfg, seed);
    case McmcMode::parallel: return run_parallel(p_mat, cfg, seed);
    case McmcMode::adaptive: return run_adaptive(p_mat, cfg, seed);
  }
  throw InvalidConfig("unknown mcmc mode");
}

}  // namespace pagerank
