#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pagerank/errors.hpp"
#include "pagerank/metrics.hpp"
#include "pagerank/rank_vector.hpp"
#include "pagerank/rng.hpp"
#include "pagerank/stochastic_matrix.hpp"
#include "pagerank/weight_tree.hpp"

namespace pagerank {

/// Skew-symmetric payoff operator of the symmetrized matrix game over
/// A = P^T - I:
///
///       [  0    A   -1 ]
///   S = [ -A^T  0   +1 ]      dimension 2n + 1.
///       [ +1^T -1^T  0 ]
///
/// Columns are generated on demand from the sparse P; nothing of size
/// (2n+1)^2 is ever materialized. Entries lie in [-1, 1].
class GameOperator {
 public:
  struct ColEntry {
    std::size_t row = 0;
    double val = 0.0;
  };

  explicit GameOperator(const StochasticMatrix& p) : p_(&p) {}

  std::size_t base_n() const { return p_->n(); }
  std::size_t dim() const { return 2 * p_->n() + 1; }
  const StochasticMatrix& matrix() const { return *p_; }

  /// Column k with zero entries omitted, rows ascending. For k < n the
  /// nonzeros mirror column k of P (rows n..2n-1 hold delta_ik - P_ik) plus
  /// the +1 border row; for n <= k < 2n they mirror row k - n of P (rows
  /// 0..n-1 hold P_{k-n,i} - delta) plus the -1 border row; the border
  /// column k = 2n is dense.
  std::vector<ColEntry> column(std::size_t k) const {
    const std::size_t n = p_->n();
    if (k >= dim()) throw IndexOutOfRange("operator column out of range");
    std::vector<ColEntry> out;
    const double implicit = p_->teleport_mass() / static_cast<double>(n);
    if (k < n) {
      if (implicit > 0.0) {
        out.reserve(n + 1);
        const auto& col = p_->col(k);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
          double pik = implicit;
          if (pos < col.size() && col[pos].idx == i) pik += col[pos++].val;
          const double v = (i == k ? 1.0 - pik : -pik);
          if (v != 0.0) out.push_back({n + i, v});
        }
      } else {
        const auto& col = p_->col(k);
        out.reserve(col.size() + 2);
        bool diag_done = false;
        for (const auto& e : col) {
          if (!diag_done && e.idx >= k) {
            if (e.idx == k) {
              if (e.val != 1.0) out.push_back({n + k, 1.0 - e.val});
            } else {
              out.push_back({n + k, 1.0});
              out.push_back({n + e.idx, -e.val});
            }
            diag_done = true;
            continue;
          }
          out.push_back({n + e.idx, -e.val});
        }
        if (!diag_done) out.push_back({n + k, 1.0});
      }
      out.push_back({2 * n, 1.0});
    } else if (k < 2 * n) {
      const std::size_t j = k - n;
      if (implicit > 0.0) {
        out.reserve(n + 1);
        const auto& row = p_->row(j);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
          double pji = implicit;
          if (pos < row.size() && row[pos].idx == i) pji += row[pos++].val;
          const double v = (i == j ? pji - 1.0 : pji);
          if (v != 0.0) out.push_back({i, v});
        }
      } else {
        const auto& row = p_->row(j);
        out.reserve(row.size() + 2);
        bool diag_done = false;
        for (const auto& e : row) {
          if (!diag_done && e.idx >= j) {
            if (e.idx == j) {
              if (e.val != 1.0) out.push_back({j, e.val - 1.0});
            } else {
              out.push_back({j, -1.0});
              out.push_back({e.idx, e.val});
            }
            diag_done = true;
            continue;
          }
          out.push_back({e.idx, e.val});
        }
        if (!diag_done) out.push_back({j, -1.0});
      }
      out.push_back({2 * n, -1.0});
    } else {
      out.reserve(2 * n);
      for (std::size_t i = 0; i < n; ++i) out.push_back({i, -1.0});
      for (std::size_t i = 0; i < n; ++i) out.push_back({n + i, 1.0});
    }
    return out;
  }

 private:
  const StochasticMatrix* p_;
};

inline GameOperator symmetrize(const StochasticMatrix& p) {
  return GameOperator(p);
}

struct GkConfig {
  double eps = 0.05;
  double sigma = 0.1;
  std::optional<std::uint64_t> max_iter;  // overrides the iteration formula
  std::uint64_t trace_every = 0;          // 0 = no trace
  bool weak_count = false;                // use the constant-3 iteration count
};

inline void validate(const GkConfig& cfg) {
  if (!(std::isfinite(cfg.eps) && cfg.eps > 0.0 && cfg.eps <= 1.0))
    throw InvalidConfig("eps must lie in (0, 1]");
  if (!(std::isfinite(cfg.sigma) && cfg.sigma > 0.0 && cfg.sigma <= 1.0))
    throw InvalidConfig("sigma must lie in (0, 1]");
}

/// ceil(12 (ln(2n+1) + ln(1/sigma)) / eps^2): iterations for an eps-optimal
/// mixed strategy pair with failure probability sigma.
inline std::uint64_t iteration_count(std::size_t n, double eps, double sigma) {
  GkConfig probe;
  probe.eps = eps;
  probe.sigma = sigma;
  validate(probe);
  if (n == 0) throw EmptyGraph("iteration_count needs n >= 1");
  const double dim = static_cast<double>(2 * n + 1);
  const double x =
      std::ceil(12.0 * (std::log(dim) + std::log(1.0 / sigma)) / (eps * eps));
  if (!(x >= 1.0 && x < 9.2e18)) throw InvalidConfig("iteration count overflows");
  return static_cast<std::uint64_t>(x);
}

/// Same bound with the weaker constant 3 that the potential argument alone
/// supports; a quarter of iteration_count.
inline std::uint64_t iteration_count_weak(std::size_t n, double eps,
                                          double sigma) {
  GkConfig probe;
  probe.eps = eps;
  probe.sigma = sigma;
  validate(probe);
  if (n == 0) throw EmptyGraph("iteration_count_weak needs n >= 1");
  const double dim = static_cast<double>(2 * n + 1);
  const double x =
      std::ceil(3.0 * (std::log(dim) + std::log(1.0 / sigma)) / (eps * eps));
  if (!(x >= 1.0 && x < 9.2e18)) throw InvalidConfig("iteration count overflows");
  return static_cast<std::uint64_t>(x);
}

/// Mutable loop state. Leaf i of the tree always equals
/// exp(eps * U_i(t) / 2 - shift) with U = S X, where X is the visit counter;
/// exponents stores eps * U / 2 exactly and shift only moves on rescale, so
/// the weights never overflow no matter how long the run is.
struct GkState {
  std::size_t n = 0;
  std::size_t dim = 0;
  double eps = 0.0;
  std::uint64_t t = 0;
  std::vector<std::uint64_t> visits;
  std::vector<double> exponents;
  double shift = 0.0;
  WeightTree tree;

  std::uint64_t iters_sparse = 0;
  std::uint64_t writes_sparse = 0;
  std::uint64_t max_writes_sparse = 0;
  std::uint64_t iters_dense = 0;
  std::uint64_t writes_dense = 0;
  std::uint64_t rescales = 0;
  std::uint64_t rescale_writes = 0;

  GkState(std::size_t n_, double eps_)
      : n(n_),
        dim(2 * n_ + 1),
        eps(eps_),
        visits(dim, 0),
        exponents(dim, 0.0),
        tree(ones(dim)) {}

 private:
  static std::vector<double> ones(std::size_t d) {
    return std::vector<double>(d, 1.0);
  }
};

/// ln of the total weight, shift folded back in.
inline double log_potential(const GkState& s) {
  return std::log(s.tree.root()) + s.shift;
}

namespace detail {

inline void gk_rescale(GkState& s) {
  double top = s.exponents[0];
  for (double e : s.exponents) top = std::max(top, e);
  s.shift = top;
  std::vector<double> w(s.dim);
  for (std::size_t i = 0; i < s.dim; ++i)
    w[i] = std::exp(s.exponents[i] - s.shift);
  const std::uint64_t before = s.tree.node_writes();
  s.tree.rebuild(w);
  ++s.rescales;
  s.rescale_writes += s.tree.node_writes() - before;
}

constexpr double kRootHigh = 1e250;
constexpr double kRootLow = 1e-250;

}  // namespace detail

/// One mirror-descent iteration: draw a row index from the current weights,
/// credit it in X, then push the drawn column through the exponents and the
/// tree. Touches only the column's nonzeros; each touch costs one tree
/// update of log2(capacity) + 1 node writes.
inline void gk_step(GkState& s, const GameOperator& op, RngStream& rng) {
  const std::size_t k = s.tree.sample(rng);
  ++s.visits[k];
  ++s.t;
  const std::uint64_t writes_before = s.tree.node_writes();
  const std::uint64_t rescale_before = s.rescale_writes;
  for (const auto& e : op.column(k)) {
    s.exponents[e.row] += 0.5 * s.eps * e.val;
    s.tree.update(e.row, std::exp(s.exponents[e.row] - s.shift));
    const double root = s.tree.root();
    if (root > detail::kRootHigh || root < detail::kRootLow)
      detail::gk_rescale(s);
  }
  const std::uint64_t writes =
      (s.tree.node_writes() - writes_before) - (s.rescale_writes - rescale_before);
  if (k == s.dim - 1) {
    ++s.iters_dense;
    s.writes_dense += writes;
  } else {
    ++s.iters_sparse;
    s.writes_sparse += writes;
    s.max_writes_sparse = std::max(s.max_writes_sparse, writes);
  }
}

/// Exact one-step conditional expectation ratio E[Phi(t+1) | state] / Phi(t),
/// evaluated column by column. Small dimensions only.
inline double conditional_growth_ratio(const GkState& s, const GameOperator& op) {
  if (s.n > 200)
    throw DimensionTooLarge("growth check capped at n <= 200");
  const double root = s.tree.root();
  if (!(root > 0.0)) throw ZeroTotalWeight("potential is zero");
  double acc = 0.0;
  for (std::size_t k = 0; k < s.dim; ++k) {
    double after = root;
    for (const auto& e : op.column(k))
      after += s.tree.leaf(e.row) * (std::exp(0.5 * s.eps * e.val) - 1.0);
    acc += s.tree.leaf(k) * after;
  }
  return acc / (root * root);
}

/// Projects the middle block of the average strategy back to a PageRank
/// candidate: p_hat = x[n..2n) / mass. A zero middle block means the run was
/// far too short to say anything.
inline std::pair<RankVector, double> recover_rank(const RankVector& x_bar) {
  if (x_bar.size() < 3 || x_bar.size() % 2 == 0)
    throw DimensionMismatch("strategy vector must have odd length >= 3");
  require_simplex(x_bar);
  const std::size_t n = (x_bar.size() - 1) / 2;
  RankVector p(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = x_bar[n + i];
    mass += x_bar[n + i];
  }
  if (!(mass > 0.0)) throw ZeroMass("middle block carries no mass");
  for (std::size_t i = 0; i < n; ++i) p[i] /= mass;
  return {std::move(p), mass};
}

struct GkTraceRow {
  std::uint64_t iter = 0;
  double ln_phi = 0.0;
  double objective = 0.0;  // NaN until the middle block has mass
};

struct GkResult {
  RankVector x_bar;   // average strategy on the (2n+1)-simplex
  RankVector p_hat;   // recovered PageRank candidate
  double mass = 0.0;  // middle-block mass of x_bar
  double objective = 0.0;
  std::uint64_t iterations = 0;
  double wall_ms = 0.0;

  std::uint64_t iters_sparse = 0;
  std::uint64_t writes_sparse = 0;
  std::uint64_t max_writes_sparse = 0;
  std::uint64_t iters_dense = 0;
  std::uint64_t writes_dense = 0;
  std::uint64_t rescales = 0;
  std::uint64_t rescale_writes = 0;

  std::vector<GkTraceRow> trace;

  double mean_writes_sparse() const {
    return iters_sparse == 0
               ? 0.0
               : static_cast<double>(writes_sparse) /
                     static_cast<double>(iters_sparse);
  }
};

namespace detail {

inline double checkpoint_objective(const GkState& s,
                                   const StochasticMatrix& p_mat) {
  double mass = 0.0;
  for (std::size_t i = 0; i < s.n; ++i)
    mass += static_cast<double>(s.visits[s.n + i]);
  if (!(mass > 0.0)) return std::nan("");
  RankVector p(s.n);
  for (std::size_t i = 0; i < s.n; ++i)
    p[i] = static_cast<double>(s.visits[s.n + i]) / mass;
  return game_objective(p_mat, p);
}

}  // namespace detail

inline GkResult gk_run(const StochasticMatrix& p_mat, const GkConfig& cfg,
                       std::uint64_t seed, std::uint64_t stream_id = 0) {
  validate(cfg);
  const std::size_t n = p_mat.n();
  const std::uint64_t t_total =
      cfg.max_iter ? *cfg.max_iter
                   : (cfg.weak_count ? iteration_count_weak(n, cfg.eps, cfg.sigma)
                                     : iteration_count(n, cfg.eps, cfg.sigma));
  if (t_total == 0) throw ZeroSteps("iteration count must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  GameOperator op(p_mat);
  GkState s(n, cfg.eps);
  RngStream rng(seed, stream_id);
  GkResult res;
  for (std::uint64_t t = 1; t <= t_total; ++t) {
    gk_step(s, op, rng);
    if (cfg.trace_every != 0 && t % cfg.trace_every == 0) {
      res.trace.push_back(
          {t, log_potential(s), detail::checkpoint_objective(s, p_mat)});
    }
  }

  res.x_bar = RankVector(s.dim);
  for (std::size_t i = 0; i < s.dim; ++i)
    res.x_bar[i] =
        static_cast<double>(s.visits[i]) / static_cast<double>(t_total);
  auto [p_hat, mass] = recover_rank(res.x_bar);
  res.p_hat = std::move(p_hat);
  res.mass = mass;
  res.objective = game_objective(p_mat, res.p_hat);
  res.iterations = t_total;
  res.iters_sparse = s.iters_sparse;
  res.writes_sparse = s.writes_sparse;
  res.max_writes_sparse = s.max_writes_sparse;
  res.iters_dense = s.iters_dense;
  res.writes_dense = s.writes_dense;
  res.rescales = s.rescales;
  res.rescale_writes = s.rescale_writes;
  res.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return res;
}

}  // namespace pagerank
