#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <numeric>
#include <vector>

#include "pagerank/errors.hpp"
#include "pagerank/rank_vector.hpp"
#include "pagerank/stochastic_matrix.hpp"

namespace pagerank {

enum class Norm { l1, l2, linf };

/// max_i ((P^T - I) p)_i. Nonnegative on the simplex; zero exactly at the
/// stationary vector, so it certifies a candidate without knowing the truth.
inline double game_objective(const StochasticMatrix& p_mat, const RankVector& p) {
  if (p.size() != p_mat.n())
    throw DimensionMismatch("game_objective: vector length != n");
  require_simplex(p);
  const std::vector<double> y = transpose_apply(p_mat, p.v);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < y.size(); ++i) best = std::max(best, y[i] - p[i]);
  return best;
}

struct Residuals {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double objective = 0.0;
};

/// Norms of P^T p - p plus the game objective, all from one product.
inline Residuals residuals(const StochasticMatrix& p_mat, const RankVector& p) {
  if (p.size() != p_mat.n())
    throw DimensionMismatch("residuals: vector length != n");
  require_simplex(p);
  const std::vector<double> y = transpose_apply(p_mat, p.v);
  Residuals r;
  r.objective = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - p[i];
    r.l1 += std::fabs(d);
    r.l2 += d * d;
    r.linf = std::max(r.linf, std::fabs(d));
    r.objective = std::max(r.objective, d);
  }
  r.l2 = std::sqrt(r.l2);
  return r;
}

inline double distance(const RankVector& a, const RankVector& b, Norm norm) {
  if (a.size() != b.size())
    throw DimensionMismatch("distance: lengths differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::fabs(a[i] - b[i]);
    switch (norm) {
      case Norm::l1: acc += d; break;
      case Norm::l2: acc += d * d; break;
      case Norm::linf: acc = std::max(acc, d); break;
    }
  }
  return norm == Norm::l2 ? std::sqrt(acc) : acc;
}

/// Indices of the k largest entries, score descending, index ascending on
/// ties so the result is deterministic.
inline std::vector<std::size_t> top_k(const RankVector& p, std::size_t k) {
  if (k == 0 || k > p.size()) throw InvalidK("k must lie in [1, n]");
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p[a] != p[b] ? p[a] > p[b] : a < b;
  });
  order.resize(k);
  return order;
}

/// |top-k(a) intersect top-k(b)| / k.
inline double topk_overlap(const RankVector& a, const RankVector& b,
                           std::size_t k) {
  if (a.size() != b.size())
    throw DimensionMismatch("topk_overlap: lengths differ");
  std::vector<std::size_t> ta = top_k(a, k);
  std::vector<std::size_t> tb = top_k(b, k);
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  std::vector<std::size_t> common;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(),
                        std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(k);
}

}  // namespace pagerank
