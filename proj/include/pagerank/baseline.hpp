#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pagerank/errors.hpp"
#include "pagerank/rank_vector.hpp"
#include "pagerank/stochastic_matrix.hpp"

namespace pagerank {

struct PowerResult {
  RankVector p;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> step_l1;  // ||p_{t+1} - p_t||_1 per iteration
};

/// Repeated transpose application from the uniform start, renormalized each
/// iterate to keep rounding off the simplex. Stops when the l1 step
/// difference drops to tol; a run that exhausts max_iter is returned with
/// converged = false, not thrown.
inline PowerResult power_iteration(const StochasticMatrix& p_mat,
                                   double tol = 1e-12,
                                   std::size_t max_iter = 100000) {
  if (!(std::isfinite(tol) && tol > 0.0))
    throw InvalidParams("power iteration tolerance must be > 0");
  if (max_iter == 0) throw InvalidParams("power iteration needs max_iter >= 1");
  PowerResult res;
  res.p = RankVector::uniform(p_mat.n());
  for (std::size_t it = 1; it <= max_iter; ++it) {
    std::vector<double> next = transpose_apply(p_mat, res.p.v);
    double total = 0.0;
    for (double v : next) total += v;
    for (double& v : next) v /= total;
    double diff = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i)
      diff += std::fabs(next[i] - res.p[i]);
    res.p.v = std::move(next);
    res.step_l1.push_back(diff);
    res.iterations = it;
    if (diff <= tol) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

/// Stationary vector by direct elimination: solve (P^T - I) p = 0 with the
/// last equation replaced by sum(p) = 1. Partial pivoting; a pivot below
/// 1e-12 * max|entry| reports SingularSystem (no unique stationary
/// distribution, e.g. a reducible undamped chain). The result is verified
/// against P^T p = p to 1e-10 before it is returned.
inline RankVector dense_solve(const StochasticMatrix& p_mat) {
  const std::size_t n = p_mat.n();
  if (n > 2000) throw DimensionTooLarge("dense solve capped at n <= 2000");

  // Augmented system [M | b], row-major.
  std::vector<double> m(n * n, 0.0);
  const double implicit = p_mat.teleport_mass() / static_cast<double>(n);
  if (implicit > 0.0)
    for (double& v : m) v = implicit;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : p_mat.row(i)) m[e.idx * n + i] += e.val;
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] -= 1.0;
  for (std::size_t j = 0; j < n; ++j) m[(n - 1) * n + j] = 1.0;
  std::vector<double> b(n, 0.0);
  b[n - 1] = 1.0;

  double max_abs = 0.0;
  for (double v : m) max_abs = std::max(max_abs, std::fabs(v));
  const double pivot_floor = 1e-12 * max_abs;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::fabs(m[r * n + k]) > std::fabs(m[pivot * n + k])) pivot = r;
    if (std::fabs(m[pivot * n + k]) < pivot_floor)
      throw SingularSystem("pivot below threshold");
    if (pivot != k) {
      for (std::size_t j = k; j < n; ++j)
        std::swap(m[pivot * n + j], m[k * n + j]);
      std::swap(b[pivot], b[k]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = m[r * n + k] / m[k * n + k];
      if (f == 0.0) continue;
      m[r * n + k] = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) m[r * n + j] -= f * m[k * n + j];
      b[r] -= f * b[k];
    }
  }
  RankVector p(n);
  for (std::size_t k = n; k-- > 0;) {
    double acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= m[k * n + j] * p[j];
    p[k] = acc / m[k * n + k];
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] < -1e-9)
      throw SingularSystem("stationary solution has a negative component");
    if (p[i] < 0.0) p[i] = 0.0;
    total += p[i];
  }
  if (!(total > 0.0)) throw SingularSystem("stationary solution sums to zero");
  for (std::size_t i = 0; i < n; ++i) p[i] /= total;

  const std::vector<double> y = transpose_apply(p_mat, p.v);
  for (std::size_t i = 0; i < n; ++i)
    if (std::fabs(y[i] - p[i]) > 1e-10)
      throw SingularSystem("solution fails the stationarity check");
  return p;
}

}  // namespace pagerank
