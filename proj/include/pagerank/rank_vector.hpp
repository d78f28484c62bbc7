#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "pagerank/errors.hpp"

namespace pagerank {

/// Probability vector over graph nodes. Thin wrapper so simplex checks and
/// common constructors live in one place; algorithms index it like a vector.
struct RankVector {
  std::vector<double> v;

  RankVector() = default;
  explicit RankVector(std::size_t n) : v(n, 0.0) {}
  explicit RankVector(std::vector<double> values) : v(std::move(values)) {}

  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

  double sum() const { return std::accumulate(v.begin(), v.end(), 0.0); }

  static RankVector uniform(std::size_t n) {
    if (n == 0) throw EmptyGraph("uniform rank vector needs n >= 1");
    RankVector p(n);
    const double w = 1.0 / static_cast<double>(n);
    for (auto& x : p.v) x = w;
    return p;
  }

  static RankVector unit(std::size_t n, std::size_t i) {
    if (n == 0) throw EmptyGraph("unit rank vector needs n >= 1");
    if (i >= n) throw IndexOutOfRange("unit rank vector index out of range");
    RankVector p(n);
    p.v[i] = 1.0;
    return p;
  }

  /// True when entries are >= entry_floor and the total is within sum_tol of 1.
  bool on_simplex(double sum_tol = 1e-9, double entry_floor = 0.0) const {
    for (double x : v) {
      if (!std::isfinite(x) || x < entry_floor) return false;
    }
    return std::fabs(sum() - 1.0) <= sum_tol;
  }
};

/// Throws NotOnSimplex unless p is a probability vector up to the given
/// tolerances. The -1e-12 floor absorbs harmless sign noise from solves.
inline void require_simplex(const RankVector& p, double sum_tol = 1e-6,
                            double entry_floor = -1e-12) {
  if (p.size() == 0) throw NotOnSimplex("empty vector");
  if (!p.on_simplex(sum_tol, entry_floor))
    throw NotOnSimplex("vector is not a probability distribution");
}

}  // namespace pagerank
