#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "pagerank/errors.hpp"
#include "pagerank/rng.hpp"
#include "pagerank/stochastic_matrix.hpp"

namespace pagerank {

/// One transition step of the chain: draws the next node from a row of P.
/// Stored entries use a per-row cumulative-weight array and binary search;
/// the implicit teleport mass, when present, is split off first so the cost
/// stays O(log row length) even though the effective row is dense.
class RowSampler {
 public:
  explicit RowSampler(const StochasticMatrix& p)
      : n_(p.n()), mass_(p.teleport_mass()) {
    cum_.resize(n_);
    dst_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& row = p.row(i);
      cum_[i].reserve(row.size());
      dst_[i].reserve(row.size());
      double running = 0.0;
      for (const auto& e : row) {
        running += e.val;
        cum_[i].push_back(running);
        dst_[i].push_back(e.idx);
      }
      if (row.empty() && mass_ <= 0.0)
        throw ZeroTotalWeight("row has no transition mass");
    }
  }

  std::size_t n() const { return n_; }

  std::size_t sample(std::size_t row, RngStream& rng) const {
    if (row >= n_) throw IndexOutOfRange("row index out of range");
    if (mass_ > 0.0) {
      if (rng.next_double() < mass_) return rng.next_below(n_);
    }
    const auto& cum = cum_[row];
    const double total = cum.back();
    double v = rng.next_double() * total;
    if (v >= total) v = std::nextafter(total, 0.0);
    const std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(cum.begin(), cum.end(), v) - cum.begin());
    return dst_[row][std::min(idx, cum.size() - 1)];
  }

 private:
  std::size_t n_;
  double mass_;
  std::vector<std::vector<double>> cum_;
  std::vector<std::vector<std::size_t>> dst_;
};

}  // namespace pagerank
