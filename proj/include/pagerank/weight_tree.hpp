#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pagerank/errors.hpp"
#include "pagerank/rng.hpp"

namespace pagerank {

/// Flat balanced binary tree over nonnegative weights: every internal node
/// holds the sum of its children, so drawing an index proportional to its
/// weight and changing one weight both cost O(log capacity). The leaf count
/// is padded to a power of two with zero-weight phantom leaves, which can
/// never be drawn. Weights are relative; nothing is normalized.
class WeightTree {
 public:
  explicit WeightTree(std::span<const double> weights) {
    size_ = weights.size();
    if (size_ == 0) throw AllZeroWeights("weight tree needs at least one leaf");
    cap_ = std::max<std::size_t>(2, std::bit_ceil(size_));
    nodes_.assign(2 * cap_, 0.0);
    bool any_positive = false;
    for (std::size_t i = 0; i < size_; ++i) {
      check_weight(weights[i]);
      if (weights[i] > 0.0) any_positive = true;
      nodes_[cap_ + i] = weights[i];
    }
    if (!any_positive) throw AllZeroWeights("all weights are zero");
    for (std::size_t i = cap_ - 1; i >= 1; --i)
      nodes_[i] = nodes_[2 * i] + nodes_[2 * i + 1];
  }

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return cap_; }
  double root() const { return nodes_[1]; }
  double leaf(std::size_t i) const {
    if (i >= size_) throw IndexOutOfRange("leaf index out of range");
    return nodes_[cap_ + i];
  }

  /// Number of tree-node stores performed by update() and rebuild() so far.
  std::uint64_t node_writes() const { return writes_; }

  /// Sets leaf i and refreshes its ancestors: exactly log2(capacity) + 1
  /// node writes.
  void update(std::size_t i, double w) {
    if (i >= size_) throw IndexOutOfRange("leaf index out of range");
    check_weight(w);
    std::size_t pos = cap_ + i;
    nodes_[pos] = w;
    ++writes_;
    for (pos >>= 1; pos >= 1; pos >>= 1) {
      nodes_[pos] = nodes_[2 * pos] + nodes_[2 * pos + 1];
      ++writes_;
    }
  }

  /// Replaces every leaf in one pass. Counts 2 * capacity - 1 node writes.
  void rebuild(std::span<const double> weights) {
    if (weights.size() != size_)
      throw DimensionMismatch("rebuild length != leaf count");
    bool any_positive = false;
    for (std::size_t i = 0; i < size_; ++i) {
      check_weight(weights[i]);
      if (weights[i] > 0.0) any_positive = true;
      nodes_[cap_ + i] = weights[i];
    }
    if (!any_positive) throw AllZeroWeights("all weights are zero");
    for (std::size_t i = size_; i < cap_; ++i) nodes_[cap_ + i] = 0.0;
    for (std::size_t i = cap_ - 1; i >= 1; --i)
      nodes_[i] = nodes_[2 * i] + nodes_[2 * i + 1];
    writes_ += 2 * cap_ - 1;
  }

  /// Draws leaf index i with probability leaf(i) / root() from a single
  /// uniform u in [0, 1).
  std::size_t sample_at(double u) const {
    const double total = nodes_[1];
    if (!(total > 0.0)) throw ZeroTotalWeight("weight tree sum is zero");
    double t = u * total;
    if (t >= total) t = std::nextafter(total, 0.0);
    std::size_t pos = 1;
    while (pos < cap_) {
      const double left = nodes_[2 * pos];
      if (t < left) {
        pos = 2 * pos;
      } else {
        t -= left;
        pos = 2 * pos + 1;
      }
    }
    std::size_t idx = pos - cap_;
    if (nodes_[pos] > 0.0 && idx < size_) return idx;
    // Rounding at a subtree boundary can land on a zero leaf; step to the
    // nearest positive one. Unreachable in exact arithmetic.
    for (std::size_t j = idx < size_ ? idx : size_; j-- > 0;)
      if (nodes_[cap_ + j] > 0.0) return j;
    for (std::size_t j = idx + 1; j < size_; ++j)
      if (nodes_[cap_ + j] > 0.0) return j;
    throw ZeroTotalWeight("no positive leaf");
  }

  std::size_t sample(RngStream& rng) const { return sample_at(rng.next_double()); }

 private:
  static void check_weight(double w) {
    if (!std::isfinite(w)) throw NonFiniteWeight("weight must be finite");
    if (w < 0.0) throw NegativeWeight("weight must be >= 0");
  }

  std::size_t size_ = 0;
  std::size_t cap_ = 0;
  std::vector<double> nodes_;  // 1-based heap order, leaves at [cap_, 2 cap_)
  std::uint64_t writes_ = 0;
};

}  // namespace pagerank
