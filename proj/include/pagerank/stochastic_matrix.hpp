#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pagerank/errors.hpp"
#include "pagerank/graph.hpp"

namespace pagerank {

enum class DanglingPolicy { uniform, self_loop };

enum class DampingKind { none, lazy, teleport };

struct DampingSpec {
  double delta = 0.85;
  DampingKind kind = DampingKind::teleport;
};

/// Row-stochastic transition matrix in dual sparse layout: entries are stored
/// both row-major and column-major so row sampling and transpose products are
/// each sequential. Immutable after construction.
///
/// In teleport mode only delta * P_tilde is stored; the rank-one part
/// (1 - delta)/n * ones * ones^T stays implicit, so each stored row sums to
/// delta and the remaining mass teleport_mass() = 1 - delta is spread
/// uniformly. Lazy mode materializes its diagonal instead.
class StochasticMatrix {
 public:
  struct Entry {
    std::size_t idx = 0;  // column for row storage, row for column storage
    double val = 0.0;
  };

  /// Row-normalizes the graph's weights. Rows with zero total out-weight are
  /// dangling and resolved by the policy: a uniform row over all nodes, or a
  /// self loop.
  static StochasticMatrix from_edge_list(
      const AdjacencyGraph& g, DanglingPolicy dangling = DanglingPolicy::uniform) {
    StochasticMatrix m;
    m.n_ = g.n();
    m.rows_.assign(m.n_, {});
    for (const Edge& e : g.edges()) {
      if (e.weight > 0.0) m.rows_[e.src].push_back({e.dst, e.weight});
    }
    const double inv_n = 1.0 / static_cast<double>(m.n_);
    for (std::size_t i = 0; i < m.n_; ++i) {
      auto& row = m.rows_[i];
      double total = 0.0;
      for (const Entry& e : row) total += e.val;
      if (total <= 0.0) {
        row.clear();
        if (dangling == DanglingPolicy::uniform) {
          row.reserve(m.n_);
          for (std::size_t j = 0; j < m.n_; ++j) row.push_back({j, inv_n});
        } else {
          row.push_back({i, 1.0});
        }
      } else {
        for (Entry& e : row) e.val /= total;
      }
    }
    m.finish();
    return m;
  }

  std::size_t n() const { return n_; }
  std::size_t nnz() const { return nnz_; }
  DampingKind damping() const { return damping_; }
  double delta() const { return delta_; }
  /// Implicit uniform mass per row; 0 unless teleport mode.
  double teleport_mass() const { return mass_; }
  /// Known lower bound on the spectral gap, available in teleport mode with
  /// delta < 1. Empty means unknown.
  std::optional<double> gap_lower_bound() const { return gap_; }

  const std::vector<Entry>& row(std::size_t i) const {
    if (i >= n_) throw IndexOutOfRange("row index out of range");
    return rows_[i];
  }
  const std::vector<Entry>& col(std::size_t j) const {
    if (j >= n_) throw IndexOutOfRange("column index out of range");
    return cols_[j];
  }

  /// Full entry value including the implicit teleport term.
  double value(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw IndexOutOfRange("entry index out of range");
    const auto& row_i = rows_[i];
    auto it = std::lower_bound(
        row_i.begin(), row_i.end(), j,
        [](const Entry& e, std::size_t col) { return e.idx < col; });
    double v = mass_ / static_cast<double>(n_);
    if (it != row_i.end() && it->idx == j) v += it->val;
    return v;
  }

  /// Largest stored row or column length. Teleport's implicit part does not
  /// count; this is the sparsity parameter of the stored structure.
  std::size_t max_degree() const {
    std::size_t s = 0;
    for (const auto& r : rows_) s = std::max(s, r.size());
    for (const auto& c : cols_) s = std::max(s, c.size());
    return s;
  }

  std::vector<std::vector<double>> to_dense() const {
    if (n_ > 2048)
      throw DimensionTooLarge("dense expansion capped at n <= 2048");
    std::vector<std::vector<double>> d(
        n_, std::vector<double>(n_, mass_ / static_cast<double>(n_)));
    for (std::size_t i = 0; i < n_; ++i)
      for (const Entry& e : rows_[i]) d[i][e.idx] += e.val;
    return d;
  }

 private:
  friend StochasticMatrix apply_damping(const StochasticMatrix&, DampingSpec);

  void finish() {
    build_columns();
    nnz_ = 0;
    for (const auto& r : rows_) nnz_ += r.size();
    validate();
  }

  void build_columns() {
    cols_.assign(n_, {});
    std::vector<std::size_t> count(n_, 0);
    for (const auto& r : rows_)
      for (const Entry& e : r) ++count[e.idx];
    for (std::size_t j = 0; j < n_; ++j) cols_[j].reserve(count[j]);
    // Row-ascending scatter keeps each column sorted by row index.
    for (std::size_t i = 0; i < n_; ++i)
      for (const Entry& e : rows_[i]) cols_[e.idx].push_back({i, e.val});
  }

  void validate() const {
    for (std::size_t i = 0; i < n_; ++i) {
      double total = mass_;
      for (const Entry& e : rows_[i]) {
        if (!(e.val >= 0.0 && e.val <= 1.0))
          throw Error("stochastic matrix entry outside [0, 1]");
        total += e.val;
      }
      if (std::fabs(total - 1.0) > 1e-12)
        throw Error("stochastic matrix row does not sum to 1");
    }
  }

  std::size_t n_ = 0;
  std::size_t nnz_ = 0;
  std::vector<std::vector<Entry>> rows_;
  std::vector<std::vector<Entry>> cols_;
  DampingKind damping_ = DampingKind::none;
  double delta_ = 1.0;
  double mass_ = 0.0;
  std::optional<double> gap_;
};

/// Damps a plain row-stochastic matrix with factor delta in (0, 1].
///
/// lazy:     P = (1 - delta) I + delta P_tilde, diagonal materialized.
/// teleport: P = (1 - delta)/n ones ones^T + delta P_tilde, rank-one part
///           implicit. The spectral gap is then at least 1 - delta, which
///           apply_damping records when delta < 1.
///
/// delta = 1 keeps the stored values bit-identical in both modes.
inline StochasticMatrix apply_damping(const StochasticMatrix& p, DampingSpec spec) {
  if (!(std::isfinite(spec.delta) && spec.delta > 0.0 && spec.delta <= 1.0))
    throw InvalidDelta("damping factor must lie in (0, 1]");
  if (p.damping() != DampingKind::none)
    throw InvalidConfig("matrix already damped");
  StochasticMatrix out;
  out.n_ = p.n_;
  out.delta_ = spec.delta;
  out.damping_ = spec.kind;
  const double keep = 1.0 - spec.delta;
  out.rows_.assign(out.n_, {});
  for (std::size_t i = 0; i < out.n_; ++i) {
    const auto& src = p.rows_[i];
    auto& dst = out.rows_[i];
    dst.reserve(src.size() + (spec.kind == DampingKind::lazy ? 1 : 0));
    bool placed_diag = spec.kind != DampingKind::lazy || keep == 0.0;
    for (const auto& e : src) {
      if (!placed_diag && e.idx >= i) {
        if (e.idx == i) {
          dst.push_back({i, keep + spec.delta * e.val});
        } else {
          dst.push_back({i, keep});
          dst.push_back({e.idx, spec.delta * e.val});
        }
        placed_diag = true;
        continue;
      }
      dst.push_back({e.idx, spec.delta * e.val});
    }
    if (!placed_diag) dst.push_back({i, keep});
  }
  if (spec.kind == DampingKind::teleport) {
    out.mass_ = keep;
    if (spec.delta < 1.0) out.gap_ = keep;
  }
  out.finish();
  return out;
}

/// y = P^T x, including the implicit teleport term. Row-major traversal in
/// ascending row order keeps the summation order deterministic.
inline std::vector<double> transpose_apply(const StochasticMatrix& p,
                                           std::span<const double> x) {
  if (x.size() != p.n())
    throw DimensionMismatch("transpose_apply: vector length != n");
  std::vector<double> y(p.n(), 0.0);
  for (std::size_t i = 0; i < p.n(); ++i) {
    const double xi = x[i];
    for (const auto& e : p.row(i)) y[e.idx] += e.val * xi;
  }
  if (p.teleport_mass() > 0.0) {
    double total = 0.0;
    for (double v : x) total += v;
    const double shift = p.teleport_mass() * total / static_cast<double>(p.n());
    for (double& v : y) v += shift;
  }
  return y;
}

}  // namespace pagerank
