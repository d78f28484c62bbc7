#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "pagerank/errors.hpp"
#include "pagerank/graph.hpp"
#include "pagerank/rng.hpp"
#include "pagerank/weight_tree.hpp"

namespace pagerank {

enum class GraphModel { cycle, star, uniform_sparse, preferential };

/// Seeded test-graph families. cycle and star ignore s and the seed;
/// uniform_sparse gives every node s distinct non-self targets;
/// preferential grows node by node, each new node emitting s edges to
/// earlier nodes drawn proportional to in-degree + 1 (duplicates merge).
inline AdjacencyGraph generate(GraphModel model, std::size_t n, std::size_t s,
                               std::uint64_t seed) {
  if (n == 0) throw InvalidParams("generator needs n >= 1");
  std::vector<Edge> edges;
  switch (model) {
    case GraphModel::cycle: {
      edges.reserve(n);
      for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
      break;
    }
    case GraphModel::star: {
      edges.reserve(2 * (n - 1));
      for (std::size_t i = 1; i < n; ++i) {
        edges.push_back({i, 0, 1.0});
        edges.push_back({0, i, 1.0});
      }
      break;
    }
    case GraphModel::uniform_sparse: {
      if (s == 0) throw InvalidParams("uniform_sparse needs s >= 1");
      if (s >= n) throw InvalidParams("uniform_sparse needs s < n");
      RngStream rng(seed, 0);
      edges.reserve(n * s);
      std::unordered_set<std::size_t> picked;
      for (std::size_t i = 0; i < n; ++i) {
        picked.clear();
        while (picked.size() < s) {
          const auto j = static_cast<std::size_t>(rng.next_below(n));
          if (j == i || !picked.insert(j).second) continue;
          edges.push_back({i, j, 1.0});
        }
      }
      break;
    }
    case GraphModel::preferential: {
      if (s == 0) throw InvalidParams("preferential needs s >= 1");
      if (s >= n) throw InvalidParams("preferential needs s < n");
      RngStream rng(seed, 0);
      std::vector<double> attract(n, 0.0);
      attract[0] = 1.0;  // in-degree + 1, zero while the node is unborn
      WeightTree tree(attract);
      for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t d = 0; d < s; ++d) {
          const std::size_t target = tree.sample(rng);
          edges.push_back({i, target, 1.0});
          attract[target] += 1.0;
          tree.update(target, attract[target]);
        }
        attract[i] = 1.0;
        tree.update(i, 1.0);
      }
      break;
    }
  }
  return AdjacencyGraph(n, std::move(edges));
}

}  // namespace pagerank
