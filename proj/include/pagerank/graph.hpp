#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pagerank/errors.hpp"

namespace pagerank {

struct Edge {
  std::size_t src = 0;
  std::size_t dst = 0;
  double weight = 1.0;
};

/// Directed weighted multigraph collapsed to simple form: parallel edges are
/// merged at construction by summing weights, and the edge list is kept
/// sorted by (src, dst). Node ids are 0-based and dense in [0, n).
class AdjacencyGraph {
 public:
  AdjacencyGraph(std::size_t n, std::vector<Edge> edges) : n_(n) {
    if (n_ == 0) throw EmptyGraph("graph needs at least one node");
    for (const Edge& e : edges) {
      if (e.src >= n_ || e.dst >= n_)
        throw IndexOutOfRange("edge endpoint outside [0, n)");
      if (!std::isfinite(e.weight))
        throw NonFiniteWeight("edge weight must be finite");
      if (e.weight < 0.0) throw NegativeWeight("edge weight must be >= 0");
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    edges_.reserve(edges.size());
    for (const Edge& e : edges) {
      if (!edges_.empty() && edges_.back().src == e.src &&
          edges_.back().dst == e.dst) {
        edges_.back().weight += e.weight;
      } else {
        edges_.push_back(e);
      }
    }
  }

  std::size_t n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
};

/// Text edge-list format, one edge per line:
///
///   src dst [weight]
///
/// '#' starts a comment line; the directive "#n N" pins the node count so
/// trailing isolated nodes survive a round trip. Without the directive the
/// node count is max id + 1. Accepts LF and CRLF.
inline AdjacencyGraph parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  long long declared_n = -1;
  std::string line;
  std::size_t lineno = 0;
  std::size_t max_id = 0;
  bool saw_edge = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      std::istringstream ls(line.substr(start + 1));
      std::string head;
      if (ls >> head && head == "n") {
        long long value = 0;
        if (!(ls >> value) || value <= 0)
          throw ParseError("line " + std::to_string(lineno) +
                           ": #n needs a positive node count");
        declared_n = value;
      }
      continue;
    }
    std::istringstream ls(line);
    long long src = 0;
    long long dst = 0;
    if (!(ls >> src >> dst))
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 'src dst [weight]'");
    if (src < 0 || dst < 0)
      throw ParseError("line " + std::to_string(lineno) +
                       ": node ids must be >= 0");
    Edge e;
    e.src = static_cast<std::size_t>(src);
    e.dst = static_cast<std::size_t>(dst);
    std::string wtok;
    if (ls >> wtok) {
      // strtod instead of stream extraction so "nan"/"inf" parse and then
      // fail the constructor's finiteness check rather than look like junk
      char* end = nullptr;
      e.weight = std::strtod(wtok.c_str(), &end);
      if (end == wtok.c_str() || *end != '\0')
        throw ParseError("line " + std::to_string(lineno) +
                         ": weight is not a number");
    } else {
      e.weight = 1.0;
    }
    std::string junk;
    if (ls >> junk)
      throw ParseError("line " + std::to_string(lineno) +
                       ": trailing tokens after edge");
    max_id = std::max(max_id, std::max(e.src, e.dst));
    saw_edge = true;
    edges.push_back(e);
  }
  std::size_t n = 0;
  if (declared_n > 0) {
    n = static_cast<std::size_t>(declared_n);
  } else if (saw_edge) {
    n = max_id + 1;
  } else {
    throw EmptyGraph("edge list has no edges and no #n directive");
  }
  return AdjacencyGraph(n, std::move(edges));
}

/// Writes the canonical form read back by parse_edge_list. Unit weights are
/// omitted; other weights keep full round-trip precision.
inline void write_edge_list(const AdjacencyGraph& g, std::ostream& out) {
  out << "#n " << g.n() << "\n";
  out.precision(std::numeric_limits<double>::max_digits10);
  for (const Edge& e : g.edges()) {
    out << e.src << ' ' << e.dst;
    if (e.weight != 1.0) out << ' ' << e.weight;
    out << "\n";
  }
}

}  // namespace pagerank
