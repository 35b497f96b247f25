#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "hon/error.hpp"
#include "hon/graph.hpp"

namespace hon {

enum class CostMode { unit, weighted };

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Relative tolerance under which two path costs count as equal.
inline constexpr double kCostTolerance = 1e-9;

inline bool cost_equal(double a, double b) {
  return std::abs(a - b) <= kCostTolerance * std::max(1.0, std::abs(a));
}

inline bool cost_less(double a, double b) { return a < b && !cost_equal(a, b); }

/// CSR adjacency with per-edge traversal costs; the common input of all
/// shortest-path computations (first-order and higher-order).
struct CostGraph {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> targets;
  std::vector<double> costs;

  std::size_t node_count() const noexcept { return offsets.size() - 1; }
};

inline CostGraph cost_graph(const FirstOrderGraph& g, CostMode mode) {
  CostGraph cg;
  cg.offsets.assign(g.node_count() + 1, 0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    cg.offsets[u + 1] = cg.offsets[u] + g.out_degree(u);
    auto nbrs = g.out_neighbors(u);
    auto w = g.out_weights(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      cg.targets.push_back(nbrs[i]);
      cg.costs.push_back(mode == CostMode::unit ? 1.0 : w[i]);
    }
  }
  return cg;
}

/// Shortest-path DAG rooted at one source.
///
/// Paths are ranked by total cost, then by hop count. Equal cost uses
/// kCostTolerance. The hop rank keeps the DAG acyclic when zero-cost edges
/// are present; with positive costs it only matters on exact cost ties.
struct ShortestPathSummary {
  std::uint32_t source = 0;
  std::vector<double> dist;
  std::vector<std::uint32_t> hops;
  std::vector<std::uint64_t> sigma;
  std::vector<std::vector<std::uint32_t>> preds;
  /// Reached nodes in non-decreasing (dist, hops) order; source first.
  std::vector<std::uint32_t> order;
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out))
    throw OverflowError("shortest-path count exceeds 64 bits");
  return out;
}

} // namespace detail

/// Fills `sp` for `source`, reusing its buffers.
inline void shortest_paths_into(const CostGraph& g, std::uint32_t source,
                                ShortestPathSummary& sp) {
  const std::size_t n = g.node_count();
  sp.source = source;
  sp.dist.assign(n, kInfinity);
  sp.hops.assign(n, std::numeric_limits<std::uint32_t>::max());
  sp.sigma.assign(n, 0);
  sp.preds.resize(n);
  for (auto& p : sp.preds)
    p.clear();
  sp.order.clear();

  struct Entry {
    double dist;
    std::uint32_t hops;
    std::uint32_t node;
    bool operator>(const Entry& o) const {
      if (dist != o.dist)
        return dist > o.dist;
      if (hops != o.hops)
        return hops > o.hops;
      return node > o.node;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<char> settled(n, 0);

  sp.dist[source] = 0.0;
  sp.hops[source] = 0;
  sp.sigma[source] = 1;
  heap.push({0.0, 0, source});
  while (!heap.empty()) {
    const Entry top = heap.top();
    heap.pop();
    const std::uint32_t u = top.node;
    if (settled[u] || top.dist != sp.dist[u] || top.hops != sp.hops[u])
      continue;
    settled[u] = 1;
    sp.order.push_back(u);
    for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
      const std::uint32_t v = g.targets[e];
      if (v == u || settled[v])
        continue;
      const double nd = sp.dist[u] + g.costs[e];
      const std::uint32_t nh = sp.hops[u] + 1;
      const bool unseen = sp.sigma[v] == 0;
      const bool cheaper = unseen || cost_less(nd, sp.dist[v]);
      if (cheaper || (cost_equal(nd, sp.dist[v]) && nh < sp.hops[v])) {
        sp.dist[v] = cheaper ? nd : std::min(nd, sp.dist[v]);
        sp.hops[v] = nh;
        sp.sigma[v] = sp.sigma[u];
        sp.preds[v].assign(1, u);
        heap.push({sp.dist[v], nh, v});
      } else if (cost_equal(nd, sp.dist[v]) && nh == sp.hops[v]) {
        sp.sigma[v] = detail::checked_add(sp.sigma[v], sp.sigma[u]);
        sp.preds[v].push_back(u);
        if (nd < sp.dist[v]) {
          sp.dist[v] = nd;
          heap.push({nd, nh, v});
        }
      }
    }
  }
}

inline ShortestPathSummary single_source_shortest_paths(const CostGraph& g,
                                                        std::uint32_t source) {
  if (source >= g.node_count())
    throw ValidationError("source node out of range");
  ShortestPathSummary sp;
  shortest_paths_into(g, source, sp);
  return sp;
}

inline ShortestPathSummary single_source_shortest_paths(const FirstOrderGraph& g,
                                                        NodeId source,
                                                        CostMode mode) {
  return single_source_shortest_paths(cost_graph(g, mode), source);
}

} // namespace hon
