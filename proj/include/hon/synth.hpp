#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "hon/error.hpp"
#include "hon/graph.hpp"
#include "hon/parallel.hpp"
#include "hon/random.hpp"
#include "hon/trajectory.hpp"
#include "hon/tuple_hash.hpp"

namespace hon {

/// Random strongly connected digraph on nodes "0".."n-1": a directed ring
/// plus `extra_out` distinct random edges per node (no self-loops).
inline FirstOrderGraph random_strongly_connected_graph(std::size_t n, std::size_t extra_out,
                                                       std::uint64_t seed) {
  if (n < 2)
    throw Error(ErrorKind::usage, "graph needs at least 2 nodes");
  extra_out = std::min(extra_out, n - 2);
  LabelTable labels;
  for (std::size_t i = 0; i < n; ++i)
    labels.intern(std::to_string(i));
  Rng rng(seed);
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (NodeId u = 0; u < n; ++u) {
    std::vector<NodeId> targets{static_cast<NodeId>((u + 1) % n)};
    while (targets.size() < extra_out + 1) {
      const auto v = static_cast<NodeId>(rng.below(n));
      if (v != u && std::find(targets.begin(), targets.end(), v) == targets.end())
        targets.push_back(v);
    }
    for (auto v : targets)
      edges.emplace_back(u, v, 1.0);
  }
  return FirstOrderGraph(std::move(labels), std::move(edges), false);
}

/// A k-th order chain on a base graph: every walk of k nodes maps to a
/// distribution over out-neighbors of its last node.
struct PlantedModel {
  FirstOrderGraph base_graph;
  std::size_t order = 1;
  std::unordered_map<NodeTuple, std::vector<std::pair<NodeId, double>>, TupleHash> table;
  std::vector<double> start_distribution;
  std::uint64_t seed = 0;

  double transition_prob(const NodeTuple& context, NodeId next) const {
    auto it = table.find(context);
    if (it == table.end())
      return 0.0;
    for (const auto& [v, p] : it->second)
      if (v == next)
        return p;
    return 0.0;
  }
  bool absorbing(const NodeTuple& context) const {
    auto it = table.find(context);
    return it == table.end() || it->second.empty();
  }
};

/// Draws each context's successor distribution from a symmetric Dirichlet
/// with concentration `skew` (small: nearly deterministic; infinite:
/// uniform). Start nodes are uniform.
inline PlantedModel random_planted_model(const FirstOrderGraph& g, std::size_t k, double skew,
                                         std::uint64_t seed) {
  if (k < 1)
    throw Error(ErrorKind::usage, "order must be >= 1");
  if (!(skew > 0.0))
    throw Error(ErrorKind::usage, "skew must be positive");
  PlantedModel pm;
  pm.base_graph = g;
  pm.order = k;
  pm.seed = seed;
  pm.start_distribution.assign(g.node_count(), 1.0 / static_cast<double>(g.node_count()));

  // Contexts in depth-first, node-index order so that keyed streams are stable.
  std::vector<NodeTuple> contexts;
  NodeTuple stack;
  auto extend = [&](auto&& self) -> void {
    if (stack.size() == k) {
      contexts.push_back(stack);
      return;
    }
    for (NodeId v : g.out_neighbors(stack.back())) {
      stack.push_back(v);
      self(self);
      stack.pop_back();
    }
  };
  for (NodeId u = 0; u < g.node_count(); ++u) {
    stack.assign(1, u);
    extend(extend);
  }
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    auto nbrs = g.out_neighbors(contexts[c].back());
    std::vector<std::pair<NodeId, double>> dist;
    if (!nbrs.empty()) {
      Rng rng = Rng::keyed(seed, c);
      std::vector<double> w(nbrs.size(), 1.0);
      if (std::isfinite(skew))
        for (auto& x : w)
          x = rng.gamma(skew);
      double total = 0.0;
      for (double x : w)
        total += x;
      if (!(total > 0.0)) {
        std::fill(w.begin(), w.end(), 1.0);
        total = static_cast<double>(w.size());
      }
      for (std::size_t i = 0; i < nbrs.size(); ++i)
        dist.emplace_back(nbrs[i], w[i] / total);
    }
    pm.table.emplace(std::move(contexts[c]), std::move(dist));
  }
  return pm;
}

struct GenerationStats {
  /// Paths cut short by a dead end before reaching their drawn length.
  std::uint64_t truncated = 0;
};

struct GeneratedCorpus {
  PathCorpus corpus;
  GenerationStats stats;
};

namespace detail {

template <class Weights>
std::size_t sample_index(Rng& rng, const Weights& weights) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0)
      last_positive = i;
    acc += weights[i];
    if (u < acc)
      return i;
  }
  return last_positive;
}

} // namespace detail

/// Generates `n_paths` trajectories with lengths uniform in
/// [min_length, max_length]. The first order-1 steps pick uniform
/// out-neighbors; later steps follow the planted table. Path i uses its own
/// keyed random stream, so the output is independent of `threads`.
inline GeneratedCorpus generate_corpus(const PlantedModel& pm, std::size_t n_paths,
                                       std::size_t min_length, std::size_t max_length,
                                       std::uint64_t seed, unsigned threads = 1) {
  if (n_paths < 1)
    throw Error(ErrorKind::usage, "need at least one path");
  if (min_length < pm.order + 1 || max_length < min_length)
    throw Error(ErrorKind::usage, "length range must satisfy order+1 <= min <= max");
  const auto& g = pm.base_graph;
  std::vector<Path> paths(n_paths);
  std::vector<char> cut(n_paths, 0);
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (n_paths + kBlock - 1) / kBlock;
  parallel_blocks(blocks, threads, [&](std::size_t b) {
    NodeTuple context(pm.order);
    const std::size_t end = std::min(n_paths, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      Rng rng = Rng::keyed(seed, i);
      const std::size_t length =
          min_length + static_cast<std::size_t>(rng.below(max_length - min_length + 1));
      auto& nodes = paths[i].nodes;
      nodes.reserve(length);
      nodes.push_back(
          static_cast<NodeId>(detail::sample_index(rng, pm.start_distribution)));
      while (nodes.size() < length) {
        if (nodes.size() < pm.order) {
          auto nbrs = g.out_neighbors(nodes.back());
          if (nbrs.empty())
            break;
          nodes.push_back(nbrs[rng.below(nbrs.size())]);
          continue;
        }
        std::copy(nodes.end() - static_cast<std::ptrdiff_t>(pm.order), nodes.end(),
                  context.begin());
        auto it = pm.table.find(context);
        if (it == pm.table.end() || it->second.empty())
          break;
        const auto& dist = it->second;
        std::vector<double> w(dist.size());
        for (std::size_t j = 0; j < dist.size(); ++j)
          w[j] = dist[j].second;
        nodes.push_back(dist[detail::sample_index(rng, w)].first);
      }
      cut[i] = nodes.size() < length ? 1 : 0;
    }
  });
  GeneratedCorpus out;
  out.corpus.labels = g.labels();
  out.corpus.paths = std::move(paths);
  for (char c : cut)
    out.stats.truncated += c;
  return out;
}

} // namespace hon
