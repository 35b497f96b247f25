#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hon/error.hpp"
#include "hon/graph.hpp"
#include "hon/labels.hpp"
#include "hon/shortest_paths.hpp"
#include "hon/trajectory.hpp"
#include "hon/tuple_hash.hpp"

namespace hon {

/// Log-likelihood value marking a path that the model cannot produce.
inline constexpr double kImpossible = -std::numeric_limits<double>::infinity();

inline bool is_impossible(double log_likelihood) {
  return log_likelihood == kImpossible;
}

/// Order-k de Bruijn model: nodes are k-tuples of first-order nodes, an edge
/// <v1..vk> -> <v2..vk+1> carries the probability of v_{k+1} given v1..vk.
///
/// Out-edges of every node are stored contiguously and sorted by the
/// first-order node they append.
class HigherOrderModel {
public:
  using Index = std::uint32_t;

  std::size_t order() const noexcept { return order_; }
  bool attributed() const noexcept { return attributed_; }
  const LabelTable& labels() const noexcept { return labels_; }
  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  std::span<const NodeId> node(Index h) const {
    return {tuples_.data() + static_cast<std::size_t>(h) * order_, order_};
  }
  NodeId first(Index h) const { return tuples_[static_cast<std::size_t>(h) * order_]; }
  NodeId last(Index h) const {
    return tuples_[static_cast<std::size_t>(h) * order_ + order_ - 1];
  }

  std::optional<Index> find(std::span<const NodeId> tuple) const {
    if (tuple.size() != order_)
      return std::nullopt;
    auto it = index_.find(NodeTuple(tuple.begin(), tuple.end()));
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  std::size_t edge_begin(Index h) const { return offsets_[h]; }
  std::size_t edge_end(Index h) const { return offsets_[h + 1]; }
  std::size_t out_degree(Index h) const { return offsets_[h + 1] - offsets_[h]; }
  Index target(std::size_t e) const { return targets_[e]; }
  /// First-order node appended by edge `e`, i.e. last(target(e)).
  NodeId next_node(std::size_t e) const { return next_[e]; }
  std::uint64_t count(std::size_t e) const { return counts_[e]; }
  double prob(std::size_t e) const { return probs_[e]; }

  /// Edge from `h` that appends first-order node `next`, if any.
  std::optional<std::size_t> find_edge(Index h, NodeId next) const {
    auto begin = next_.begin() + static_cast<std::ptrdiff_t>(offsets_[h]);
    auto end = next_.begin() + static_cast<std::ptrdiff_t>(offsets_[h + 1]);
    auto it = std::lower_bound(begin, end, next);
    if (it == end || *it != next)
      return std::nullopt;
    return static_cast<std::size_t>(it - next_.begin());
  }

  /// Probability of `next` after `context` (exactly k nodes); 0 when either
  /// the context or the transition is unseen.
  double transition_prob(std::span<const NodeId> context, NodeId next) const {
    auto h = find(context);
    if (!h)
      return 0.0;
    auto e = find_edge(*h, next);
    return e ? probs_[*e] : 0.0;
  }

  const FirstOrderGraph* first_order() const noexcept { return first_order_.get(); }
  void attach_first_order(std::shared_ptr<const FirstOrderGraph> g) {
    first_order_ = std::move(g);
  }

  /// Paths that were too short to contribute a window at this order.
  std::uint64_t skipped_paths() const noexcept { return skipped_paths_; }

  /// Edge costs for shortest-path analytics.
  CostGraph cost_graph(bool neg_log_prob) const {
    CostGraph cg;
    cg.offsets.assign(offsets_.begin(), offsets_.end());
    cg.targets.assign(targets_.begin(), targets_.end());
    cg.costs.resize(targets_.size());
    for (std::size_t e = 0; e < targets_.size(); ++e) {
      if (!neg_log_prob) {
        cg.costs[e] = 1.0;
        continue;
      }
      if (!(probs_[e] > 0.0))
        throw ValidationError("zero-probability edge in neg-log-prob mode");
      cg.costs[e] = std::max(0.0, -std::log(probs_[e]));
    }
    return cg;
  }

  /// Assembles a model from explicit parts; used by the builders and the
  /// model reader. Edges are (from, to, count, prob).
  struct EdgeSpec {
    Index from;
    Index to;
    std::uint64_t count;
    double prob;
  };

  static HigherOrderModel assemble(std::size_t order, bool attributed,
                                   LabelTable labels, std::vector<NodeId> tuples,
                                   std::vector<EdgeSpec> edges) {
    if (order < 1)
      throw Error(ErrorKind::usage, "order must be >= 1");
    if (tuples.size() % order != 0)
      throw ValidationError("node tuple storage does not match order");
    HigherOrderModel m;
    m.order_ = order;
    m.attributed_ = attributed;
    m.labels_ = std::move(labels);
    m.tuples_ = std::move(tuples);
    m.node_count_ = m.tuples_.size() / order;
    for (NodeId v : m.tuples_)
      if (v >= m.labels_.size())
        throw ValidationError("node tuple references unknown label");
    m.index_.reserve(m.node_count_);
    for (Index h = 0; h < m.node_count_; ++h) {
      auto t = m.node(h);
      if (!m.index_.emplace(NodeTuple(t.begin(), t.end()), h).second)
        throw ValidationError("duplicate higher-order node");
    }
    for (const auto& e : edges) {
      if (e.from >= m.node_count_ || e.to >= m.node_count_)
        throw ValidationError("edge references unknown higher-order node");
      auto a = m.node(e.from);
      auto b = m.node(e.to);
      if (!std::equal(a.begin() + 1, a.end(), b.begin()))
        throw ValidationError("edge violates the de Bruijn overlap rule");
    }
    std::sort(edges.begin(), edges.end(), [&](const EdgeSpec& x, const EdgeSpec& y) {
      if (x.from != y.from)
        return x.from < y.from;
      return m.last(x.to) < m.last(y.to);
    });
    m.offsets_.assign(m.node_count_ + 1, 0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (i > 0 && edges[i].from == edges[i - 1].from &&
          edges[i].to == edges[i - 1].to)
        throw ValidationError("duplicate higher-order edge");
      ++m.offsets_[edges[i].from + 1];
    }
    for (std::size_t h = 0; h < m.node_count_; ++h)
      m.offsets_[h + 1] += m.offsets_[h];
    m.targets_.reserve(edges.size());
    for (const auto& e : edges) {
      m.targets_.push_back(e.to);
      m.next_.push_back(m.last(e.to));
      m.counts_.push_back(e.count);
      m.probs_.push_back(e.prob);
    }
    return m;
  }

  void set_skipped_paths(std::uint64_t n) { skipped_paths_ = n; }

private:
  std::size_t order_ = 1;
  bool attributed_ = true;
  LabelTable labels_;
  std::size_t node_count_ = 0;
  std::vector<NodeId> tuples_;
  std::unordered_map<NodeTuple, Index, TupleHash> index_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> targets_;
  std::vector<NodeId> next_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> probs_;
  std::shared_ptr<const FirstOrderGraph> first_order_;
  std::uint64_t skipped_paths_ = 0;
};

namespace detail {

/// Interns k-tuples in first-seen order.
class TupleInterner {
public:
  explicit TupleInterner(std::size_t k) : k_(k) {}

  HigherOrderModel::Index intern(const NodeId* begin) {
    key_.assign(begin, begin + k_);
    auto [it, inserted] =
        index_.try_emplace(key_, static_cast<HigherOrderModel::Index>(index_.size()));
    if (inserted)
      tuples_.insert(tuples_.end(), begin, begin + k_);
    return it->second;
  }

  std::size_t size() const { return index_.size(); }
  std::vector<NodeId> take_tuples() { return std::move(tuples_); }

private:
  std::size_t k_;
  NodeTuple key_;
  std::unordered_map<NodeTuple, HigherOrderModel::Index, TupleHash> index_;
  std::vector<NodeId> tuples_;
};

inline void assign_probabilities(std::vector<HigherOrderModel::EdgeSpec>& edges,
                                 std::size_t node_count, bool attributed) {
  std::vector<std::uint64_t> totals(node_count, 0);
  std::vector<std::uint64_t> degree(node_count, 0);
  for (const auto& e : edges) {
    totals[e.from] += e.count;
    ++degree[e.from];
  }
  for (auto& e : edges)
    e.prob = attributed ? static_cast<double>(e.count) / static_cast<double>(totals[e.from])
                        : 1.0 / static_cast<double>(degree[e.from]);
}

} // namespace detail

/// Order-k model from observed (k+1)-windows. Attributed models use the
/// maximum-likelihood estimate count(context, next) / count(context);
/// non-attributed ones are uniform over observed successors.
inline HigherOrderModel build_from_paths(const PathCorpus& corpus, std::size_t k,
                                         bool attributed) {
  if (k < 1)
    throw Error(ErrorKind::usage, "order must be >= 1");
  detail::TupleInterner nodes(k);
  std::unordered_map<std::uint64_t, std::uint64_t> edge_counts;
  std::vector<std::uint64_t> edge_order;
  std::uint64_t skipped = 0;
  for (const auto& p : corpus.paths) {
    if (p.length() <= k) {
      skipped += p.multiplicity;
      continue;
    }
    auto prev = nodes.intern(p.nodes.data());
    for (std::size_t i = 1; i + k <= p.length(); ++i) {
      auto cur = nodes.intern(p.nodes.data() + i);
      const std::uint64_t key = (std::uint64_t{prev} << 32) | cur;
      auto [it, inserted] = edge_counts.try_emplace(key, 0);
      if (inserted)
        edge_order.push_back(key);
      it->second += p.multiplicity;
      prev = cur;
    }
  }
  if (edge_counts.empty())
    throw EmptyModelError("no window of length " + std::to_string(k + 1) +
                          " in corpus (order " + std::to_string(k) +
                          ", longest path has " + std::to_string(corpus.max_length()) +
                          " nodes)");
  std::vector<HigherOrderModel::EdgeSpec> edges;
  edges.reserve(edge_order.size());
  for (auto key : edge_order)
    edges.push_back({static_cast<HigherOrderModel::Index>(key >> 32),
                     static_cast<HigherOrderModel::Index>(key & 0xffffffffu),
                     edge_counts[key], 0.0});
  const std::size_t n = nodes.size();
  detail::assign_probabilities(edges, n, attributed);
  auto model = HigherOrderModel::assemble(k, attributed, corpus.labels,
                                          nodes.take_tuples(), std::move(edges));
  model.set_skipped_paths(skipped);
  return model;
}

inline constexpr std::size_t kDefaultNodeCap = 10'000'000;

/// Order-k model over all walks of k nodes in `g`, uniform over out-degree.
inline HigherOrderModel build_from_topology(const FirstOrderGraph& g, std::size_t k,
                                            std::size_t node_cap = kDefaultNodeCap) {
  if (k < 1)
    throw Error(ErrorKind::usage, "order must be >= 1");
  const std::size_t n = g.node_count();
  // walks[u] = number of walks with j nodes starting at u, saturating at cap+1.
  std::vector<std::uint64_t> walks(n, 1);
  const std::uint64_t limit = static_cast<std::uint64_t>(node_cap) + 1;
  for (std::size_t j = 1; j < k; ++j) {
    std::vector<std::uint64_t> next(n, 0);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v : g.out_neighbors(u))
        next[u] = std::min(limit, next[u] + walks[v]);
    walks = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto w : walks)
    total = std::min(limit, total + w);
  if (total > node_cap)
    throw SizeLimitError("order-" + std::to_string(k) + " topology model exceeds " +
                         std::to_string(node_cap) + " nodes");

  std::vector<NodeId> tuples;
  tuples.reserve(static_cast<std::size_t>(total) * k);
  NodeTuple stack;
  // Depth-first enumeration in (label index) lexicographic order.
  auto extend = [&](auto&& self) -> void {
    if (stack.size() == k) {
      tuples.insert(tuples.end(), stack.begin(), stack.end());
      return;
    }
    for (NodeId v : g.out_neighbors(stack.back())) {
      stack.push_back(v);
      self(self);
      stack.pop_back();
    }
  };
  for (NodeId u = 0; u < n; ++u) {
    stack.assign(1, u);
    extend(extend);
  }
  const std::size_t m = tuples.size() / k;
  std::unordered_map<NodeTuple, HigherOrderModel::Index, TupleHash> index;
  index.reserve(m);
  for (HigherOrderModel::Index h = 0; h < m; ++h)
    index.emplace(NodeTuple(tuples.begin() + static_cast<std::ptrdiff_t>(h * k),
                            tuples.begin() + static_cast<std::ptrdiff_t>((h + 1) * k)),
                  h);
  std::vector<HigherOrderModel::EdgeSpec> edges;
  NodeTuple shifted(k);
  for (HigherOrderModel::Index h = 0; h < m; ++h) {
    const NodeId* t = tuples.data() + static_cast<std::size_t>(h) * k;
    std::copy(t + 1, t + k, shifted.begin());
    const auto deg = g.out_degree(t[k - 1]);
    for (NodeId w : g.out_neighbors(t[k - 1])) {
      shifted[k - 1] = w;
      edges.push_back({h, index.at(shifted), 0, 1.0 / static_cast<double>(deg)});
    }
  }
  return HigherOrderModel::assemble(k, false, g.labels(), std::move(tuples),
                                    std::move(edges));
}

/// Order-1 model of a graph: row-stochastic transitions, attributed iff the
/// graph is weighted.
inline HigherOrderModel model_from_graph(const FirstOrderGraph& g) {
  const auto probs = row_stochastic_transitions(g);
  std::vector<NodeId> tuples(g.node_count());
  std::iota(tuples.begin(), tuples.end(), NodeId{0});
  std::vector<HigherOrderModel::EdgeSpec> edges;
  edges.reserve(g.edge_count());
  std::size_t e = 0;
  for (const auto& [u, v, w] : g.edges()) {
    const auto count = static_cast<std::uint64_t>(std::llround(w));
    edges.push_back({u, v, count, probs[e++]});
  }
  return HigherOrderModel::assemble(1, g.weighted(), g.labels(), std::move(tuples),
                                    std::move(edges));
}

/// count(context + next) / count(context).
inline double mle_transition(const SubpathCounts& counts, const NodeTuple& context,
                             NodeId next) {
  auto it = counts.context_totals.find(context);
  if (it == counts.context_totals.end() || it->second == 0)
    throw UnseenContextError("context of length " + std::to_string(context.size()) +
                             " never observed");
  NodeTuple window(context);
  window.push_back(next);
  return static_cast<double>(counts.count(window)) / static_cast<double>(it->second);
}

/// Sum of log transition probabilities over all (k+1)-windows of `p`.
inline double path_likelihood(const HigherOrderModel& m, const Path& p) {
  const std::size_t k = m.order();
  if (p.length() <= k)
    throw ValidationError("path of " + std::to_string(p.length()) +
                          " nodes has no window at order " + std::to_string(k));
  auto h = m.find(std::span<const NodeId>(p.nodes.data(), k));
  if (!h)
    return kImpossible;
  double ll = 0.0;
  for (std::size_t i = k; i < p.length(); ++i) {
    auto e = m.find_edge(*h, p.nodes[i]);
    if (!e || !(m.prob(*e) > 0.0))
      return kImpossible;
    ll += std::log(m.prob(*e));
    h = m.target(*e);
  }
  return ll;
}

/// Multiplicity-weighted sum of path log-likelihoods; paths with at most k
/// nodes contribute nothing.
inline double corpus_likelihood(const HigherOrderModel& m, const PathCorpus& corpus) {
  double ll = 0.0;
  for (const auto& p : corpus.paths) {
    if (p.length() <= m.order())
      continue;
    const double x = path_likelihood(m, p);
    if (is_impossible(x))
      return kImpossible;
    ll += static_cast<double>(p.multiplicity) * x;
  }
  return ll;
}

} // namespace hon
