#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hon/error.hpp"
#include "hon/multi_order.hpp"

namespace hon {

struct PredictionResult {
  NodeTuple context;
  /// (next node, probability), ascending by node id.
  std::vector<std::pair<NodeId, double>> distribution;
  NodeId top = 0;
  /// Layer that produced the distribution; 0 for the first-order graph fallback.
  std::size_t used_order = 0;

  double prob(NodeId v) const {
    for (const auto& [w, p] : distribution)
      if (w == v)
        return p;
    return 0.0;
  }
};

class UnknownNodeError : public Error {
public:
  explicit UnknownNodeError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class DeadEndError : public Error {
public:
  explicit DeadEndError(const std::string& what) : Error(ErrorKind::data, what) {}
};

namespace detail {

inline NodeId argmax_by_label(const LabelTable& labels,
                              const std::vector<std::pair<NodeId, double>>& dist) {
  NodeId best = dist.front().first;
  double best_p = dist.front().second;
  for (const auto& [v, p] : dist)
    if (p > best_p || (p == best_p && labels.label(v) < labels.label(best))) {
      best = v;
      best_p = p;
    }
  return best;
}

} // namespace detail

/// Next-node distribution from the longest context suffix (at most K nodes)
/// that the model has seen with successors. Falls back through shorter
/// suffixes, then to a uniform choice over first-order out-neighbors when a
/// graph is attached.
inline PredictionResult predict_next(const MultiOrderModel& m, std::span<const NodeId> context) {
  if (context.empty())
    throw ValidationError("prediction needs a nonempty context");
  const NodeId last = context.back();
  if (last >= m.labels().size())
    throw UnknownNodeError("context ends in a node unknown to the model");
  PredictionResult out;
  out.context.assign(context.begin(), context.end());
  for (std::size_t k = std::min(m.max_order(), context.size()); k >= 1; --k) {
    const auto& layer = m.layer(k);
    auto h = layer.find(context.subspan(context.size() - k));
    if (!h || layer.out_degree(*h) == 0)
      continue;
    for (std::size_t e = layer.edge_begin(*h); e < layer.edge_end(*h); ++e)
      out.distribution.emplace_back(layer.next_node(e), layer.prob(e));
    out.used_order = k;
    out.top = detail::argmax_by_label(m.labels(), out.distribution);
    return out;
  }
  if (const auto* g = m.first_order()) {
    auto gid = g->labels().find(m.labels().label(last));
    if (gid && g->out_degree(*gid) > 0) {
      const double p = 1.0 / static_cast<double>(g->out_degree(*gid));
      for (NodeId w : g->out_neighbors(*gid))
        if (auto mid = m.labels().find(g->labels().label(w)))
          out.distribution.emplace_back(*mid, p);
      if (!out.distribution.empty()) {
        std::sort(out.distribution.begin(), out.distribution.end());
        out.used_order = 0;
        out.top = detail::argmax_by_label(m.labels(), out.distribution);
        return out;
      }
    }
  }
  throw DeadEndError("no successors known for node '" + m.labels().label(last) + "'");
}

struct PredictionSample {
  NodeTuple context;
  NodeId next = 0;
  std::uint64_t weight = 1;
};

/// One sample per transition of every path; the context is the preceding
/// nodes, truncated to the last `max_context`.
inline std::vector<PredictionSample> prediction_samples(const PathCorpus& corpus,
                                                        std::size_t max_context) {
  if (max_context < 1)
    throw Error(ErrorKind::usage, "context length must be >= 1");
  std::vector<PredictionSample> out;
  for (const auto& p : corpus.paths)
    for (std::size_t j = 1; j < p.length(); ++j) {
      const std::size_t from = j > max_context ? j - max_context : 0;
      out.push_back({NodeTuple(p.nodes.begin() + static_cast<std::ptrdiff_t>(from),
                               p.nodes.begin() + static_cast<std::ptrdiff_t>(j)),
                     p.nodes[j], p.multiplicity});
    }
  return out;
}

inline constexpr double kProbabilityFloor = 1e-12;

struct PredictionScore {
  double cross_entropy = 0.0;
  double accuracy = 0.0;
  std::uint64_t samples = 0;
  /// Samples whose context could not be resolved (unknown node or dead end).
  std::uint64_t unresolved = 0;
};

/// Mean negative log-probability of the true next node (floored at 1e-12)
/// and the fraction of samples whose top prediction is correct.
inline PredictionScore evaluate_prediction(const MultiOrderModel& m,
                                           std::span<const PredictionSample> samples) {
  if (samples.empty())
    throw ValidationError("prediction evaluation needs at least one sample");
  PredictionScore s;
  double loss = 0.0;
  double correct = 0.0;
  double total = 0.0;
  for (const auto& sample : samples) {
    const double w = static_cast<double>(sample.weight);
    total += w;
    s.samples += sample.weight;
    double p = 0.0;
    try {
      auto pred = predict_next(m, sample.context);
      p = pred.prob(sample.next);
      if (pred.top == sample.next)
        correct += w;
    } catch (const UnknownNodeError&) {
      s.unresolved += sample.weight;
    } catch (const DeadEndError&) {
      s.unresolved += sample.weight;
    }
    loss += -w * std::log(std::max(p, kProbabilityFloor));
  }
  s.cross_entropy = loss / total;
  s.accuracy = correct / total;
  return s;
}

} // namespace hon
