#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hon/error.hpp"
#include "hon/gamma.hpp"
#include "hon/graph.hpp"
#include "hon/model.hpp"
#include "hon/trajectory.hpp"

namespace hon {

/// Layers of orders 1..K trained on one corpus, plus the empirical
/// distribution of path start nodes.
class MultiOrderModel {
public:
  using Layer = std::shared_ptr<const HigherOrderModel>;

  MultiOrderModel(LabelTable labels, std::vector<Layer> layers,
                  std::vector<double> start_distribution)
      : labels_(std::move(labels)), layers_(std::move(layers)),
        start_(std::move(start_distribution)) {
    if (layers_.empty())
      throw EmptyModelError("multi-order model needs at least one layer");
    for (std::size_t k = 0; k < layers_.size(); ++k)
      if (layers_[k]->order() != k + 1)
        throw ValidationError("layer " + std::to_string(k + 1) + " has wrong order");
  }

  std::size_t max_order() const noexcept { return layers_.size(); }
  const LabelTable& labels() const noexcept { return labels_; }
  const HigherOrderModel& layer(std::size_t k) const { return *layers_.at(k - 1); }
  const std::vector<double>& start_distribution() const noexcept { return start_; }
  double start_prob(NodeId v) const { return v < start_.size() ? start_[v] : 0.0; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  const FirstOrderGraph* first_order() const noexcept { return first_order_.get(); }
  void attach_first_order(std::shared_ptr<const FirstOrderGraph> g) {
    first_order_ = std::move(g);
  }

  /// The nested model of maximum order k, sharing layers 1..k.
  MultiOrderModel truncated(std::size_t k) const {
    if (k < 1 || k > max_order())
      throw Error(ErrorKind::usage, "truncation order out of range");
    MultiOrderModel m(labels_, {layers_.begin(), layers_.begin() + static_cast<std::ptrdiff_t>(k)},
                      start_);
    m.first_order_ = first_order_;
    return m;
  }

private:
  LabelTable labels_;
  std::vector<Layer> layers_;
  std::vector<double> start_;
  std::vector<std::string> warnings_;
  std::shared_ptr<const FirstOrderGraph> first_order_;
};

/// Trains layers 1..K. Orders without any window of length k+1 are dropped
/// and K is lowered, with a warning recorded on the model.
inline MultiOrderModel build_multi_order(const PathCorpus& corpus, std::size_t max_order,
                                         bool attributed = true) {
  if (max_order < 1)
    throw Error(ErrorKind::usage, "maximum order must be >= 1");
  if (corpus.total_paths() == 0)
    throw EmptyModelError("multi-order model needs a nonempty corpus");
  const std::size_t longest = corpus.max_length();
  const std::size_t feasible = longest > 0 ? std::min(max_order, longest - 1) : 0;
  if (feasible < 1)
    throw EmptyModelError("no path has two or more nodes");
  std::vector<MultiOrderModel::Layer> layers;
  for (std::size_t k = 1; k <= feasible; ++k)
    layers.push_back(std::make_shared<const HigherOrderModel>(
        build_from_paths(corpus, k, attributed)));

  std::vector<double> start(corpus.labels.size(), 0.0);
  const double total = static_cast<double>(corpus.total_paths());
  for (const auto& p : corpus.paths)
    if (!p.nodes.empty())
      start[p.nodes.front()] += static_cast<double>(p.multiplicity);
  for (auto& s : start)
    s /= total;

  MultiOrderModel m(corpus.labels, std::move(layers), std::move(start));
  if (feasible < max_order)
    m.add_warning("maximum order reduced from " + std::to_string(max_order) + " to " +
                  std::to_string(feasible) + ": longest path has " +
                  std::to_string(longest) + " nodes");
  return m;
}

/// Log-likelihood of `p`: the transition into position j (0-based) uses
/// layer min(j, K) with the j or K preceding nodes as context.
inline double multi_order_path_likelihood(const MultiOrderModel& m, const Path& p,
                                          bool condition_on_start = true) {
  if (p.nodes.empty())
    throw ValidationError("empty path");
  double ll = 0.0;
  if (!condition_on_start) {
    const double s = m.start_prob(p.nodes.front());
    if (!(s > 0.0))
      return kImpossible;
    ll += std::log(s);
  }
  const std::size_t K = m.max_order();
  for (std::size_t j = 1; j < p.length(); ++j) {
    const std::size_t k = std::min(j, K);
    const double prob = m.layer(k).transition_prob(
        std::span<const NodeId>(p.nodes.data() + (j - k), k), p.nodes[j]);
    if (!(prob > 0.0))
      return kImpossible;
    ll += std::log(prob);
  }
  return ll;
}

/// Corpus log-likelihoods of the nested models M_1..M_K in one pass.
/// `per_order[k-1][path]` is the log-likelihood of path under M_k.
inline std::vector<std::vector<double>>
nested_path_likelihoods(const MultiOrderModel& m, const PathCorpus& corpus,
                        bool condition_on_start = true) {
  const std::size_t K = m.max_order();
  std::vector<std::vector<double>> out(K, std::vector<double>(corpus.paths.size(), 0.0));
  std::vector<double> layer_ll(K);
  for (std::size_t pi = 0; pi < corpus.paths.size(); ++pi) {
    const auto& nodes = corpus.paths[pi].nodes;
    std::vector<double> total(K, 0.0);
    if (!condition_on_start) {
      const double s = nodes.empty() ? 0.0 : m.start_prob(nodes.front());
      const double ls = s > 0.0 ? std::log(s) : kImpossible;
      std::fill(total.begin(), total.end(), ls);
    }
    for (std::size_t j = 1; j < nodes.size(); ++j) {
      const std::size_t top = std::min(j, K);
      for (std::size_t k = 1; k <= top; ++k) {
        const double prob = m.layer(k).transition_prob(
            std::span<const NodeId>(nodes.data() + (j - k), k), nodes[j]);
        layer_ll[k - 1] = prob > 0.0 ? std::log(prob) : kImpossible;
      }
      for (std::size_t k = 1; k <= K; ++k)
        total[k - 1] += layer_ll[std::min(k, top) - 1];
    }
    for (std::size_t k = 0; k < K; ++k)
      out[k][pi] = total[k];
  }
  return out;
}

/// Free parameters of the order-k multi-order model on `g`:
/// (|V| - 1) + sum_{i=1..k} [sum of entries of A^i - nonzero rows of A^i].
/// Walk counts are propagated as A^i * 1, so row i of A^i is nonzero iff
/// entry i of that vector is.
inline std::uint64_t degrees_of_freedom(const FirstOrderGraph& g, std::size_t k) {
  const std::size_t n = g.node_count();
  if (n == 0)
    throw ValidationError("degrees of freedom need a nonempty graph");
  if (k < 1)
    throw Error(ErrorKind::usage, "order must be >= 1");
  auto add = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out))
      throw OverflowError("walk count overflow in degrees of freedom; "
                          "use an arbitrary-precision build");
    return out;
  };
  std::vector<std::uint64_t> walks(n, 1);
  std::uint64_t dof = n - 1;
  for (std::size_t i = 1; i <= k; ++i) {
    std::vector<std::uint64_t> next(n, 0);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v : g.out_neighbors(u))
        next[u] = add(next[u], walks[v]);
    walks = std::move(next);
    std::uint64_t total = 0;
    std::uint64_t nonzero = 0;
    for (auto w : walks) {
      total = add(total, w);
      nonzero += w > 0 ? 1 : 0;
    }
    dof = add(dof, total - nonzero);
  }
  return dof;
}

struct LrtResult {
  double lambda = 0.0;
  std::uint64_t delta_dof = 0;
  double p_value = 1.0;
  double ll_null = 0.0;
  double ll_alt = 0.0;
  /// Paths impossible under either model, left out of both sums.
  std::uint64_t excluded_paths = 0;
};

/// Relative slack under which a negative statistic is rounding noise.
inline constexpr double kLambdaClampTolerance = 1e-9;

/// Likelihood-ratio test of two log-likelihoods with `delta_dof` extra
/// parameters in the alternative.
inline LrtResult likelihood_ratio_from(double ll_null, double ll_alt,
                                       std::uint64_t delta_dof) {
  if (delta_dof == 0)
    throw Error(ErrorKind::numerical,
                "degenerate likelihood-ratio test: no additional degrees of freedom");
  LrtResult r;
  r.ll_null = ll_null;
  r.ll_alt = ll_alt;
  r.delta_dof = delta_dof;
  double lambda = -2.0 * (ll_null - ll_alt);
  if (lambda < 0.0) {
    const double scale = std::max({1.0, std::abs(ll_null), std::abs(ll_alt)});
    if (-lambda > kLambdaClampTolerance * scale)
      throw Error(ErrorKind::numerical,
                  "nested model has higher likelihood than its extension "
                  "(lambda = " + std::to_string(lambda) + ")");
    lambda = 0.0;
  }
  r.lambda = lambda;
  r.p_value = lambda == 0.0 ? 1.0 : chi_square_sf(lambda, static_cast<double>(delta_dof));
  return r;
}

namespace detail {

inline LrtResult compare_nested(const std::vector<double>& null_ll,
                                const std::vector<double>& alt_ll,
                                const PathCorpus& corpus, std::uint64_t delta_dof) {
  double ll0 = 0.0, ll1 = 0.0;
  std::uint64_t excluded = 0;
  for (std::size_t i = 0; i < corpus.paths.size(); ++i) {
    const auto mult = corpus.paths[i].multiplicity;
    if (is_impossible(null_ll[i]) || is_impossible(alt_ll[i])) {
      excluded += mult;
      continue;
    }
    ll0 += static_cast<double>(mult) * null_ll[i];
    ll1 += static_cast<double>(mult) * alt_ll[i];
  }
  auto r = likelihood_ratio_from(ll0, ll1, delta_dof);
  r.excluded_paths = excluded;
  return r;
}

} // namespace detail

/// Tests M_k (null) against M_{k+1} on `corpus`. Paths impossible under
/// either model are excluded from both sums.
inline LrtResult likelihood_ratio_test(const MultiOrderModel& null_model,
                                       const MultiOrderModel& alt_model,
                                       const PathCorpus& corpus, const FirstOrderGraph& g,
                                       bool condition_on_start = true) {
  const std::size_t k = null_model.max_order();
  if (alt_model.max_order() != k + 1)
    throw Error(ErrorKind::usage, "alternative model must have order k+1");
  std::vector<double> ll0(corpus.paths.size()), ll1(corpus.paths.size());
  for (std::size_t i = 0; i < corpus.paths.size(); ++i) {
    ll0[i] = multi_order_path_likelihood(null_model, corpus.paths[i], condition_on_start);
    ll1[i] = multi_order_path_likelihood(alt_model, corpus.paths[i], condition_on_start);
  }
  const auto d0 = degrees_of_freedom(g, k);
  const auto d1 = degrees_of_freedom(g, k + 1);
  if (d1 <= d0)
    throw Error(ErrorKind::numerical,
                "degenerate likelihood-ratio test: d(k+1) <= d(k)");
  return detail::compare_nested(ll0, ll1, corpus, d1 - d0);
}

struct OrderTestStep {
  std::size_t order = 1; // null order k; alternative is k+1
  LrtResult result;
  bool significant = false;
};

struct OrderDetection {
  std::size_t optimal_order = 1;
  std::size_t max_order = 1; // after feasibility reduction
  std::vector<OrderTestStep> steps;
  std::vector<std::string> warnings;
};

inline constexpr double kDefaultSignificance = 0.01;

/// Tests k against k+1 for k = 1, 2, ... while the step is significant
/// (p < epsilon). The result is the highest order accepted, or 1 when the
/// first step is not significant.
inline OrderDetection detect_optimal_order(const PathCorpus& corpus, const FirstOrderGraph& g,
                                           std::size_t max_order,
                                           double epsilon = kDefaultSignificance,
                                           bool condition_on_start = true) {
  if (max_order < 1)
    throw Error(ErrorKind::usage, "maximum order must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorKind::usage, "significance must lie in (0, 1)");
  auto model = build_multi_order(corpus, max_order, true);
  OrderDetection out;
  out.max_order = model.max_order();
  out.warnings = model.warnings();
  const auto per_order = nested_path_likelihoods(model, corpus, condition_on_start);
  std::vector<std::uint64_t> dof(out.max_order + 1, 0);
  for (std::size_t k = 1; k <= out.max_order; ++k)
    dof[k] = degrees_of_freedom(g, k);
  for (std::size_t k = 1; k < out.max_order; ++k) {
    if (dof[k + 1] <= dof[k])
      throw Error(ErrorKind::numerical,
                  "degenerate likelihood-ratio test at order " + std::to_string(k));
    OrderTestStep step;
    step.order = k;
    step.result = detail::compare_nested(per_order[k - 1], per_order[k], corpus,
                                         dof[k + 1] - dof[k]);
    step.significant = step.result.p_value < epsilon;
    out.steps.push_back(step);
    if (!step.significant)
      break;
    out.optimal_order = k + 1;
  }
  return out;
}

} // namespace hon
