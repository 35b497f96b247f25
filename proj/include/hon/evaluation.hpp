#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "hon/betweenness.hpp"
#include "hon/error.hpp"
#include "hon/ground_truth.hpp"
#include "hon/metrics.hpp"
#include "hon/multi_order.hpp"
#include "hon/pagerank.hpp"
#include "hon/prediction.hpp"
#include "hon/trajectory.hpp"

namespace hon {

struct SweepOptions {
  std::size_t max_order = 5;
  double split = 0.5;
  std::uint64_t seed = 42;
  PageRankOptions pagerank;
  PairAggregation pairs = PairAggregation::higher_order_pairs;
  unsigned threads = 0;
  /// Optional base graph for prediction fallback on dead ends.
  std::shared_ptr<const FirstOrderGraph> graph;
};

struct SweepRow {
  std::size_t k = 1;
  std::string variant;
  std::string metric;
  double value = 0.0;
};

struct SweepResult {
  std::size_t max_order = 0;
  std::uint64_t train_paths = 0;
  std::uint64_t test_paths = 0;
  std::size_t prediction_samples = 0;
  std::vector<std::string> warnings;
  std::vector<SweepRow> rows;

  double value(std::size_t k, const std::string& variant, const std::string& metric) const {
    for (const auto& r : rows)
      if (r.k == k && r.variant == variant && r.metric == metric)
        return r.value;
    throw Error(ErrorKind::usage, "no sweep value for k=" + std::to_string(k) + " " + variant +
                                      " " + metric);
  }
};

/// Orders 1..K on one train/test split of trajectories: models are trained
/// on the train side, ground truth and prediction samples come from the test
/// side. Betweenness is compared with traversal frequencies, PageRank with
/// visitation frequencies.
inline SweepResult evaluate_orders(const PathCorpus& corpus, const SweepOptions& opt) {
  if (opt.max_order < 1)
    throw Error(ErrorKind::usage, "maximum order must be >= 1");
  auto [train, test] = train_test_split(corpus, opt.split, opt.seed);
  if (train.empty() || test.empty())
    throw ValidationError("split left an empty train or test side");
  SweepResult out;
  out.train_paths = train.total_paths();
  out.test_paths = test.total_paths();
  const auto truth_bc = ground_truth_frequencies(test, GroundTruthMode::traversal);
  const auto truth_pr = ground_truth_frequencies(test, GroundTruthMode::visitation);

  for (bool attributed : {true, false}) {
    const char* variant = attributed ? "attributed" : "non_attributed";
    auto full = build_multi_order(train, opt.max_order, attributed);
    if (opt.graph)
      full.attach_first_order(opt.graph);
    if (attributed) {
      out.max_order = full.max_order();
      out.warnings = full.warnings();
    }
    const auto samples = prediction_samples(test, full.max_order());
    out.prediction_samples = samples.size();
    auto emit = [&](std::size_t k, const char* metric, double v) {
      out.rows.push_back({k, variant, metric, v});
    };
    for (std::size_t k = 1; k <= full.max_order(); ++k) {
      const auto& model = full.layer(k);
      BetweennessOptions bopt;
      bopt.weight_mode = attributed ? WeightMode::neg_log_prob : WeightMode::unit;
      bopt.pairs = opt.pairs;
      bopt.threads = opt.threads;
      const auto bc = compare_to_ground_truth(truth_bc, ho_betweenness(model, bopt));
      auto popt = opt.pagerank;
      popt.threads = opt.threads;
      const auto pr = ho_pagerank(model, popt);
      const auto pr_cmp = compare_to_ground_truth(truth_pr, project_pagerank(model, pr.scores));
      const auto ps = evaluate_prediction(full.truncated(k), samples);
      emit(k, "betweenness_kl", bc.kl);
      emit(k, "betweenness_tau", bc.tau);
      emit(k, "pagerank_kl", pr_cmp.kl);
      emit(k, "pagerank_tau", pr_cmp.tau);
      emit(k, "prediction_cross_entropy", ps.cross_entropy);
      emit(k, "prediction_accuracy", ps.accuracy);
    }
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.k < b.k; });
  return out;
}

} // namespace hon
