#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "helpers.hpp"
#include "hon/synth.hpp"

using namespace hon;

namespace {

bool strongly_connected(const FirstOrderGraph& g) {
  auto reach = [&](bool forward) {
    std::vector<std::vector<NodeId>> adj(g.node_count());
    for (const auto& [u, v, w] : g.edges())
      forward ? adj[u].push_back(v) : adj[v].push_back(u);
    std::vector<char> seen(g.node_count(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach(true) && reach(false);
}

} // namespace

TEST(Rng, KeyedStreamsDifferAndRepeat) {
  auto a = Rng::keyed(1, 0), b = Rng::keyed(1, 1), c = Rng::keyed(1, 0);
  const auto x = a.next();
  EXPECT_NE(x, b.next());
  EXPECT_EQ(x, c.next());
}

TEST(Rng, GammaMean) {
  Rng rng(61);
  for (double shape : {0.3, 1.0, 4.0}) {
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
      sum += rng.gamma(shape);
    // sd of the mean is sqrt(shape / n)
    EXPECT_NEAR(sum / n, shape, 5 * std::sqrt(shape / n));
  }
}

TEST(Synth, RandomGraphIsStronglyConnected) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto g = random_strongly_connected_graph(20, 2, seed);
    EXPECT_EQ(g.node_count(), 20u);
    EXPECT_EQ(g.edge_count(), 60u);
    EXPECT_TRUE(strongly_connected(g));
  }
}

TEST(Synth, PlantedTablesRespectGraphAndSumToOne) {
  auto g = random_strongly_connected_graph(8, 2, 4);
  auto pm = random_planted_model(g, 3, 0.3, 4);
  EXPECT_EQ(pm.table.size(), 8u * 3u * 3u);
  for (const auto& [ctx, dist] : pm.table) {
    double s = 0.0;
    for (const auto& [v, p] : dist) {
      EXPECT_TRUE(g.has_edge(ctx.back(), v));
      s += p;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  auto again = random_planted_model(g, 3, 0.3, 4);
  EXPECT_EQ(again.table, pm.table);
}

TEST(Synth, InfiniteSkewIsUniform) {
  auto g = random_strongly_connected_graph(6, 2, 5);
  auto pm = random_planted_model(g, 2, std::numeric_limits<double>::infinity(), 5);
  for (const auto& [ctx, dist] : pm.table)
    for (const auto& [v, p] : dist)
      EXPECT_DOUBLE_EQ(p, 1.0 / static_cast<double>(dist.size()));
}

TEST(Synth, ThreeCycleIsForced) {
  auto g = testing_helpers::graph({{"a", "b"}, {"b", "c"}, {"c", "a"}});
  auto pm = random_planted_model(g, 1, 0.3, 1);
  EXPECT_EQ(pm.table.size(), 3u);
  for (const auto& [ctx, dist] : pm.table) {
    ASSERT_EQ(dist.size(), 1u);
    EXPECT_EQ(dist[0].second, 1.0);
  }
  auto gen = generate_corpus(pm, 50, 4, 9, 2);
  for (const auto& p : gen.corpus.paths)
    for (std::size_t i = 1; i < p.length(); ++i)
      EXPECT_EQ(p.nodes[i], (p.nodes[i - 1] + 1) % 3);
}

TEST(Synth, AbsorbingContextsTruncate) {
  auto g = testing_helpers::graph({{"a", "b"}, {"b", "c"}});
  auto pm = random_planted_model(g, 1, 0.3, 1);
  EXPECT_TRUE(pm.absorbing(NodeTuple{g.labels().at("c")}));
  auto gen = generate_corpus(pm, 30, 4, 5, 3);
  EXPECT_EQ(gen.stats.truncated, 30u);
  for (const auto& p : gen.corpus.paths)
    EXPECT_LE(p.length(), 3u);
}

TEST(Synth, CorpusDeterministicAcrossThreads) {
  auto g = random_strongly_connected_graph(20, 2, 8);
  auto pm = random_planted_model(g, 3, 0.3, 8);
  auto a = generate_corpus(pm, 3000, 10, 20, 9, 1);
  auto b = generate_corpus(pm, 3000, 10, 20, 9, 4);
  EXPECT_EQ(a.corpus.paths, b.corpus.paths);
  std::size_t lo = 100, hi = 0;
  for (const auto& p : a.corpus.paths) {
    lo = std::min(lo, p.length());
    hi = std::max(hi, p.length());
  }
  EXPECT_EQ(lo, 10u);
  EXPECT_EQ(hi, 20u);
  EXPECT_THROW(generate_corpus(pm, 10, 3, 20, 1), Error);
}

TEST(Synth, EmpiricalFrequenciesConverge) {
  auto g = random_strongly_connected_graph(20, 2, 10);
  auto pm = random_planted_model(g, 3, 0.3, 10);
  auto c = generate_corpus(pm, 20000, 10, 20, 11).corpus;
  auto sc = subpath_counts(c, 3);
  double worst = 0.0;
  int checked = 0;
  for (const auto& [ctx, total] : sc.context_totals) {
    if (total < 500)
      continue;
    ++checked;
    for (const auto& [v, p] : pm.table.at(ctx)) {
      NodeTuple w = ctx;
      w.push_back(v);
      worst = std::max(worst, std::abs(static_cast<double>(sc.count(w)) / total - p));
    }
  }
  EXPECT_GT(checked, 10);
  EXPECT_LE(worst, 0.05);
}

TEST(Synth, DesignatedContextWithinThreeStandardErrors) {
  auto g = random_strongly_connected_graph(20, 2, 12);
  auto pm = random_planted_model(g, 3, 0.3, 12);
  auto c = generate_corpus(pm, 10000, 10, 20, 13).corpus;
  auto sc = subpath_counts(c, 3);
  // The most frequent context with a non-degenerate planted distribution.
  NodeTuple best;
  std::uint64_t best_n = 0;
  for (const auto& [ctx, n] : sc.context_totals) {
    const auto& dist = pm.table.at(ctx);
    if (n > best_n && dist.front().second > 0.05 && dist.front().second < 0.95) {
      best = ctx;
      best_n = n;
    }
  }
  ASSERT_GT(best_n, 0u);
  const auto& [v, p] = pm.table.at(best).front();
  NodeTuple w = best;
  w.push_back(v);
  const double mle = mle_transition(sc, best, v);
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(best_n));
  EXPECT_NEAR(mle, p, 3 * se);
}
