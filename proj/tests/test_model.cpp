#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "hon/model.hpp"
#include "hon/model_io.hpp"

using namespace hon;
using testing_helpers::corpus;
using testing_helpers::graph;

namespace {

NodeTuple ids(const LabelTable& l, std::initializer_list<const char*> labels) {
  NodeTuple out;
  for (const char* s : labels)
    out.push_back(l.at(s));
  return out;
}

double prob(const HigherOrderModel& m, std::initializer_list<const char*> context,
            const char* next) {
  return m.transition_prob(ids(m.labels(), context), m.labels().at(next));
}

void expect_overlap_and_normalized(const HigherOrderModel& m) {
  for (std::uint32_t h = 0; h < m.node_count(); ++h) {
    double total = 0.0;
    for (std::size_t e = m.edge_begin(h); e < m.edge_end(h); ++e) {
      auto a = m.node(h), b = m.node(m.target(e));
      EXPECT_TRUE(std::equal(a.begin() + 1, a.end(), b.begin()));
      total += m.prob(e);
    }
    if (m.out_degree(h) > 0) {
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

} // namespace

TEST(BuildFromPaths, SinglePathForcesProbabilities) {
  auto m = build_from_paths(corpus({"a,b,c,d"}), 2, true);
  EXPECT_EQ(m.node_count(), 3u);
  EXPECT_EQ(m.edge_count(), 2u);
  EXPECT_DOUBLE_EQ(prob(m, {"a", "b"}, "c"), 1.0);
  EXPECT_DOUBLE_EQ(prob(m, {"b", "c"}, "d"), 1.0);
  EXPECT_TRUE(m.find(ids(m.labels(), {"c", "d"})));
}

TEST(BuildFromPaths, MaximumLikelihoodAndUniform) {
  auto c = corpus({"a,b,c,*2", "a,b,d"});
  auto att = build_from_paths(c, 2, true);
  EXPECT_DOUBLE_EQ(prob(att, {"a", "b"}, "c"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(prob(att, {"a", "b"}, "d"), 1.0 / 3.0);
  auto non = build_from_paths(c, 2, false);
  EXPECT_FALSE(non.attributed());
  EXPECT_DOUBLE_EQ(prob(non, {"a", "b"}, "c"), 0.5);
  EXPECT_DOUBLE_EQ(prob(non, {"a", "b"}, "d"), 0.5);
  // counts are kept in both variants
  auto h = *att.find(ids(att.labels(), {"a", "b"}));
  EXPECT_EQ(att.count(*att.find_edge(h, att.labels().at("c"))), 2u);
}

TEST(BuildFromPaths, ShortPathsSkippedAndEmptyModelError) {
  auto m = build_from_paths(corpus({"a,b,c", "a,b,*4"}), 2, true);
  EXPECT_EQ(m.skipped_paths(), 4u);
  EXPECT_THROW(build_from_paths(corpus({"a,b"}), 2, true), EmptyModelError);
  EXPECT_THROW(build_from_paths(corpus({"a,b"}), 0, true), Error);
}

TEST(BuildFromPaths, FirstOrderEqualsRowStochasticGraph) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing_helpers::random_graph(rng, 6, 0.4, false);
    auto c = testing_helpers::enumerated_paths(g, 4, rng);
    if (c.empty())
      continue;
    auto m = build_from_paths(c, 1, true);
    auto fo = graph_from_corpus(c);
    auto t = row_stochastic_transitions(fo);
    for (const auto& [u, v, w] : fo.edges())
      EXPECT_NEAR(m.transition_prob(NodeTuple{u}, v), t[*fo.find_edge(u, v)], 1e-15);
    EXPECT_EQ(m.edge_count(), fo.edge_count());
  }
}

TEST(BuildFromPaths, NoPhantomTransitions) {
  Rng rng(19);
  auto g = testing_helpers::random_graph(rng, 6, 0.5, false);
  auto c = testing_helpers::enumerated_paths(g, 5, rng);
  for (std::size_t k = 1; k <= 3; ++k) {
    auto m = build_from_paths(c, k, true);
    expect_overlap_and_normalized(m);
    auto sc = subpath_counts(c, k);
    EXPECT_EQ(m.edge_count(), sc.counts.size());
    for (std::uint32_t h = 0; h < m.node_count(); ++h)
      for (std::size_t e = m.edge_begin(h); e < m.edge_end(h); ++e) {
        auto t = m.node(h);
        NodeTuple w(t.begin(), t.end());
        w.push_back(m.next_node(e));
        EXPECT_EQ(m.count(e), sc.count(w));
      }
  }
}

TEST(BuildFromTopology, LineGraph) {
  auto g = graph({{"a", "b"}, {"b", "c"}, {"b", "d"}});
  auto m = build_from_topology(g, 2);
  EXPECT_EQ(m.node_count(), 3u);
  EXPECT_EQ(m.edge_count(), 2u);
  EXPECT_FALSE(m.attributed());
  EXPECT_DOUBLE_EQ(prob(m, {"a", "b"}, "c"), 0.5);
  EXPECT_DOUBLE_EQ(prob(m, {"a", "b"}, "d"), 0.5);
}

TEST(BuildFromTopology, ThreeCycle) {
  auto g = graph({{"a", "b"}, {"b", "c"}, {"c", "a"}});
  auto m = build_from_topology(g, 3);
  EXPECT_EQ(m.node_count(), 3u);
  EXPECT_EQ(m.edge_count(), 3u);
  EXPECT_TRUE(m.find(ids(m.labels(), {"a", "b", "c"})));
  EXPECT_TRUE(m.find(ids(m.labels(), {"b", "c", "a"})));
  EXPECT_TRUE(m.find(ids(m.labels(), {"c", "a", "b"})));
  EXPECT_DOUBLE_EQ(prob(m, {"a", "b", "c"}, "a"), 1.0);
  expect_overlap_and_normalized(m);
}

TEST(BuildFromTopology, FirstOrderIsGraph) {
  auto g = graph({{"a", "b"}, {"a", "c"}, {"c", "a"}});
  auto m = build_from_topology(g, 1);
  EXPECT_EQ(m.node_count(), 3u);
  EXPECT_EQ(m.edge_count(), 3u);
  EXPECT_DOUBLE_EQ(prob(m, {"a"}, "c"), 0.5);
  EXPECT_DOUBLE_EQ(prob(m, {"c"}, "a"), 1.0);
}

TEST(BuildFromTopology, SizeCap) {
  Rng rng(2);
  auto g = testing_helpers::random_graph(rng, 10, 0.9, false);
  EXPECT_THROW(build_from_topology(g, 6, 1000), SizeLimitError);
}

TEST(Mle, Estimates) {
  auto c = corpus({"a,b,c,*2", "a,b,d", "q,x"});
  auto sc = subpath_counts(c, 2);
  EXPECT_DOUBLE_EQ(mle_transition(sc, ids(c.labels, {"a", "b"}), c.labels.at("c")), 2.0 / 3.0);
  auto five = corpus({"a,b,c,*5"});
  EXPECT_DOUBLE_EQ(
      mle_transition(subpath_counts(five, 2), ids(five.labels, {"a", "b"}), five.labels.at("c")),
      1.0);
  EXPECT_THROW(mle_transition(sc, ids(c.labels, {"q", "x"}), c.labels.at("a")),
               UnseenContextError);
}

TEST(Likelihood, PathAndCorpus) {
  auto c = corpus({"a,b,c,*2", "a,b,d"});
  auto m = build_from_paths(c, 2, true);
  EXPECT_DOUBLE_EQ(path_likelihood(m, c.paths[0]), std::log(2.0 / 3.0));
  EXPECT_DOUBLE_EQ(path_likelihood(m, c.paths[1]), std::log(1.0 / 3.0));
  LabelTable labels = c.labels;
  auto unseen = parse_ngram_line("a,b,e", 1, labels);
  EXPECT_TRUE(is_impossible(path_likelihood(m, unseen)));
  EXPECT_THROW(path_likelihood(m, Path{{0, 1}, 1}), ValidationError);

  EXPECT_NEAR(corpus_likelihood(m, c), 2 * std::log(2.0 / 3.0) + std::log(1.0 / 3.0), 1e-15);
  PathCorpus single{c.labels, {c.paths[1]}};
  EXPECT_EQ(corpus_likelihood(m, single), path_likelihood(m, c.paths[1]));
  PathCorpus short_only{c.labels, {{{0, 1}, 3}}};
  EXPECT_EQ(corpus_likelihood(m, short_only), 0.0);
}

TEST(Likelihood, MleBeatsPerturbedModel) {
  // The MLE maximizes the corpus likelihood over row-stochastic tables.
  auto c = corpus({"a,b,c,*7", "a,b,d,*3", "b,c,a,*2", "b,c,d"});
  auto m = build_from_paths(c, 2, true);
  const double best = corpus_likelihood(m, c);
  auto sc = subpath_counts(c, 2);
  for (double q : {0.5, 0.6, 0.69, 0.71, 0.8}) {
    const double alt = 7 * std::log(q) + 3 * std::log(1 - q) + 2 * std::log(2.0 / 3.0) +
                       std::log(1.0 / 3.0);
    EXPECT_LT(alt, best);
  }
}

TEST(ModelIo, RoundTrip) {
  auto m = build_from_paths(corpus({"a,b,c,*2", "a,b,d", "b,d,a"}), 2, true);
  std::stringstream buf;
  write_model(buf, m);
  auto back = read_model(buf);
  EXPECT_EQ(back.order(), m.order());
  EXPECT_EQ(back.attributed(), m.attributed());
  EXPECT_EQ(back.labels(), m.labels());
  ASSERT_EQ(back.node_count(), m.node_count());
  ASSERT_EQ(back.edge_count(), m.edge_count());
  for (std::size_t e = 0; e < m.edge_count(); ++e) {
    EXPECT_EQ(back.target(e), m.target(e));
    EXPECT_EQ(back.count(e), m.count(e));
    EXPECT_EQ(back.prob(e), m.prob(e));
  }
  std::ostringstream again;
  write_model(again, back);
  std::ostringstream first;
  write_model(first, m);
  EXPECT_EQ(again.str(), first.str());
}

TEST(ModelIo, RejectsMalformed) {
  std::istringstream wrong_magic("not-a-model 1\n");
  EXPECT_THROW(read_model(wrong_magic), ParseError);
  std::istringstream bad_edge("hon-model 1\norder 1\nattributed 1\nlabels 2\na\nb\n"
                              "nodes 2\n0\n1\nedges 1\n0\t7\t1\t1\n");
  EXPECT_THROW(read_model(bad_edge), Error);
  std::istringstream truncated("hon-model 1\norder 1\nattributed 1\nlabels 2\na\n");
  EXPECT_THROW(read_model(truncated), ParseError);
}

TEST(ModelIo, CsvExport) {
  auto m = build_from_paths(corpus({"a,b,c,*2", "a,b,d"}), 2, true);
  std::ostringstream out;
  write_model_csv(out, m);
  EXPECT_EQ(out.str(), "from_tuple,to_tuple,count,prob\n"
                       "a|b,b|c,2,0.6666666666666666\n"
                       "a|b,b|d,1,0.3333333333333333\n");
}

TEST(Assemble, RejectsOverlapViolation) {
  LabelTable l;
  l.intern("a");
  l.intern("b");
  l.intern("c");
  // <a,b> -> <a,c> violates the shift rule.
  EXPECT_THROW(HigherOrderModel::assemble(2, true, l, {0, 1, 0, 2}, {{0, 1, 1, 1.0}}),
               ValidationError);
}
