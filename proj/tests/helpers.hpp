#pragma once

#include <initializer_list>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hon/hon.hpp"

namespace testing_helpers {

inline hon::PathCorpus corpus(std::initializer_list<const char*> lines) {
  std::string text;
  for (const char* l : lines) {
    text += l;
    text += '\n';
  }
  std::istringstream in(text);
  return hon::read_ngram(in);
}

inline hon::FirstOrderGraph graph(
    std::initializer_list<std::tuple<const char*, const char*, double>> edges, bool weighted) {
  std::vector<hon::EdgeRow> rows;
  std::size_t line = 0;
  for (const auto& [s, t, w] : edges) {
    hon::EdgeRow r{s, t, std::nullopt, ++line};
    if (weighted)
      r.weight = w;
    rows.push_back(r);
  }
  return hon::build_graph(rows);
}

inline hon::FirstOrderGraph graph(std::initializer_list<std::pair<const char*, const char*>> edges) {
  std::vector<hon::EdgeRow> rows;
  std::size_t line = 0;
  for (const auto& [s, t] : edges)
    rows.push_back({s, t, std::nullopt, ++line});
  return hon::build_graph(rows);
}

/// Random digraph on n nodes "0".."n-1" with edge probability `density`.
/// Weighted graphs get integer weights 1..4 so that cost ties occur.
inline hon::FirstOrderGraph random_graph(hon::Rng& rng, std::size_t n, double density,
                                         bool weighted) {
  hon::LabelTable labels;
  for (std::size_t i = 0; i < n; ++i)
    labels.intern(std::to_string(i));
  std::vector<std::tuple<hon::NodeId, hon::NodeId, double>> edges;
  for (hon::NodeId u = 0; u < n; ++u)
    for (hon::NodeId v = 0; v < n; ++v)
      if (u != v && rng.uniform() < density)
        edges.emplace_back(u, v, weighted ? static_cast<double>(1 + rng.below(4)) : 1.0);
  return hon::FirstOrderGraph(std::move(labels), std::move(edges), weighted);
}

/// Every walk of 2..max_len nodes in g, each with a random multiplicity.
inline hon::PathCorpus enumerated_paths(const hon::FirstOrderGraph& g, std::size_t max_len,
                                        hon::Rng& rng) {
  hon::PathCorpus c;
  c.labels = g.labels();
  std::vector<hon::NodeId> stack;
  auto extend = [&](auto&& self) -> void {
    if (stack.size() >= 2)
      c.paths.push_back({stack, 1 + rng.below(5)});
    if (stack.size() == max_len)
      return;
    for (auto v : g.out_neighbors(stack.back())) {
      stack.push_back(v);
      self(self);
      stack.pop_back();
    }
  };
  for (hon::NodeId u = 0; u < g.node_count(); ++u) {
    stack.assign(1, u);
    extend(extend);
  }
  return c;
}

} // namespace testing_helpers
