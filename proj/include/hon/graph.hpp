#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hon/error.hpp"
#include "hon/labels.hpp"
#include "hon/text.hpp"

namespace hon {

/// One row of an edge list before interning.
struct EdgeRow {
  std::string source;
  std::string target;
  std::optional<double> weight;
  std::size_t line = 0;
};

/// Immutable directed graph in CSR form. Parallel edges are merged at build
/// time; weights are absent for non-attributed graphs.
class FirstOrderGraph {
public:
  FirstOrderGraph() = default;

  /// Builds from index-based edges. Duplicate (u, v) pairs sum their weights.
  FirstOrderGraph(LabelTable labels,
                  std::vector<std::tuple<NodeId, NodeId, double>> edges,
                  bool weighted)
      : labels_(std::move(labels)), weighted_(weighted) {
    const std::size_t n = labels_.size();
    std::map<std::pair<NodeId, NodeId>, double> merged;
    for (const auto& [u, v, w] : edges) {
      if (u >= n || v >= n)
        throw ValidationError("edge endpoint outside node set");
      if (!std::isfinite(w) || w < 0.0)
        throw ValidationError("edge weight must be finite and >= 0");
      merged[{u, v}] += w;
    }
    offsets_.assign(n + 1, 0);
    for (const auto& [key, w] : merged) {
      if (weighted_ && key.first == key.second && w == 0.0)
        throw ValidationError("zero-cost self-loop on node '" +
                              labels_.label(key.first) + "'");
      ++offsets_[key.first + 1];
    }
    for (std::size_t i = 0; i < n; ++i)
      offsets_[i + 1] += offsets_[i];
    targets_.reserve(merged.size());
    weights_.reserve(merged.size());
    // std::map iterates in (source, target) order, which is CSR order.
    for (const auto& [key, w] : merged) {
      targets_.push_back(key.second);
      weights_.push_back(weighted_ ? w : 1.0);
    }
  }

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size(); }
  bool weighted() const noexcept { return weighted_; }
  const LabelTable& labels() const noexcept { return labels_; }

  std::span<const NodeId> out_neighbors(NodeId u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  /// Edge weights aligned with out_neighbors(u); 1.0 for non-attributed graphs.
  std::span<const double> out_weights(NodeId u) const {
    return {weights_.data() + offsets_[u], weights_.data() + offsets_[u + 1]};
  }
  std::size_t out_degree(NodeId u) const {
    return offsets_[u + 1] - offsets_[u];
  }
  std::size_t edge_begin(NodeId u) const { return offsets_[u]; }

  std::optional<std::size_t> find_edge(NodeId u, NodeId v) const {
    auto nbrs = out_neighbors(u);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
    if (it == nbrs.end() || *it != v)
      return std::nullopt;
    return offsets_[u] + static_cast<std::size_t>(it - nbrs.begin());
  }
  bool has_edge(NodeId u, NodeId v) const { return find_edge(u, v).has_value(); }
  double weight(std::size_t edge) const { return weights_.at(edge); }

  /// Edges as (source, target, weight) in CSR order.
  std::vector<std::tuple<NodeId, NodeId, double>> edges() const {
    std::vector<std::tuple<NodeId, NodeId, double>> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
      for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e)
        out.emplace_back(u, targets_[e], weights_[e]);
    return out;
  }

private:
  LabelTable labels_;
  bool weighted_ = false;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<double> weights_;
};

/// Interns rows into `labels` (which may be pre-seeded) and builds the graph.
/// The graph is weighted iff any row carries a weight; rows without one then
/// count as weight 1.
inline FirstOrderGraph build_graph(std::span<const EdgeRow> rows,
                                   LabelTable labels = {}) {
  bool weighted = std::any_of(rows.begin(), rows.end(),
                              [](const EdgeRow& r) { return r.weight.has_value(); });
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  edges.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.source.empty() || row.target.empty())
      throw ParseError(row.line, "empty node label");
    const double w = row.weight.value_or(1.0);
    if (!std::isfinite(w) || w < 0.0)
      throw ValidationError("line " + std::to_string(row.line) +
                            ": edge weight must be finite and >= 0");
    const NodeId u = labels.intern(row.source);
    const NodeId v = labels.intern(row.target);
    edges.emplace_back(u, v, w);
  }
  return FirstOrderGraph(std::move(labels), std::move(edges), weighted);
}

/// Reads `source<TAB>target[<TAB>weight]` rows; `#` comments and blank
/// lines are skipped.
inline std::vector<EdgeRow> read_edge_rows(std::istream& in) {
  std::vector<EdgeRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = strip_line(line);
    if (view.empty() || view.front() == '#')
      continue;
    auto fields = split(view, '\t');
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError(lineno, "expected source<TAB>target[<TAB>weight]");
    EdgeRow row;
    row.source = std::string(fields[0]);
    row.target = std::string(fields[1]);
    row.line = lineno;
    if (row.source.empty() || row.target.empty())
      throw ParseError(lineno, "empty node label");
    if (fields.size() == 3) {
      auto w = parse_double(fields[2]);
      if (!w)
        throw ParseError(lineno, "malformed weight '" + std::string(fields[2]) + "'");
      row.weight = *w;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline FirstOrderGraph read_edge_list(const std::string& path,
                                      LabelTable labels = {}) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::data, "cannot open edge list '" + path + "'");
  auto rows = read_edge_rows(in);
  return build_graph(rows, std::move(labels));
}

inline void write_edge_list(std::ostream& out, const FirstOrderGraph& g) {
  for (const auto& [u, v, w] : g.edges()) {
    out << g.labels().label(u) << '\t' << g.labels().label(v);
    if (g.weighted())
      out << '\t' << format_double(w);
    out << '\n';
  }
}

/// Row-stochastic transition probabilities aligned with the CSR edge order.
/// Sink rows are empty; unweighted edges count as weight 1.
inline std::vector<double> row_stochastic_transitions(const FirstOrderGraph& g) {
  std::vector<double> probs(g.edge_count(), 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto w = g.out_weights(u);
    double total = 0.0;
    for (double x : w)
      total += x;
    if (w.empty())
      continue;
    if (!(total > 0.0))
      throw ValidationError("node '" + g.labels().label(u) +
                            "' has outgoing edges with zero total weight");
    const std::size_t base = g.edge_begin(u);
    for (std::size_t i = 0; i < w.size(); ++i)
      probs[base + i] = w[i] / total;
  }
  return probs;
}

} // namespace hon
