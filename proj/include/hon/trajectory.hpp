#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hon/error.hpp"
#include "hon/graph.hpp"
#include "hon/labels.hpp"
#include "hon/random.hpp"
#include "hon/text.hpp"
#include "hon/tuple_hash.hpp"

namespace hon {

/// An observed trajectory and how many times it was observed.
struct Path {
  NodeTuple nodes;
  std::uint64_t multiplicity = 1;

  std::size_t length() const noexcept { return nodes.size(); }
  friend bool operator==(const Path&, const Path&) = default;
};

struct PathCorpus {
  LabelTable labels;
  std::vector<Path> paths;

  /// Number of observed trajectory instances (multiplicities summed).
  std::uint64_t total_paths() const {
    std::uint64_t n = 0;
    for (const auto& p : paths)
      n += p.multiplicity;
    return n;
  }
  std::size_t max_length() const {
    std::size_t m = 0;
    for (const auto& p : paths)
      m = std::max(m, p.length());
    return m;
  }
  bool empty() const { return paths.empty(); }
};

/// Parses one ngram line: comma-separated labels, optional trailing `*n`.
inline Path parse_ngram_line(std::string_view line, std::size_t lineno,
                             LabelTable& labels) {
  auto fields = split(strip_line(line), ',');
  Path path;
  if (fields.size() > 1 && !fields.back().empty() && fields.back().front() == '*') {
    auto mult = parse_uint(fields.back().substr(1));
    if (!mult)
      throw ParseError(lineno, "non-integer multiplicity '" +
                                   std::string(fields.back()) + "'");
    if (*mult == 0)
      throw ParseError(lineno, "multiplicity must be positive");
    path.multiplicity = *mult;
    fields.pop_back();
  }
  path.nodes.reserve(fields.size());
  for (auto f : fields) {
    if (f.empty())
      throw ParseError(lineno, "empty node label");
    path.nodes.push_back(labels.intern(f));
  }
  return path;
}

inline PathCorpus read_ngram(std::istream& in, LabelTable labels = {}) {
  PathCorpus corpus;
  corpus.labels = std::move(labels);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip_line(line).empty())
      throw ParseError(lineno, "empty path");
    corpus.paths.push_back(parse_ngram_line(line, lineno, corpus.labels));
  }
  return corpus;
}

inline PathCorpus parse_ngram_file(const std::string& file, LabelTable labels = {}) {
  std::ifstream in(file);
  if (!in)
    throw Error(ErrorKind::data, "cannot open ngram file '" + file + "'");
  return read_ngram(in, std::move(labels));
}

inline void write_ngram(std::ostream& out, const PathCorpus& corpus) {
  for (const auto& p : corpus.paths) {
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      if (i)
        out << ',';
      out << corpus.labels.label(p.nodes[i]);
    }
    if (p.multiplicity != 1)
      out << ",*" << p.multiplicity;
    out << '\n';
  }
}

/// Contiguous windows of k+1 nodes; empty when the path has at most k nodes.
inline std::vector<NodeTuple> sliding_windows(const Path& p, std::size_t k) {
  if (k < 1)
    throw Error(ErrorKind::usage, "order must be >= 1");
  std::vector<NodeTuple> out;
  if (p.length() <= k)
    return out;
  out.reserve(p.length() - k);
  for (std::size_t i = 0; i + k < p.length(); ++i)
    out.emplace_back(p.nodes.begin() + static_cast<std::ptrdiff_t>(i),
                     p.nodes.begin() + static_cast<std::ptrdiff_t>(i + k + 1));
  return out;
}

/// Multiplicity-weighted (k+1)-window counts and their k-context totals.
struct SubpathCounts {
  std::size_t order = 1;
  std::unordered_map<NodeTuple, std::uint64_t, TupleHash> counts;
  std::unordered_map<NodeTuple, std::uint64_t, TupleHash> context_totals;

  std::uint64_t count(const NodeTuple& window) const {
    auto it = counts.find(window);
    return it == counts.end() ? 0 : it->second;
  }
};

inline SubpathCounts subpath_counts(const PathCorpus& corpus, std::size_t k) {
  if (k < 1)
    throw Error(ErrorKind::usage, "order must be >= 1");
  SubpathCounts sc;
  sc.order = k;
  NodeTuple window(k + 1);
  NodeTuple context(k);
  for (const auto& p : corpus.paths) {
    if (p.length() <= k)
      continue;
    for (std::size_t i = 0; i + k < p.length(); ++i) {
      const auto first = p.nodes.begin() + static_cast<std::ptrdiff_t>(i);
      window.assign(first, first + static_cast<std::ptrdiff_t>(k + 1));
      context.assign(first, first + static_cast<std::ptrdiff_t>(k));
      sc.counts[window] += p.multiplicity;
      sc.context_totals[context] += p.multiplicity;
    }
  }
  return sc;
}

/// CSV `context,next,count`; contexts are `|`-joined labels. Rows sorted by
/// label text for reproducible output.
inline void write_subpath_counts_csv(std::ostream& out, const SubpathCounts& sc,
                                     const LabelTable& labels) {
  std::vector<std::tuple<std::string, std::string, std::uint64_t>> rows;
  rows.reserve(sc.counts.size());
  for (const auto& [window, n] : sc.counts) {
    NodeTuple ctx(window.begin(), window.end() - 1);
    rows.emplace_back(join_labels(labels, ctx), labels.label(window.back()), n);
  }
  std::sort(rows.begin(), rows.end());
  out << "context,next,count\n";
  for (const auto& [c, nx, n] : rows)
    out << c << ',' << nx << ',' << n << '\n';
}

/// Assigns every trajectory instance to train with probability `ratio`.
/// Multiplicities are split, not expanded into separate lines.
inline std::pair<PathCorpus, PathCorpus>
train_test_split(const PathCorpus& corpus, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw Error(ErrorKind::usage, "split ratio must lie in (0, 1)");
  Rng rng(seed);
  PathCorpus train{corpus.labels, {}};
  PathCorpus test{corpus.labels, {}};
  for (const auto& p : corpus.paths) {
    std::uint64_t to_train = 0;
    for (std::uint64_t i = 0; i < p.multiplicity; ++i)
      to_train += rng.uniform() < ratio ? 1 : 0;
    if (to_train > 0)
      train.paths.push_back({p.nodes, to_train});
    if (to_train < p.multiplicity)
      test.paths.push_back({p.nodes, p.multiplicity - to_train});
  }
  return {std::move(train), std::move(test)};
}

struct PathLengthStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  std::map<std::size_t, std::uint64_t> histogram;
};

inline PathLengthStats path_length_stats(const PathCorpus& corpus) {
  if (corpus.total_paths() == 0)
    throw Error(ErrorKind::data, "path length statistics need a nonempty corpus");
  PathLengthStats s;
  long double total = 0.0L;
  for (const auto& p : corpus.paths) {
    s.count += p.multiplicity;
    total += static_cast<long double>(p.length()) * p.multiplicity;
    s.histogram[p.length()] += p.multiplicity;
  }
  s.mean = static_cast<double>(total / s.count);
  return s;
}

/// Frequency-weighted first-order graph of all observed transitions.
inline FirstOrderGraph graph_from_corpus(const PathCorpus& corpus) {
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (const auto& p : corpus.paths)
    for (std::size_t i = 0; i + 1 < p.length(); ++i)
      edges.emplace_back(p.nodes[i], p.nodes[i + 1],
                         static_cast<double>(p.multiplicity));
  return FirstOrderGraph(corpus.labels, std::move(edges), true);
}

/// Checks that every consecutive pair in the corpus is an edge of `g`.
/// Labels are matched by text, so the tables need not be aligned.
inline void validate_paths(const PathCorpus& corpus, const FirstOrderGraph& g) {
  std::vector<std::optional<NodeId>> remap(corpus.labels.size());
  for (NodeId i = 0; i < corpus.labels.size(); ++i)
    remap[i] = g.labels().find(corpus.labels.label(i));
  for (std::size_t j = 0; j < corpus.paths.size(); ++j) {
    const auto& nodes = corpus.paths[j].nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!remap[nodes[i]])
        throw ValidationError("path " + std::to_string(j + 1) + ": node '" +
                              corpus.labels.label(nodes[i]) + "' not in graph");
      if (i > 0 && !g.has_edge(*remap[nodes[i - 1]], *remap[nodes[i]]))
        throw ValidationError("path " + std::to_string(j + 1) + ": no edge " +
                              corpus.labels.label(nodes[i - 1]) + " -> " +
                              corpus.labels.label(nodes[i]));
    }
  }
}

} // namespace hon
