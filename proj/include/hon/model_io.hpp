#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hon/error.hpp"
#include "hon/model.hpp"
#include "hon/text.hpp"

namespace hon {

inline constexpr const char* kModelMagic = "hon-model";
inline constexpr int kModelFormatVersion = 1;

// Layout:
//   hon-model 1
//   order <k>
//   attributed <0|1>
//   labels <n>      followed by n lines, one label each
//   nodes <m>       followed by m lines of k tab-separated label indices
//   edges <e>       followed by e lines: from<TAB>to<TAB>count<TAB>prob
inline void write_model(std::ostream& out, const HigherOrderModel& m) {
  out << kModelMagic << ' ' << kModelFormatVersion << '\n';
  out << "order " << m.order() << '\n';
  out << "attributed " << (m.attributed() ? 1 : 0) << '\n';
  out << "labels " << m.labels().size() << '\n';
  for (const auto& l : m.labels().labels())
    out << l << '\n';
  out << "nodes " << m.node_count() << '\n';
  for (HigherOrderModel::Index h = 0; h < m.node_count(); ++h) {
    auto t = m.node(h);
    for (std::size_t i = 0; i < t.size(); ++i)
      out << (i ? "\t" : "") << t[i];
    out << '\n';
  }
  out << "edges " << m.edge_count() << '\n';
  for (HigherOrderModel::Index h = 0; h < m.node_count(); ++h)
    for (std::size_t e = m.edge_begin(h); e < m.edge_end(h); ++e)
      out << h << '\t' << m.target(e) << '\t' << m.count(e) << '\t'
          << format_double(m.prob(e)) << '\n';
}

namespace detail {

class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line))
      throw ParseError(lineno_ + 1, "unexpected end of model file");
    ++lineno_;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    return line;
  }

  std::uint64_t header(const std::string& key) {
    auto line = next();
    auto fields = split(line, ' ');
    if (fields.size() != 2 || fields[0] != key)
      throw ParseError(lineno_, "expected '" + key + " <n>'");
    auto v = parse_uint(fields[1]);
    if (!v)
      throw ParseError(lineno_, "malformed count for '" + key + "'");
    return *v;
  }

  std::size_t line() const { return lineno_; }

private:
  std::istream& in_;
  std::size_t lineno_ = 0;
};

} // namespace detail

inline HigherOrderModel read_model(std::istream& in) {
  detail::LineReader r(in);
  {
    auto magic = r.next();
    std::ostringstream expect;
    expect << kModelMagic << ' ' << kModelFormatVersion;
    if (magic != expect.str())
      throw ParseError(r.line(), "not a version " +
                                     std::to_string(kModelFormatVersion) + " model file");
  }
  const auto order = r.header("order");
  const auto attributed = r.header("attributed");
  LabelTable labels;
  const auto n_labels = r.header("labels");
  for (std::uint64_t i = 0; i < n_labels; ++i) {
    auto l = r.next();
    if (labels.intern(l) != i)
      throw ParseError(r.line(), "duplicate label '" + l + "'");
  }
  const auto n_nodes = r.header("nodes");
  std::vector<NodeId> tuples;
  tuples.reserve(n_nodes * order);
  for (std::uint64_t i = 0; i < n_nodes; ++i) {
    const auto line = r.next();
    auto fields = split(line, '\t');
    if (fields.size() != order)
      throw ParseError(r.line(), "node tuple has wrong length");
    for (auto f : fields) {
      auto v = parse_uint(f);
      if (!v || *v >= n_labels)
        throw ParseError(r.line(), "bad label index");
      tuples.push_back(static_cast<NodeId>(*v));
    }
  }
  const auto n_edges = r.header("edges");
  std::vector<HigherOrderModel::EdgeSpec> edges;
  edges.reserve(n_edges);
  for (std::uint64_t i = 0; i < n_edges; ++i) {
    const auto line = r.next();
    auto fields = split(line, '\t');
    if (fields.size() != 4)
      throw ParseError(r.line(), "edge row needs 4 fields");
    auto from = parse_uint(fields[0]);
    auto to = parse_uint(fields[1]);
    auto count = parse_uint(fields[2]);
    auto prob = parse_double(fields[3]);
    if (!from || !to || !count || !prob || *from >= n_nodes || *to >= n_nodes)
      throw ParseError(r.line(), "malformed edge row");
    edges.push_back({static_cast<HigherOrderModel::Index>(*from),
                     static_cast<HigherOrderModel::Index>(*to), *count, *prob});
  }
  return HigherOrderModel::assemble(order, attributed != 0, std::move(labels),
                                    std::move(tuples), std::move(edges));
}

inline void save_model(const std::string& file, const HigherOrderModel& m) {
  std::ofstream out(file);
  if (!out)
    throw Error(ErrorKind::data, "cannot write model file '" + file + "'");
  write_model(out, m);
}

inline HigherOrderModel load_model(const std::string& file) {
  std::ifstream in(file);
  if (!in)
    throw Error(ErrorKind::data, "cannot open model file '" + file + "'");
  return read_model(in);
}

/// CSV `from_tuple,to_tuple,count,prob`, tuples `|`-joined, rows sorted.
inline void write_model_csv(std::ostream& out, const HigherOrderModel& m) {
  std::vector<std::tuple<std::string, std::string, std::uint64_t, double>> rows;
  rows.reserve(m.edge_count());
  for (HigherOrderModel::Index h = 0; h < m.node_count(); ++h) {
    auto from = m.node(h);
    const auto from_label =
        join_labels(m.labels(), NodeTuple(from.begin(), from.end()));
    for (std::size_t e = m.edge_begin(h); e < m.edge_end(h); ++e) {
      auto to = m.node(m.target(e));
      rows.emplace_back(from_label, join_labels(m.labels(), NodeTuple(to.begin(), to.end())),
                        m.count(e), m.prob(e));
    }
  }
  std::sort(rows.begin(), rows.end());
  out << "from_tuple,to_tuple,count,prob\n";
  for (const auto& [f, t, c, p] : rows)
    out << f << ',' << t << ',' << c << ',' << format_double(p) << '\n';
}

} // namespace hon
