#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hon/error.hpp"
#include "hon/labels.hpp"
#include "hon/text.hpp"

namespace hon {

/// Nonnegative score per first-order node, keyed by label.
struct ScoreVector {
  std::map<std::string, double> scores;
  bool normalized = false;

  double sum() const {
    double s = 0.0;
    for (const auto& [_, v] : scores)
      s += v;
    return s;
  }

  double at(const std::string& label) const {
    auto it = scores.find(label);
    return it == scores.end() ? 0.0 : it->second;
  }

  /// Scales to unit sum; a zero vector is left as is and stays unnormalized.
  ScoreVector& normalize() {
    const double s = sum();
    if (s > 0.0) {
      for (auto& [_, v] : scores)
        v /= s;
      normalized = true;
    }
    return *this;
  }

  /// Entries by descending score, then ascending label.
  std::vector<std::pair<std::string, double>> ranked() const {
    std::vector<std::pair<std::string, double>> out(scores.begin(), scores.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
  }
};

inline ScoreVector score_vector(const LabelTable& labels, const std::vector<double>& values) {
  ScoreVector sv;
  for (NodeId v = 0; v < values.size(); ++v)
    sv.scores[labels.label(v)] = values[v];
  return sv;
}

/// CSV `node,score`, sorted by descending score then label.
inline void write_scores_csv(std::ostream& out, const ScoreVector& sv) {
  out << "node,score\n";
  for (const auto& [label, v] : sv.ranked())
    out << label << ',' << format_double(v) << '\n';
}

} // namespace hon
