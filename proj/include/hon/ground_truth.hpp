#pragma once

#include <vector>

#include "hon/error.hpp"
#include "hon/scores.hpp"
#include "hon/trajectory.hpp"

namespace hon {

/// visitation counts every node occurrence; traversal skips each path's
/// first and last node.
enum class GroundTruthMode { traversal, visitation };

inline ScoreVector ground_truth_frequencies(const PathCorpus& corpus, GroundTruthMode mode) {
  if (corpus.total_paths() == 0)
    throw ValidationError("ground truth needs a nonempty corpus");
  std::vector<double> counts(corpus.labels.size(), 0.0);
  for (const auto& p : corpus.paths) {
    const std::size_t n = p.length();
    const std::size_t begin = mode == GroundTruthMode::traversal ? 1 : 0;
    const std::size_t end = mode == GroundTruthMode::traversal ? (n > 0 ? n - 1 : 0) : n;
    for (std::size_t i = begin; i < end; ++i)
      counts[p.nodes[i]] += static_cast<double>(p.multiplicity);
  }
  auto sv = score_vector(corpus.labels, counts);
  if (!(sv.sum() > 0.0))
    throw ValidationError("ground truth is empty (no countable node occurrences)");
  return sv.normalize();
}

} // namespace hon
