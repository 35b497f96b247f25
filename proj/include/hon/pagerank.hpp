#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hon/error.hpp"
#include "hon/model.hpp"
#include "hon/parallel.hpp"
#include "hon/scores.hpp"

namespace hon {

struct PageRankOptions {
  double alpha = 0.85;
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  unsigned threads = 0;
};

struct PageRankResult {
  std::vector<double> scores; // per higher-order node
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Stationary distribution of the walk that follows model transitions with
/// probability alpha and jumps uniformly otherwise. Mass on nodes without
/// out-edges is spread uniformly. Iterates until the L1 change is <= tol.
inline PageRankResult ho_pagerank(const HigherOrderModel& m, const PageRankOptions& opt = {}) {
  const std::size_t n = m.node_count();
  if (n == 0)
    throw EmptyModelError("PageRank on an empty model");
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0))
    throw Error(ErrorKind::usage, "alpha must lie in (0, 1)");
  if (!(opt.tol > 0.0))
    throw Error(ErrorKind::usage, "tolerance must be positive");

  // Incoming edges per node, in ascending source order.
  std::vector<std::size_t> in_off(n + 1, 0);
  for (std::size_t e = 0; e < m.edge_count(); ++e)
    ++in_off[m.target(e) + 1];
  for (std::size_t i = 0; i < n; ++i)
    in_off[i + 1] += in_off[i];
  std::vector<std::uint32_t> in_src(m.edge_count());
  std::vector<double> in_prob(m.edge_count());
  {
    auto fill = in_off;
    for (std::uint32_t h = 0; h < n; ++h)
      for (std::size_t e = m.edge_begin(h); e < m.edge_end(h); ++e) {
        const auto slot = fill[m.target(e)]++;
        in_src[slot] = h;
        in_prob[slot] = m.prob(e);
      }
  }
  std::vector<std::uint32_t> dangling;
  for (std::uint32_t h = 0; h < n; ++h)
    if (m.out_degree(h) == 0)
      dangling.push_back(h);

  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> r(n, inv_n), next(n, 0.0), block_residual(blocks, 0.0);
  PageRankResult out;
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    double dangling_mass = 0.0;
    for (auto h : dangling)
      dangling_mass += r[h];
    const double base = (opt.alpha * dangling_mass + (1.0 - opt.alpha)) * inv_n;
    parallel_blocks(blocks, opt.threads, [&](std::size_t b) {
      double res = 0.0;
      const std::size_t end = std::min(n, (b + 1) * kBlock);
      for (std::size_t j = b * kBlock; j < end; ++j) {
        double acc = 0.0;
        for (std::size_t e = in_off[j]; e < in_off[j + 1]; ++e)
          acc += r[in_src[e]] * in_prob[e];
        next[j] = opt.alpha * acc + base;
        res += std::abs(next[j] - r[j]);
      }
      block_residual[b] = res;
    });
    double residual = 0.0;
    for (double x : block_residual)
      residual += x;
    r.swap(next);
    out.iterations = it;
    out.residual = residual;
    if (residual <= opt.tol) {
      double total = 0.0;
      for (double x : r)
        total += x;
      for (double& x : r)
        x /= total;
      out.scores = std::move(r);
      return out;
    }
  }
  throw ConvergenceError("PageRank did not converge in " + std::to_string(opt.max_iter) +
                             " iterations (residual " + std::to_string(out.residual) + ")",
                         out.residual);
}

/// Sums higher-order scores onto the last element of each tuple.
inline ScoreVector project_pagerank(const LabelTable& labels,
                                    std::span<const std::pair<NodeTuple, double>> ho_scores) {
  double total = 0.0;
  for (const auto& [_, v] : ho_scores)
    total += v;
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("higher-order scores must sum to 1");
  ScoreVector sv;
  for (const auto& [tuple, v] : ho_scores) {
    if (tuple.empty())
      throw ValidationError("empty higher-order node");
    sv.scores[labels.label(tuple.back())] += v;
  }
  sv.normalized = true;
  return sv;
}

/// Projection of a PageRank result; first-order nodes absent from the model
/// are listed with score 0.
inline ScoreVector project_pagerank(const HigherOrderModel& m, std::span<const double> scores) {
  if (scores.size() != m.node_count())
    throw ValidationError("score vector does not match model");
  std::vector<double> per_node(m.labels().size(), 0.0);
  double total = 0.0;
  for (std::uint32_t h = 0; h < scores.size(); ++h) {
    per_node[m.last(h)] += scores[h];
    total += scores[h];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("higher-order scores must sum to 1");
  auto sv = score_vector(m.labels(), per_node);
  sv.normalized = true;
  return sv;
}

} // namespace hon
