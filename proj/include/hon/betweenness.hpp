#pragma once

#include <cstdint>
#include <vector>

#include "hon/error.hpp"
#include "hon/model.hpp"
#include "hon/parallel.hpp"
#include "hon/scores.hpp"
#include "hon/shortest_paths.hpp"

namespace hon {

enum class WeightMode { neg_log_prob, unit };

/// How shortest higher-order paths are grouped before taking ratios.
///  - higher_order_pairs: one ratio per ordered pair of higher-order nodes.
///  - first_order_pairs: path counts of all higher-order pairs that start at
///    first-order node s and end at t are pooled into one ratio per (s, t).
enum class PairAggregation { higher_order_pairs, first_order_pairs };

struct BetweennessOptions {
  WeightMode weight_mode = WeightMode::neg_log_prob;
  PairAggregation pairs = PairAggregation::higher_order_pairs;
  bool normalize = true;
  unsigned threads = 0;
};

namespace detail {

inline constexpr std::size_t kBetweennessBlock = 16;

// Brandes dependency accumulation for one source. Each shortest path is
// expanded to its first-order node sequence; every occurrence except the
// first (origin) and the last (destination) is credited.
inline void accumulate_source(const HigherOrderModel& m, std::uint32_t s,
                              const ShortestPathSummary& sp, std::vector<double>& delta,
                              std::vector<double>& raw) {
  const std::size_t k = m.order();
  const std::size_t reached = sp.order.size() - 1;
  if (reached == 0)
    return;
  auto tuple = m.node(s);
  for (std::size_t i = 1; i < k; ++i)
    raw[tuple[i]] += static_cast<double>(reached);
  for (auto w : sp.order)
    delta[w] = 0.0;
  for (auto it = sp.order.rbegin(); it != sp.order.rend(); ++it) {
    const auto w = *it;
    const double coeff = (1.0 + delta[w]) / static_cast<double>(sp.sigma[w]);
    for (auto p : sp.preds[w])
      delta[p] += static_cast<double>(sp.sigma[p]) * coeff;
    if (w != s)
      raw[m.last(w)] += delta[w];
  }
}

inline std::vector<double> betweenness_ho_pairs(const HigherOrderModel& m,
                                                const CostGraph& cg, unsigned threads) {
  const std::size_t n = m.node_count();
  const std::size_t nv = m.labels().size();
  const std::size_t blocks = (n + kBetweennessBlock - 1) / kBetweennessBlock;
  std::vector<std::vector<double>> partial(blocks);
  parallel_blocks(blocks, threads, [&](std::size_t b) {
    std::vector<double> raw(nv, 0.0);
    std::vector<double> delta(n, 0.0);
    ShortestPathSummary sp;
    const std::size_t end = std::min(n, (b + 1) * kBetweennessBlock);
    for (std::size_t s = b * kBetweennessBlock; s < end; ++s) {
      shortest_paths_into(cg, static_cast<std::uint32_t>(s), sp);
      accumulate_source(m, static_cast<std::uint32_t>(s), sp, delta, raw);
    }
    partial[b] = std::move(raw);
  });
  std::vector<double> total(nv, 0.0);
  for (const auto& part : partial)
    for (std::size_t v = 0; v < nv; ++v)
      total[v] += part[v];
  return total;
}

inline std::vector<double> betweenness_fo_pairs(const HigherOrderModel& m,
                                                const CostGraph& cg, unsigned threads) {
  const std::size_t n = m.node_count();
  const std::size_t nv = m.labels().size();
  const std::size_t k = m.order();
  constexpr std::size_t kMaxCells = 200'000'000;
  if (n * nv > kMaxCells || nv * nv > kMaxCells)
    throw SizeLimitError("first-order pair aggregation needs too much memory for this model");
  std::vector<std::vector<std::uint32_t>> by_origin(nv);
  for (std::uint32_t h = 0; h < n; ++h)
    by_origin[m.first(h)].push_back(h);
  std::vector<std::vector<double>> partial(nv);
  parallel_blocks(nv, threads, [&](std::size_t s0) {
    if (by_origin[s0].empty())
      return;
    std::vector<double> num(nv * nv, 0.0); // [t0][v]
    std::vector<double> den(nv, 0.0);
    std::vector<double> occ(n * nv, 0.0); // occurrence sums through each node
    ShortestPathSummary sp;
    for (auto s : by_origin[s0]) {
      shortest_paths_into(cg, s, sp);
      for (auto w : sp.order)
        std::fill_n(occ.begin() + static_cast<std::ptrdiff_t>(w * nv), nv, 0.0);
      auto tuple = m.node(s);
      for (std::size_t i = 1; i < k; ++i)
        occ[s * nv + tuple[i]] += 1.0;
      for (std::size_t oi = 1; oi < sp.order.size(); ++oi) {
        const auto t = sp.order[oi];
        double* row = occ.data() + t * nv;
        for (auto p : sp.preds[t]) {
          const double* prow = occ.data() + p * nv;
          for (std::size_t v = 0; v < nv; ++v)
            row[v] += prow[v];
        }
        const auto t0 = m.last(t);
        double* nrow = num.data() + t0 * nv;
        for (std::size_t v = 0; v < nv; ++v)
          nrow[v] += row[v];
        const double sig = static_cast<double>(sp.sigma[t]);
        den[t0] += sig;
        row[t0] += sig;
      }
    }
    std::vector<double> raw(nv, 0.0);
    for (std::size_t t0 = 0; t0 < nv; ++t0) {
      if (t0 == s0 || den[t0] == 0.0)
        continue;
      for (std::size_t v = 0; v < nv; ++v)
        raw[v] += num[t0 * nv + v] / den[t0];
    }
    partial[s0] = std::move(raw);
  });
  std::vector<double> total(nv, 0.0);
  for (const auto& part : partial)
    for (std::size_t v = 0; v < part.size(); ++v)
      total[v] += part[v];
  return total;
}

} // namespace detail

/// Unnormalized betweenness per first-order node, indexed by NodeId.
inline std::vector<double> ho_betweenness_raw(const HigherOrderModel& m,
                                              const BetweennessOptions& opt = {}) {
  const bool weighted = opt.weight_mode == WeightMode::neg_log_prob;
  if (weighted && !m.attributed())
    throw Error(ErrorKind::usage, "neg-log-prob weights need an attributed model");
  const CostGraph cg = m.cost_graph(weighted);
  if (opt.pairs == PairAggregation::first_order_pairs)
    return detail::betweenness_fo_pairs(m, cg, opt.threads);
  return detail::betweenness_ho_pairs(m, cg, opt.threads);
}

inline ScoreVector ho_betweenness(const HigherOrderModel& m,
                                  const BetweennessOptions& opt = {}) {
  auto sv = score_vector(m.labels(), ho_betweenness_raw(m, opt));
  if (opt.normalize)
    sv.normalize();
  return sv;
}

} // namespace hon
