#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hon/error.hpp"
#include "hon/scores.hpp"

namespace hon {

/// Which side of a KL comparison receives additive smoothing.
enum class Smoothing { both, model_only };

inline constexpr double kDefaultKlEpsilon = 1e-9;

/// D(P || Q) in nats over the union of both supports. Each smoothed side
/// gets epsilon added per node and is renormalized. Returns +infinity when
/// P puts mass where Q has none.
inline double kl_divergence(const ScoreVector& p, const ScoreVector& q, double epsilon,
                            Smoothing smoothing = Smoothing::both) {
  if (!(epsilon >= 0.0))
    throw Error(ErrorKind::usage, "smoothing epsilon must be >= 0");
  std::set<std::string> support;
  for (const auto& [k, _] : p.scores)
    support.insert(k);
  for (const auto& [k, _] : q.scores)
    support.insert(k);
  std::vector<double> pv, qv;
  pv.reserve(support.size());
  qv.reserve(support.size());
  for (const auto& k : support) {
    const double a = p.at(k), b = q.at(k);
    if (a < 0.0 || b < 0.0)
      throw ValidationError("KL divergence needs nonnegative scores");
    pv.push_back(a + (smoothing == Smoothing::both ? epsilon : 0.0));
    qv.push_back(b + epsilon);
  }
  double ps = 0.0, qs = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    ps += pv[i];
    qs += qv[i];
  }
  if (!(ps > 0.0) || !(qs > 0.0))
    throw ValidationError("KL divergence needs distributions with positive mass");
  double kl = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const double a = pv[i] / ps;
    const double b = qv[i] / qs;
    if (a == 0.0)
      continue;
    if (b == 0.0)
      return std::numeric_limits<double>::infinity();
    kl += a * std::log(a / b);
  }
  return std::max(0.0, kl);
}

enum class TauVariant {
  /// (C - D) / sqrt((n0 - n1)(n0 - n2)); tied pairs count as neither.
  b,
  /// 2(C - D) / (n(n - 1)) with no tie adjustment.
  plain
};

/// Kendall's tau over the labels present in both vectors, in O(n log n)
/// (Knight's algorithm). Returns 0 when either ranking is constant.
inline double kendall_tau(const ScoreVector& x, const ScoreVector& y,
                          TauVariant variant = TauVariant::b) {
  std::vector<std::pair<double, double>> pairs;
  for (const auto& [k, xv] : x.scores) {
    auto it = y.scores.find(k);
    if (it != y.scores.end())
      pairs.emplace_back(xv, it->second);
  }
  const std::size_t n = pairs.size();
  if (n < 2)
    throw ValidationError("Kendall's tau needs at least 2 common nodes");
  std::sort(pairs.begin(), pairs.end());

  auto tie_pairs = [](std::uint64_t run) { return run * (run - 1) / 2; };
  const std::uint64_t n0 = tie_pairs(n);
  std::uint64_t n1 = 0, n3 = 0;
  {
    std::uint64_t run_x = 1, run_xy = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      const bool same_x = i < n && pairs[i].first == pairs[i - 1].first;
      const bool same_xy = same_x && pairs[i].second == pairs[i - 1].second;
      if (same_xy) {
        ++run_xy;
      } else {
        n3 += tie_pairs(run_xy);
        run_xy = 1;
      }
      if (same_x) {
        ++run_x;
      } else {
        n1 += tie_pairs(run_x);
        run_x = 1;
      }
    }
  }
  // Merge sort on y counts the swaps, i.e. the discordant pairs.
  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i)
    ys[i] = pairs[i].second;
  std::uint64_t swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, out = lo;
      while (i < mid && j < hi) {
        if (ys[j] < ys[i]) {
          swaps += mid - i;
          buf[out++] = ys[j++];
        } else {
          buf[out++] = ys[i++];
        }
      }
      while (i < mid)
        buf[out++] = ys[i++];
      while (j < hi)
        buf[out++] = ys[j++];
    }
    ys.swap(buf);
  }
  std::uint64_t n2 = 0;
  {
    std::uint64_t run = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      if (i < n && ys[i] == ys[i - 1]) {
        ++run;
      } else {
        n2 += tie_pairs(run);
        run = 1;
      }
    }
  }
  const double concordant_minus_discordant =
      static_cast<double>(n0) - static_cast<double>(n1) - static_cast<double>(n2) +
      static_cast<double>(n3) - 2.0 * static_cast<double>(swaps);
  if (variant == TauVariant::plain)
    return concordant_minus_discordant / static_cast<double>(n0);
  // One square root of the product keeps perfect agreement at exactly +-1.
  const double denom =
      std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
  if (denom == 0.0)
    return 0.0;
  return std::clamp(concordant_minus_discordant / denom, -1.0, 1.0);
}

struct RankedComparison {
  std::size_t common_support = 0;
  double tau = 0.0;
  double kl = 0.0;
  double smoothing_epsilon = kDefaultKlEpsilon;
};

/// Compares a model score vector against ground truth: tau-b, and
/// D(truth || model) with smoothing on the model side.
inline RankedComparison compare_to_ground_truth(const ScoreVector& truth,
                                                const ScoreVector& model,
                                                double epsilon = kDefaultKlEpsilon) {
  RankedComparison rc;
  for (const auto& [k, _] : truth.scores)
    rc.common_support += model.scores.count(k);
  rc.tau = kendall_tau(truth, model, TauVariant::b);
  rc.kl = kl_divergence(truth, model, epsilon, Smoothing::model_only);
  rc.smoothing_epsilon = epsilon;
  return rc;
}

} // namespace hon
