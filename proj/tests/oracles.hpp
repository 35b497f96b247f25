#pragma once

// Slow, independent reference implementations used by the unit and
// acceptance tests. None of them calls into the code it checks beyond
// reading model structure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hon/hon.hpp"

namespace oracle {

// ---------------------------------------------------------------- paths

struct Adjacency {
  std::size_t n = 0;
  // (target, cost) per node
  std::vector<std::vector<std::pair<std::uint32_t, double>>> out;
};

inline Adjacency adjacency(const hon::FirstOrderGraph& g, bool weighted) {
  Adjacency a;
  a.n = g.node_count();
  a.out.resize(a.n);
  for (const auto& [u, v, w] : g.edges())
    a.out[u].emplace_back(v, weighted ? w : 1.0);
  return a;
}

inline Adjacency adjacency(const hon::HigherOrderModel& m, bool neg_log_prob) {
  Adjacency a;
  a.n = m.node_count();
  a.out.resize(a.n);
  for (std::uint32_t h = 0; h < a.n; ++h)
    for (std::size_t e = m.edge_begin(h); e < m.edge_end(h); ++e)
      a.out[h].emplace_back(m.target(e), neg_log_prob ? std::max(0.0, -std::log(m.prob(e))) : 1.0);
  return a;
}

inline bool same_cost(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
}

/// All minimal simple paths s -> t, ranked by cost then hop count.
inline std::vector<std::vector<std::uint32_t>> minimal_paths(const Adjacency& a, std::uint32_t s,
                                                             std::uint32_t t) {
  struct Found {
    std::vector<std::uint32_t> path;
    double cost;
  };
  std::vector<Found> all;
  std::vector<std::uint32_t> stack{s};
  std::vector<char> on(a.n, 0);
  on[s] = 1;
  std::function<void(double)> dfs = [&](double cost) {
    const auto u = stack.back();
    if (u == t && stack.size() > 1) {
      all.push_back({stack, cost});
      return;
    }
    for (const auto& [v, c] : a.out[u]) {
      if (on[v])
        continue;
      on[v] = 1;
      stack.push_back(v);
      dfs(cost + c);
      stack.pop_back();
      on[v] = 0;
    }
  };
  dfs(0.0);
  if (all.empty())
    return {};
  double best = all.front().cost;
  for (const auto& f : all)
    if (f.cost < best && !same_cost(f.cost, best))
      best = f.cost;
  std::size_t best_hops = SIZE_MAX;
  for (const auto& f : all)
    if (same_cost(f.cost, best))
      best_hops = std::min(best_hops, f.path.size());
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& f : all)
    if (same_cost(f.cost, best) && f.path.size() == best_hops)
      out.push_back(f.path);
  return out;
}

/// Betweenness by expanding every minimal higher-order path into its
/// first-order sequence and crediting all occurrences except the first and
/// the last. per_fo_pair pools paths by (first of source, last of target).
inline std::vector<double> betweenness(const hon::HigherOrderModel& m, bool neg_log_prob,
                                       bool per_fo_pair) {
  const auto a = adjacency(m, neg_log_prob);
  const std::size_t nv = m.labels().size();
  std::vector<double> raw(nv, 0.0);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<std::vector<double>, double>> pooled;
  for (std::uint32_t s = 0; s < a.n; ++s)
    for (std::uint32_t t = 0; t < a.n; ++t) {
      if (s == t)
        continue;
      const auto paths = minimal_paths(a, s, t);
      if (paths.empty())
        continue;
      std::vector<double> occ(nv, 0.0);
      for (const auto& path : paths) {
        std::vector<hon::NodeId> seq;
        auto first = m.node(path.front());
        seq.assign(first.begin(), first.end());
        for (std::size_t i = 1; i < path.size(); ++i)
          seq.push_back(m.last(path[i]));
        for (std::size_t i = 1; i + 1 < seq.size(); ++i)
          occ[seq[i]] += 1.0;
      }
      const double sigma = static_cast<double>(paths.size());
      if (!per_fo_pair) {
        for (std::size_t v = 0; v < nv; ++v)
          raw[v] += occ[v] / sigma;
        continue;
      }
      const auto key = std::make_pair(m.first(s), m.last(t));
      if (key.first == key.second)
        continue;
      auto& slot = pooled[key];
      slot.first.resize(nv, 0.0);
      for (std::size_t v = 0; v < nv; ++v)
        slot.first[v] += occ[v];
      slot.second += sigma;
    }
  for (const auto& [_, slot] : pooled)
    for (std::size_t v = 0; v < nv; ++v)
      raw[v] += slot.first[v] / slot.second;
  return raw;
}

// ---------------------------------------------------------- linear algebra

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c]))
        piv = r;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k)
        A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k)
      acc -= A[i][k] * x[k];
    x[i] = acc / A[i][i];
  }
  return x;
}

/// Stationary vector of alpha*T' + (1-alpha)/n with dangling rows spread
/// uniformly: (I - alpha*T'^T) r = (1-alpha)/n * 1.
inline std::vector<double> pagerank(const hon::HigherOrderModel& m, double alpha) {
  const std::size_t n = m.node_count();
  std::vector<std::vector<double>> T(n, std::vector<double>(n, 0.0));
  for (std::uint32_t h = 0; h < n; ++h) {
    if (m.out_degree(h) == 0) {
      for (auto& x : T[h])
        x = 1.0 / static_cast<double>(n);
      continue;
    }
    for (std::size_t e = m.edge_begin(h); e < m.edge_end(h); ++e)
      T[h][m.target(e)] += m.prob(e);
  }
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      A[i][j] = (i == j ? 1.0 : 0.0) - alpha * T[j][i];
  return solve(A, std::vector<double>(n, (1.0 - alpha) / static_cast<double>(n)));
}

/// d(k) from explicit matrix powers.
inline std::uint64_t degrees_of_freedom(const hon::FirstOrderGraph& g, std::size_t k) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::uint64_t>> A(n, std::vector<std::uint64_t>(n, 0)), P;
  for (const auto& [u, v, w] : g.edges())
    A[u][v] = 1;
  P = A;
  std::uint64_t d = n - 1;
  for (std::size_t i = 1; i <= k; ++i) {
    if (i > 1) {
      std::vector<std::vector<std::uint64_t>> Q(n, std::vector<std::uint64_t>(n, 0));
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t x = 0; x < n; ++x)
            Q[r][c] += P[r][x] * A[x][c];
      P = std::move(Q);
    }
    std::uint64_t sum = 0, rows = 0;
    for (const auto& row : P) {
      std::uint64_t rs = 0;
      for (auto x : row)
        rs += x;
      sum += rs;
      rows += rs > 0 ? 1 : 0;
    }
    d += sum - rows;
  }
  return d;
}

// ------------------------------------------------------------- statistics

/// Upper chi-square tail by Simpson quadrature of the density after the
/// substitution t = u^2, which removes the singularity at 0 for dof = 1.
inline double chi_square_sf(double stat, int dof) {
  if (stat <= 0.0)
    return 1.0;
  const long double half = dof / 2.0L;
  const long double norm = std::exp(-(half * std::log(2.0L) + std::lgamma(half)));
  auto g = [&](long double u) {
    if (u == 0.0L)
      return dof == 1 ? 2.0L * norm : 0.0L;
    return 2.0L * norm * std::pow(u, dof - 1) * std::exp(-u * u / 2.0L);
  };
  const long double top = std::sqrt(static_cast<long double>(stat));
  const int steps = 4000;
  const long double h = top / steps;
  long double acc = g(0.0L) + g(top);
  for (int i = 1; i < steps; ++i)
    acc += (i % 2 ? 4.0L : 2.0L) * g(i * h);
  const long double cdf = acc * h / 3.0L;
  return static_cast<double>(1.0L - cdf);
}

/// Tau over all pairs. b: tie-adjusted denominator; otherwise n(n-1)/2.
inline double kendall_tau(const std::vector<double>& x, const std::vector<double>& y, bool b) {
  const std::size_t n = x.size();
  double c = 0, d = 0, tx = 0, ty = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs += 1;
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0)
        tx += 1;
      if (dy == 0)
        ty += 1;
      if (dx * dy > 0)
        c += 1;
      else if (dx * dy < 0)
        d += 1;
    }
  if (!b)
    return (c - d) / pairs;
  const double den = std::sqrt((pairs - tx) * (pairs - ty));
  return den == 0 ? 0.0 : (c - d) / den;
}

// ------------------------------------------------------------ likelihood

/// Multi-order log-likelihood straight from window counts in the corpus.
inline double multi_order_likelihood(const hon::PathCorpus& corpus, std::size_t K,
                                     const hon::Path& p) {
  std::map<std::vector<hon::NodeId>, double> windows, contexts;
  for (const auto& q : corpus.paths)
    for (std::size_t k = 1; k <= K; ++k)
      for (std::size_t i = 0; i + k < q.nodes.size(); ++i) {
        std::vector<hon::NodeId> w(q.nodes.begin() + i, q.nodes.begin() + i + k + 1);
        windows[w] += static_cast<double>(q.multiplicity);
        w.pop_back();
        contexts[w] += static_cast<double>(q.multiplicity);
      }
  double ll = 0.0;
  for (std::size_t j = 1; j < p.nodes.size(); ++j) {
    const std::size_t k = std::min(j, K);
    std::vector<hon::NodeId> w(p.nodes.begin() + (j - k), p.nodes.begin() + j + 1);
    const double num = windows[w];
    w.pop_back();
    const double den = contexts[w];
    if (num == 0.0)
      return -INFINITY;
    ll += std::log(num / den);
  }
  return ll;
}

} // namespace oracle
