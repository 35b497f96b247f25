#pragma once

#include <cmath>
#include <limits>

#include "hon/error.hpp"

namespace hon {

namespace detail {

inline constexpr int kGammaMaxIterations = 100000;
inline constexpr double kGammaEps = 1e-16;

// P(a, x) by its power series; converges quickly for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kGammaMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw ConvergenceError("incomplete gamma series did not converge", term);
}

// Q(a, x) by the modified Lentz continued fraction; used for x >= a + 1.
inline double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kGammaEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny)
      d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny)
      c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps)
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge", h);
}

} // namespace detail

/// Regularized lower incomplete gamma gamma(a, x) / Gamma(a).
inline double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x))
    throw Error(ErrorKind::numerical, "incomplete gamma needs a > 0, x >= 0");
  if (x == 0.0)
    return 0.0;
  if (std::isinf(x))
    return 1.0;
  if (x < a + 1.0)
    return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_fraction(a, x);
}

/// Regularized upper incomplete gamma, 1 - P(a, x), without cancellation.
inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x))
    throw Error(ErrorKind::numerical, "incomplete gamma needs a > 0, x >= 0");
  if (x == 0.0)
    return 1.0;
  if (std::isinf(x))
    return 0.0;
  if (x < a + 1.0)
    return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_fraction(a, x);
}

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
inline double chi_square_sf(double statistic, double dof) {
  return regularized_gamma_q(dof / 2.0, statistic / 2.0);
}

} // namespace hon
