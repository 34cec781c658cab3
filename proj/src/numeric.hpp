/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Small numerical helpers shared by the core translation units.

#include <algorithm>
#include <cmath>
#include <limits>

namespace lifeins::detail {

inline double log_sum_exp(double a, double b) {
  const double hi = std::max(a, b);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// (1 - e^{-x}) / x for x >= 0, equal to 1 at x = 0.
inline double one_minus_exp_over(double x) {
  if (x < 1e-8) return 1.0 - 0.5 * x;
  return -std::expm1(-x) / x;
}

// (e^{-a y} - e^{-b y}) / (b - a) for y >= 0, finite at a == b where it
// tends to y e^{-a y}.
inline double exp_difference_quotient(double a, double b, double y) {
  const double lo = std::min(a, b);
  const double gap = std::abs(b - a);
  return std::exp(-lo * y) * y * one_minus_exp_over(gap * y);
}

// Bisection on a monotone function whose sign changes on [lo, hi]. Stops when
// the bracket is narrower than rel_tol * |hi| (or abs_tol).
template <typename F>
double bisect(F&& f, double lo, double hi, double rel_tol, double abs_tol = 0.0,
              int max_iter = 2000) {
  double f_lo = f(lo);
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= std::max(rel_tol * std::abs(hi), abs_tol) || mid == lo || mid == hi) break;
    const double f_mid = f(mid);
    if ((f_mid > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace lifeins::detail
