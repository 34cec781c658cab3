/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Independent reference computations used only by the tests. They share no
// code with the library beyond the parameter types.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "lifeins/model.hpp"

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 400) {
  const bool lo_neg = f(lo) < 0.0;
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if ((f(mid) < 0.0) == lo_neg) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-12) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct Params {
  double r, mu, sigma, lx, ly, ix, iy, alpha;
  double m() const { return 0.5 * std::pow((mu - r) / sigma, 2); }
};

inline Params reference_household() { return {0.02, 0.06, 0.20, 0.04, 0.03, 2.0, 1.5, 2.0}; }

inline lifeins::MarketParams market(const Params& p) {
  return lifeins::MarketParams({p.r, p.mu, p.sigma});
}
inline lifeins::HouseholdParams household(const Params& p) {
  return lifeins::HouseholdParams({p.lx, p.ly, p.ix, p.iy, p.alpha});
}

// ln k solving k (r ln k + A) = B by bisection in ln k on the rising branch,
// with A shifted by -alpha r h D for the continuous scheme.
inline double log_k(const Params& p, double benefit, double h = 0.0) {
  const double a = p.alpha * p.r * (p.ix + p.iy) + p.lx + p.ly + p.m() -
                   p.alpha * p.r * h * benefit;
  const double log_b = -p.alpha * p.r * benefit - p.m() / p.r +
                       std::log(p.lx * std::exp(-p.alpha * p.iy - p.ly / p.r) +
                                p.ly * std::exp(-p.alpha * p.ix - p.lx / p.r));
  // f(ln k) = ln k + ln(r ln k + A) - ln B, defined for ln k > -A / r.
  const double lo = -a / p.r;
  auto f = [&](double lk) {
    const double inner = p.r * lk + a;
    if (lk <= lo || inner <= 0.0) return -std::numeric_limits<double>::infinity();
    return lk + std::log(inner) - log_b;
  };
  double hi = lo + 1.0;
  while (f(hi) < 0.0) hi += 2.0 * (hi - lo);
  return bisect(f, lo, hi);
}

// Optimal benefits by direct formula with plain exp/log (no log-sum-exp).
inline double bracket_single(const Params& p, double big_h) {
  const double mix = p.lx * std::exp(p.alpha * p.ix + p.lx / p.r) +
                     p.ly * std::exp(p.alpha * p.iy + p.ly / p.r);
  return std::log(mix) - std::log(p.r * big_h / (1.0 - big_h)) - big_h / (1.0 - big_h);
}
inline double bracket_continuous(const Params& p, double h) {
  const double mix = p.lx * std::exp(p.alpha * p.ix + p.lx / p.r) +
                     p.ly * std::exp(p.alpha * p.iy + p.ly / p.r);
  return std::log(mix) - std::log(h) - h / p.r;
}

// Numerical integral of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// Numerical integral of f over [a, inf).
inline double integrate_tail(const std::function<double(double)>& f, double a) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double t) { return f(a + t); }, 1e-13);
}

struct RuinCase {
  double c0, delta, jx, jy, lx, ly, m, r, alpha;
};

// Probability of reaching zero between the two deaths, by integrating the
// killed-diffusion Green function against the post-jump ruin probability
// (1 if the jump hits zero, e^{-alpha c} otherwise). Returns the total,
// including the jump mass.
inline double between_deaths_quadrature(const RuinCase& k) {
  const double nu = k.r * k.delta;
  const double v2 = 2.0 * k.m / (k.alpha * k.alpha);
  const double lam = k.lx + k.ly;
  const double s = std::sqrt(nu * nu + 2.0 * lam * v2);
  const double up = (s + nu) / v2;
  const double down = (s - nu) / v2;
  auto green = [&](double c) {
    const double e = c >= k.c0 ? std::exp(-down * (c - k.c0)) : std::exp(up * (c - k.c0));
    return (e - std::exp(-up * k.c0 - down * c)) / s;
  };
  auto piece = [&](double jump, double lambda_dead) {
    auto post = [&](double c) {
      const double y = c + jump;
      return y <= 0.0 ? 1.0 : std::exp(-k.alpha * y);
    };
    auto f = [&](double c) { return green(c) * post(c); };
    double total = 0.0;
    // Split at the kink c0 and at the jump threshold.
    double cut = -jump;
    double a = 0.0;
    std::vector<double> pts{0.0};
    if (cut > 0.0 && cut < k.c0) pts.push_back(cut);
    pts.push_back(k.c0);
    if (cut > k.c0) pts.push_back(cut);
    for (std::size_t i = 1; i < pts.size(); ++i) total += integrate(f, pts[i - 1], pts[i]);
    a = pts.back();
    total += integrate_tail(f, a);
    return lambda_dead * total;
  };
  return piece(k.jx, k.ly) + piece(k.jy, k.lx);
}

inline double before_first_death_closed(const RuinCase& k) {
  const double nu = k.r * k.delta;
  const double s = std::sqrt(nu * nu + 4.0 * k.m / (k.alpha * k.alpha) * (k.lx + k.ly));
  return std::exp(-k.alpha * k.alpha * k.c0 / (2.0 * k.m) * (s + nu));
}

}  // namespace oracle
