/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lifeins/ksolve.hpp"

#include <cmath>
#include <limits>

#include "numeric.hpp"

namespace lifeins {

double log_b_term(const MarketParams& mkt, const HouseholdParams& hh, double benefit) {
  const double r = mkt.r();
  const double a = hh.alpha();
  const double mix = detail::log_sum_exp(
      std::log(hh.lambda_x()) - a * hh.income_y() - hh.lambda_y() / r,
      std::log(hh.lambda_y()) - a * hh.income_x() - hh.lambda_x() / r);
  return -a * r * benefit - mkt.m() / r + mix;
}

double lambert_w_from_log(double log_c) {
  // Solve g(y) = y + ln y - ln C = 0 on y > 0.
  double y = log_c > 1.0 ? log_c - std::log(log_c) : std::exp(log_c);
  const double hi_bound = log_c > 1.0 ? log_c : std::exp(log_c);
  bool converged = false;
  for (int i = 0; i < 60; ++i) {
    const double g = y + std::log(y) - log_c;
    const double g1 = 1.0 + 1.0 / y;
    const double g2 = -1.0 / (y * y);
    double next = y - 2.0 * g * g1 / (2.0 * g1 * g1 - g * g2);
    if (!(next > 0.0) || !std::isfinite(next)) next = 0.5 * y;
    const double step = std::abs(next - y);
    y = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * y) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    y = detail::bisect([&](double v) { return v + std::log(v) - log_c; }, 0.0, hi_bound, 1e-15);
  }
  return y;
}

namespace {

ValueCoefficient solve_common(const MarketParams& mkt, const HouseholdParams& hh, Scheme scheme,
                              double premium_rate, double benefit) {
  if (!(std::isfinite(benefit) && benefit >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "benefit must be a finite number >= 0", "benefit");
  }
  const double r = mkt.r();
  const double alpha = hh.alpha();
  ValueCoefficient c;
  c.scheme = scheme;
  c.benefit = benefit;
  c.premium_rate = premium_rate;
  c.alpha = alpha;
  c.r = r;
  c.a_term = alpha * r * hh.total_income() + hh.total_hazard() + mkt.m();
  if (scheme == Scheme::Continuous) c.a_term -= alpha * r * premium_rate * benefit;
  c.log_b = log_b_term(mkt, hh, benefit);
  // With K = k e^{A/r}: K ln K = (B / r) e^{A/r}, and y = ln K solves y e^y = C.
  const double log_c = c.log_b - std::log(r) + c.a_term / r;
  const double y = lambert_w_from_log(log_c);
  c.log_k = y - c.a_term / r;
  c.k = std::exp(c.log_k);
  c.residual = std::abs(std::expm1(std::log(r * y) + c.log_k - c.log_b));
  // k' from differentiating the defining equation, written with k / B to
  // stay finite when B underflows.
  const double k_over_b = std::exp(c.log_k - c.log_b);
  if (scheme == Scheme::Single) {
    c.dk_dbenefit = -alpha * r * c.k / (1.0 + r * k_over_b);
  } else {
    c.dk_dbenefit = alpha * r * c.k * (premium_rate * k_over_b - 1.0) / (1.0 + r * k_over_b);
  }
  if (!(c.residual < 1e-10)) {
    throw Error(ErrorCode::NumericalFailure,
                "value coefficient residual " + std::to_string(c.residual) + " above 1e-10",
                "benefit");
  }
  return c;
}

}  // namespace

ValueCoefficient solve_k(const MarketParams& mkt, const HouseholdParams& hh, double benefit) {
  return solve_common(mkt, hh, Scheme::Single, 0.0, benefit);
}

ValueCoefficient solve_k_bar(const MarketParams& mkt, const HouseholdParams& hh,
                             double premium_rate, double benefit) {
  if (!(std::isfinite(premium_rate) && premium_rate > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "premium rate must be > 0", "rate");
  }
  return solve_common(mkt, hh, Scheme::Continuous, premium_rate, benefit);
}

double value_function(const ValueCoefficient& coeff, double wealth) {
  const double ar = coeff.alpha * coeff.r;
  return -std::exp(coeff.log_k - ar * wealth) / ar;
}

double merton_value(const MarketParams& mkt, double alpha, double lambda, double income,
                    double wealth) {
  const double r = mkt.r();
  const double ar = alpha * r;
  return -std::exp(-ar * (wealth + income / r + (lambda + mkt.m()) / (ar * r))) / ar;
}

}  // namespace lifeins
