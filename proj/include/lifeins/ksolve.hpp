/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include "lifeins/model.hpp"

namespace lifeins {

// Coefficient k of the value function U(w, D) = -k / (alpha r) e^{-alpha r w}
// for a fixed benefit D. For the continuous scheme, premium_rate is h and
// a_term already includes the -alpha r h D shift.
struct ValueCoefficient {
  Scheme scheme = Scheme::Single;
  double benefit = 0.0;
  double premium_rate = 0.0;
  double alpha = 0.0;
  double r = 0.0;
  double a_term = 0.0;  // alpha r (I_x + I_y) + lambda_x + lambda_y + m [- alpha r h D]
  double log_b = 0.0;   // ln of the right-hand side B(D)
  double log_k = 0.0;
  double k = 0.0;
  double residual = 0.0;  // |k (r ln k + A) - B| / B
  double dk_dbenefit = 0.0;
};

// Right-hand side B(D) in log form.
double log_b_term(const MarketParams& mkt, const HouseholdParams& hh, double benefit);

// Unique y > 0 with y e^y = C, given ln C.
double lambert_w_from_log(double log_c);

ValueCoefficient solve_k(const MarketParams& mkt, const HouseholdParams& hh, double benefit);
ValueCoefficient solve_k_bar(const MarketParams& mkt, const HouseholdParams& hh,
                             double premium_rate, double benefit);

double value_function(const ValueCoefficient& coeff, double wealth);

// Survivor's maximized utility after the first death, with hazard `lambda`
// and income `income`.
double merton_value(const MarketParams& mkt, double alpha, double lambda, double income,
                    double wealth);

}  // namespace lifeins
