/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <string>

#include "lifeins/model.hpp"
#include "lifeins/policy.hpp"

namespace lifeins {

// Inputs for the probability that the optimal consumption rate reaches zero.
// Before the first death consumption is arithmetic Brownian motion started at
// c0 with drift r * delta and variance rate 2m / alpha^2; at the first death it
// jumps by jump_x (if (x) survives) or jump_y.
struct RuinInputs {
  double c0 = 0.0;
  double delta = 0.0;
  double jump_x = 0.0;
  double jump_y = 0.0;
  double lambda_x = 0.0;
  double lambda_y = 0.0;
  double m = 0.0;
  double r = 0.0;
  double alpha = 0.0;

  void validate() const;
};

// Inputs implied by a solved policy when the household starts from wealth w
// with no coverage and buys the optimal benefit at once.
RuinInputs ruin_inputs(const PolicySolution& sol, double wealth);

// Wealth drift before the first death for the held benefit (no interior
// optimum needed).
double wealth_drift(const PolicySolution& sol);

struct RuinReport {
  double p_before = 0.0;            // P(tau0 < tau1)
  double p_between = 0.0;           // P(tau1 <= tau0 < tau2), includes p_at_first_death
  double p_at_first_death = 0.0;    // P(tau0 = tau1): the jump itself reaches zero
  double p_total = 0.0;             // P(tau0 < tau2)
  std::string case_label;           // I, II or III
  char subcase = 'A';               // A..F
  Survivor large_jump_survivor = Survivor::X;
};

double prob_ruin_before_first_death(const RuinInputs& in);

struct BetweenDeaths {
  double probability = 0.0;  // includes the jump mass
  double at_first_death = 0.0;
  char subcase = 'A';
};
BetweenDeaths prob_ruin_between_deaths(const RuinInputs& in);

RuinReport prob_ruin_total(const RuinInputs& in);

// First-passage density of pre-death consumption to zero (ignoring deaths).
double ruin_density_before_first_death(const RuinInputs& in, double t);

// Total mass of that density: P(consumption ever reaches zero without deaths).
double ruin_density_mass(const RuinInputs& in);

}  // namespace lifeins
