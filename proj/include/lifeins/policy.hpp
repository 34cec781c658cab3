/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lifeins/ksolve.hpp"
#include "lifeins/model.hpp"

namespace lifeins {

// How premiums are set: by explicit loadings, or by a common target loss
// probability that fixes both rates.
struct Pricing {
  enum class Mode { Loading, LossProbability };
  Mode mode = Mode::Loading;
  double theta = 0.0;
  double theta_bar = 0.0;
  double loss_probability = 0.0;

  static Pricing loadings(double theta, double theta_bar) {
    return {Mode::Loading, theta, theta_bar, 0.0};
  }
  static Pricing target_loss(double q) { return {Mode::LossProbability, 0.0, 0.0, q}; }

  PremiumQuote quote(const MarketParams& mkt, const HouseholdParams& hh, Scheme scheme) const;
  QuotePair quotes(const MarketParams& mkt, const HouseholdParams& hh) const;
};

// Quantity inside max(., 0) of the optimal-benefit formula; the optimal
// benefit is positive exactly when this is positive.
double benefit_bracket(const MarketParams& mkt, const HouseholdParams& hh,
                       const PremiumQuote& quote);

double optimal_benefit_single(const MarketParams& mkt, const HouseholdParams& hh,
                              const PremiumQuote& quote);
double optimal_benefit_continuous(const MarketParams& mkt, const HouseholdParams& hh,
                                  const PremiumQuote& quote);
double optimal_benefit(const MarketParams& mkt, const HouseholdParams& hh,
                       const PremiumQuote& quote);

// Upper bound on the optimal benefit: max(I_x, I_y) / r (single) or
// max(I_x, I_y) / (h + r) (continuous).
double optimal_benefit_bound(const MarketParams& mkt, const HouseholdParams& hh,
                             const PremiumQuote& quote);

double investment_rate(const MarketParams& mkt, const HouseholdParams& hh);

ValueCoefficient coefficient_at(const MarketParams& mkt, const HouseholdParams& hh,
                                const PremiumQuote& quote, double benefit);

// Consumption change at the first death for a fixed benefit D.
double consumption_jump_at(const MarketParams& mkt, const HouseholdParams& hh,
                           const PremiumQuote& quote, double benefit, Survivor survivor);

struct PolicySolution {
  MarketParams market;
  HouseholdParams household;
  PremiumQuote quote;
  double benefit = 0.0;  // D* or D-bar*
  ValueCoefficient coefficient;
  double risky_allocation = 0.0;
  double jump_x = 0.0;  // consumption change if (x) survives
  double jump_y = 0.0;  // consumption change if (y) survives
  // c0(w) = c0_slope * w + c0_intercept: consumption right after buying the
  // optimal benefit, starting from wealth w and no coverage.
  double c0_slope = 0.0;
  double c0_intercept = 0.0;

  double initial_consumption(double wealth) const { return c0_slope * wealth + c0_intercept; }
  double jump(Survivor s) const { return s == Survivor::X ? jump_x : jump_y; }
};

PolicySolution solve_policy(const MarketParams& mkt, const HouseholdParams& hh,
                            const PremiumQuote& quote);

enum class Phase { BeforeFirstDeath, AfterFirstDeath };

// Before the first death the benefit held is sol.benefit. After the first
// death, `survivor` selects whose income and hazard remain.
double consumption_rate(const PolicySolution& sol, double wealth, Phase phase,
                        Survivor survivor = Survivor::X);

struct DriftReport {
  double definitional = 0.0;
  double reduced = 0.0;
};

// Drift of optimally controlled wealth before the first death. Throws
// InteriorOptimumRequired when the optimal benefit is zero.
DriftReport pre_death_drift(const PolicySolution& sol);

// alpha at which the optimal benefit becomes positive; +inf if it never does.
double alpha_threshold(const MarketParams& mkt, const HouseholdParams& hh, const Pricing& pricing,
                       Scheme scheme);

enum class SweepParameter { Theta, Alpha, IncomeX, IncomeY, LambdaX, LambdaY };

std::string_view to_string(SweepParameter p);
std::optional<SweepParameter> sweep_parameter_from_string(std::string_view name);

struct SweepRow {
  double value = 0.0;
  double benefit_single = 0.0;
  double benefit_continuous = 0.0;
  double jump_x = 0.0;  // single-premium scheme
  double jump_y = 0.0;
};

// Flag states: Holds / Violated for checked claims, NotAsserted otherwise.
enum class Claim { Holds, Violated, NotAsserted };
std::string_view to_string(Claim c);

struct SweepReport {
  SweepParameter parameter = SweepParameter::Theta;
  std::vector<SweepRow> rows;
  Claim monotone_single = Claim::NotAsserted;
  Claim monotone_continuous = Claim::NotAsserted;
  Claim convex_single = Claim::NotAsserted;  // income sweeps, where D > 0
  Claim convex_continuous = Claim::NotAsserted;
  Claim concave_single = Claim::NotAsserted;  // alpha sweep, gated
  Claim concave_continuous = Claim::NotAsserted;
  std::vector<std::string> notes;
};

std::vector<double> linear_grid(double from, double to, int steps);

// Rows are computed independently, so `workers` only affects runtime.
SweepReport comparative_statics_sweep(const MarketParams& mkt, const HouseholdParams& hh,
                                      const Pricing& pricing, SweepParameter parameter,
                                      const std::vector<double>& grid, int workers = 1);

struct VerificationGrid {
  double w_min = -20.0;
  double w_max = 60.0;
  int w_points = 201;
  double d_min = 0.0;
  double d_max = -1.0;  // < 0 means 1.5 max(I_x, I_y) / r
  int d_points = 161;
};

struct VerificationReport {
  bool passed = false;
  double tolerance = 0.0;
  std::size_t points = 0;
  double worst_hjb = 0.0;        // relative HJB residual on D >= D*
  double worst_gradient = 0.0;   // largest positive gradient-constraint value, relative
  double worst_buy_region = 0.0; // largest positive generator value for D < D*, relative
  double boundary_equality = 0.0; // |gradient constraint| at D = D*, relative
  double coefficient_gap = 0.0;   // |k(D*) / bound - 1| when D* > 0
  double worst_fd_gap = 0.0;      // finite-difference cross-check, relative
  double worst_w = 0.0;
  double worst_d = 0.0;
  std::string worst_kind;
};

// Checks the variational inequality for the closed-form value function on a
// (w, D) grid. When `finite_difference` is set, the analytic derivatives are
// also compared to central differences.
VerificationReport verify_variational_inequality(const PolicySolution& sol,
                                                 const VerificationGrid& grid, double tol,
                                                 bool finite_difference = false);

}  // namespace lifeins
