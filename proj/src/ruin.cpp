/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lifeins/ruin.hpp"

#include <cmath>
#include <numbers>

#include "numeric.hpp"

namespace lifeins {

void RuinInputs::validate() const {
  auto need = [](bool ok, const char* field, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidParameter, std::string(field) + ": " + what, field);
  };
  need(std::isfinite(c0) && c0 > 0.0, "c0", "initial consumption must be > 0");
  need(std::isfinite(delta), "delta", "must be finite");
  need(std::isfinite(jump_x), "jump_x", "must be finite");
  need(std::isfinite(jump_y), "jump_y", "must be finite");
  need(std::isfinite(lambda_x) && lambda_x > 0.0, "lambda_x", "must be > 0");
  need(std::isfinite(lambda_y) && lambda_y > 0.0, "lambda_y", "must be > 0");
  need(std::isfinite(m) && m > 0.0, "m", "must be > 0");
  need(std::isfinite(r) && r > 0.0, "r", "must be > 0");
  need(std::isfinite(alpha) && alpha > 0.0, "alpha", "must be > 0");
}

double wealth_drift(const PolicySolution& sol) {
  const double r = sol.market.r();
  const double a = sol.household.alpha();
  double d = 2.0 * sol.market.m() / (a * r) + sol.household.total_income() +
             sol.coefficient.log_k / a;
  if (sol.quote.scheme == Scheme::Continuous) d -= sol.quote.rate * sol.benefit;
  return d;
}

RuinInputs ruin_inputs(const PolicySolution& sol, double wealth) {
  RuinInputs in;
  in.c0 = sol.initial_consumption(wealth);
  in.delta = wealth_drift(sol);
  in.jump_x = sol.jump_x;
  in.jump_y = sol.jump_y;
  in.lambda_x = sol.household.lambda_x();
  in.lambda_y = sol.household.lambda_y();
  in.m = sol.market.m();
  in.r = sol.market.r();
  in.alpha = sol.household.alpha();
  return in;
}

namespace {

struct Rates {
  double nu;   // drift of consumption, r delta
  double v2;   // variance rate, 2m / alpha^2
  double s;    // sqrt(nu^2 + 2 (lambda_x + lambda_y) v2)
  double up;   // (s + nu) / v2: decay rate towards the barrier
  double down; // (s - nu) / v2
};

Rates rates(const RuinInputs& in) {
  in.validate();
  Rates k;
  k.nu = in.r * in.delta;
  k.v2 = 2.0 * in.m / (in.alpha * in.alpha);
  k.s = std::sqrt(k.nu * k.nu + 2.0 * (in.lambda_x + in.lambda_y) * k.v2);
  if (!(k.s > 0.0) || !std::isfinite(k.s)) {
    throw Error(ErrorCode::SingularParameter, "S is zero or not finite", "delta");
  }
  // s + nu and s - nu computed without cancellation.
  const double prod = 2.0 * (in.lambda_x + in.lambda_y) * k.v2;
  const double plus = k.nu >= 0.0 ? k.s + k.nu : prod / (k.s - k.nu);
  const double minus = k.nu <= 0.0 ? k.s - k.nu : prod / (k.s + k.nu);
  k.up = plus / k.v2;
  k.down = minus / k.v2;
  return k;
}

using detail::exp_difference_quotient;
using detail::one_minus_exp_over;

// Probability of reaching zero after the first death, given that the survivor
// with consumption jump `jump` remains and the other life has hazard
// `lambda_dead`. Excludes ruin caused by the jump itself.
double after_jump(const RuinInputs& in, const Rates& k, double lambda_dead, double jump,
                  char& kind) {
  const double a = in.alpha;
  const double a2m = a * a / in.m;
  const double c0 = in.c0;
  const double denom = a + k.down;
  if (jump >= 0.0) {
    kind = 'A';
    return lambda_dead * std::exp(-a * jump) * a2m / denom *
           exp_difference_quotient(a, k.up, c0);
  }
  const double y = c0 + jump;
  if (y > 0.0) {
    kind = 'B';
    const double sum = k.up + k.down;
    return lambda_dead / denom *
           (std::exp(-k.up * y) * (-std::expm1(sum * jump)) / k.s +
            a2m * exp_difference_quotient(a, k.up, y));
  }
  kind = 'D';
  return lambda_dead / (k.s * denom) * std::exp(k.down * y) *
         (-std::expm1(-(k.up + k.down) * c0));
}

// Probability that the jump at the first death takes consumption to zero or
// below, for the survivor with jump `jump`.
double jump_mass(const RuinInputs& in, const Rates& k, double lambda_dead, double jump) {
  if (jump >= 0.0) return 0.0;
  const double c0 = in.c0;
  const double drop = -jump;
  const double u = std::min(drop, c0);
  double v = std::exp(-k.up * (c0 - u)) * u * one_minus_exp_over(k.up * u);
  if (drop > c0) v += (drop - c0) * one_minus_exp_over(k.down * (drop - c0));
  v -= std::exp(-k.up * c0) * drop * one_minus_exp_over(k.down * drop);
  return lambda_dead / k.s * v;
}

double clamp_probability(double p, const char* what) {
  if (!std::isfinite(p) || p < -1e-9 || p > 1.0 + 1e-9) {
    throw Error(ErrorCode::NumericalFailure,
                std::string(what) + " evaluated outside [0, 1]: " + std::to_string(p), what);
  }
  return std::min(1.0, std::max(0.0, p));
}

}  // namespace

double prob_ruin_before_first_death(const RuinInputs& in) {
  const Rates k = rates(in);
  return std::exp(-k.up * in.c0);
}

BetweenDeaths prob_ruin_between_deaths(const RuinInputs& in) {
  const Rates k = rates(in);
  // The larger jump takes the role of (x); its term carries the hazard of
  // the other life.
  const bool x_large = in.jump_x >= in.jump_y;
  const double jl = x_large ? in.jump_x : in.jump_y;
  const double js = x_large ? in.jump_y : in.jump_x;
  const double lam_l = x_large ? in.lambda_y : in.lambda_x;
  const double lam_s = x_large ? in.lambda_x : in.lambda_y;
  char kind_l = 'A';
  char kind_s = 'A';
  double p = after_jump(in, k, lam_l, jl, kind_l) + after_jump(in, k, lam_s, js, kind_s);
  const double jumps = jump_mass(in, k, lam_l, jl) + jump_mass(in, k, lam_s, js);
  BetweenDeaths out;
  static constexpr char table[3][3] = {{'A', 'B', 'D'}, {'?', 'C', 'E'}, {'?', '?', 'F'}};
  auto idx = [](char c) { return c == 'A' ? 0 : c == 'B' ? 1 : 2; };
  out.subcase = table[idx(kind_l)][idx(kind_s)];
  out.at_first_death = clamp_probability(jumps, "p_at_first_death");
  out.probability = clamp_probability(p + jumps, "p_between");
  return out;
}

RuinReport prob_ruin_total(const RuinInputs& in) {
  RuinReport rep;
  rep.p_before = prob_ruin_before_first_death(in);
  const BetweenDeaths b = prob_ruin_between_deaths(in);
  rep.p_between = b.probability;
  rep.p_at_first_death = b.at_first_death;
  rep.subcase = b.subcase;
  rep.large_jump_survivor = in.jump_x >= in.jump_y ? Survivor::X : Survivor::Y;
  const double large = std::max(in.jump_x, in.jump_y);
  const double small = std::min(in.jump_x, in.jump_y);
  rep.case_label = small >= 0.0 ? "I" : (large >= 0.0 ? "II" : "III");
  rep.p_total = clamp_probability(rep.p_before + rep.p_between, "p_total");
  return rep;
}

double ruin_density_before_first_death(const RuinInputs& in, double t) {
  in.validate();
  if (!(t > 0.0)) return 0.0;
  const double nu = in.r * in.delta;
  const double v2 = 2.0 * in.m / (in.alpha * in.alpha);
  // In logs, with (c0 + nu t)^2 / t expanded, so extreme t gives 0 rather than nan.
  const double e = (in.c0 * in.c0 / t + 2.0 * in.c0 * nu + nu * nu * t) / (2.0 * v2);
  return std::exp(std::log(in.c0) - 0.5 * std::log(2.0 * std::numbers::pi * v2) -
                  1.5 * std::log(t) - e);
}

double ruin_density_mass(const RuinInputs& in) {
  in.validate();
  const double nu = in.r * in.delta;
  if (nu <= 0.0) return 1.0;
  return std::exp(-in.alpha * in.alpha * nu * in.c0 / in.m);
}

}  // namespace lifeins
