/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lifeins/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "numeric.hpp"

namespace lifeins {

PremiumQuote Pricing::quote(const MarketParams& mkt, const HouseholdParams& hh,
                            Scheme scheme) const {
  if (mode == Mode::LossProbability) {
    return calibrate_to_loss_probability(mkt, hh, loss_probability, scheme);
  }
  return scheme == Scheme::Single ? single_premium(mkt, hh, theta)
                                  : continuous_premium(mkt, hh, theta_bar);
}

QuotePair Pricing::quotes(const MarketParams& mkt, const HouseholdParams& hh) const {
  return {quote(mkt, hh, Scheme::Single), quote(mkt, hh, Scheme::Continuous)};
}

namespace {

// ln(lambda_x e^{alpha I_x + lambda_x / r} + lambda_y e^{alpha I_y + lambda_y / r})
double log_income_mix(const MarketParams& mkt, const HouseholdParams& hh) {
  const double r = mkt.r();
  const double a = hh.alpha();
  return detail::log_sum_exp(std::log(hh.lambda_x()) + a * hh.income_x() + hh.lambda_x() / r,
                             std::log(hh.lambda_y()) + a * hh.income_y() + hh.lambda_y() / r);
}

double benefit_divisor(const MarketParams& mkt, const HouseholdParams& hh,
                       const PremiumQuote& quote) {
  return quote.scheme == Scheme::Single ? hh.alpha() * mkt.r()
                                        : hh.alpha() * (quote.rate + mkt.r());
}

void require_scheme(const PremiumQuote& quote, Scheme scheme) {
  if (quote.scheme != scheme) {
    throw Error(ErrorCode::InvalidParameter,
                "quote scheme is " + std::string(to_string(quote.scheme)) + ", expected " +
                    std::string(to_string(scheme)),
                "scheme");
  }
}

double survivor_income(const HouseholdParams& hh, Survivor s) {
  return s == Survivor::X ? hh.income_x() : hh.income_y();
}

double survivor_hazard(const HouseholdParams& hh, Survivor s) {
  return s == Survivor::X ? hh.lambda_x() : hh.lambda_y();
}

// Consumption right after the first death at zero wealth, net of rD.
double survivor_consumption_offset(const MarketParams& mkt, const HouseholdParams& hh,
                                   Survivor s) {
  return survivor_income(hh, s) +
         (survivor_hazard(hh, s) + mkt.m()) / (hh.alpha() * mkt.r());
}

}  // namespace

double benefit_bracket(const MarketParams& mkt, const HouseholdParams& hh,
                       const PremiumQuote& quote) {
  const double r = mkt.r();
  const double lg = log_income_mix(mkt, hh);
  if (quote.scheme == Scheme::Single) {
    const double hv = quote.rate;
    if (!(hv > 0.0 && hv < 1.0)) {
      throw Error(ErrorCode::PremiumNotViable, "single premium must lie in (0, 1)", "rate");
    }
    const double odds = hv / (1.0 - hv);
    return lg - (std::log(r) + std::log(hv) - std::log1p(-hv)) - odds;
  }
  if (!(quote.rate > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "continuous premium must be > 0", "rate");
  }
  return lg - std::log(quote.rate) - quote.rate / r;
}

double optimal_benefit_single(const MarketParams& mkt, const HouseholdParams& hh,
                              const PremiumQuote& quote) {
  require_scheme(quote, Scheme::Single);
  return std::max(benefit_bracket(mkt, hh, quote) / benefit_divisor(mkt, hh, quote), 0.0);
}

double optimal_benefit_continuous(const MarketParams& mkt, const HouseholdParams& hh,
                                  const PremiumQuote& quote) {
  require_scheme(quote, Scheme::Continuous);
  return std::max(benefit_bracket(mkt, hh, quote) / benefit_divisor(mkt, hh, quote), 0.0);
}

double optimal_benefit(const MarketParams& mkt, const HouseholdParams& hh,
                       const PremiumQuote& quote) {
  return quote.scheme == Scheme::Single ? optimal_benefit_single(mkt, hh, quote)
                                        : optimal_benefit_continuous(mkt, hh, quote);
}

double optimal_benefit_bound(const MarketParams& mkt, const HouseholdParams& hh,
                             const PremiumQuote& quote) {
  const double top = std::max(hh.income_x(), hh.income_y());
  return quote.scheme == Scheme::Single ? top / mkt.r() : top / (quote.rate + mkt.r());
}

double investment_rate(const MarketParams& mkt, const HouseholdParams& hh) {
  return (mkt.mu() - mkt.r()) / (hh.alpha() * mkt.r() * mkt.sigma() * mkt.sigma());
}

ValueCoefficient coefficient_at(const MarketParams& mkt, const HouseholdParams& hh,
                                const PremiumQuote& quote, double benefit) {
  return quote.scheme == Scheme::Single ? solve_k(mkt, hh, benefit)
                                        : solve_k_bar(mkt, hh, quote.rate, benefit);
}

double consumption_jump_at(const MarketParams& mkt, const HouseholdParams& hh,
                           const PremiumQuote& quote, double benefit, Survivor survivor) {
  const ValueCoefficient c = coefficient_at(mkt, hh, quote, benefit);
  return mkt.r() * benefit + survivor_consumption_offset(mkt, hh, survivor) +
         c.log_k / hh.alpha();
}

PolicySolution solve_policy(const MarketParams& mkt, const HouseholdParams& hh,
                            const PremiumQuote& quote) {
  const double benefit = optimal_benefit(mkt, hh, quote);
  const ValueCoefficient coeff = coefficient_at(mkt, hh, quote, benefit);
  const double r = mkt.r();
  const double a = hh.alpha();
  PolicySolution sol{mkt, hh, quote, benefit, coeff};
  sol.risky_allocation = investment_rate(mkt, hh);
  const double base = r * benefit + coeff.log_k / a;
  sol.jump_x = base + survivor_consumption_offset(mkt, hh, Survivor::X);
  sol.jump_y = base + survivor_consumption_offset(mkt, hh, Survivor::Y);
  sol.c0_slope = r;
  sol.c0_intercept = -coeff.log_k / a;
  if (quote.scheme == Scheme::Single) sol.c0_intercept -= r * quote.rate * benefit;
  return sol;
}

double consumption_rate(const PolicySolution& sol, double wealth, Phase phase,
                        Survivor survivor) {
  const double r = sol.market.r();
  if (phase == Phase::BeforeFirstDeath) {
    return r * wealth - sol.coefficient.log_k / sol.household.alpha();
  }
  return r * wealth + survivor_consumption_offset(sol.market, sol.household, survivor);
}

DriftReport pre_death_drift(const PolicySolution& sol) {
  if (!(sol.benefit > 0.0)) {
    throw Error(ErrorCode::InteriorOptimumRequired,
                "drift formulas need a positive optimal benefit", "benefit");
  }
  const MarketParams& mkt = sol.market;
  const HouseholdParams& hh = sol.household;
  const double r = mkt.r();
  const double a = hh.alpha();
  const double m = mkt.m();
  DriftReport d;
  d.definitional = 2.0 * m / (a * r) + hh.total_income() + sol.coefficient.log_k / a;
  const double common = (m - hh.total_hazard()) / (a * r);
  if (sol.quote.scheme == Scheme::Single) {
    const double hv = sol.quote.rate;
    d.reduced = common + hv / (a * (1.0 - hv));
  } else {
    d.definitional -= sol.quote.rate * sol.benefit;
    d.reduced = common + sol.quote.rate / (a * r);
  }
  return d;
}

double alpha_threshold(const MarketParams& mkt, const HouseholdParams& hh, const Pricing& pricing,
                       Scheme scheme) {
  const PremiumQuote quote = pricing.quote(mkt, hh, scheme);
  auto bracket_at = [&](double alpha) {
    HouseholdInputs in = hh.inputs();
    in.alpha = alpha;
    return benefit_bracket(mkt, HouseholdParams(in), quote);
  };
  if (hh.total_income() == 0.0) return std::numeric_limits<double>::infinity();
  double hi = 1.0;
  while (bracket_at(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e12) return std::numeric_limits<double>::infinity();
  }
  const double lo = 1e-300;
  if (bracket_at(lo) > 0.0) return 0.0;
  return detail::bisect(bracket_at, lo, hi, 1e-14);
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Theta: return "theta";
    case SweepParameter::Alpha: return "alpha";
    case SweepParameter::IncomeX: return "income_x";
    case SweepParameter::IncomeY: return "income_y";
    case SweepParameter::LambdaX: return "lambda_x";
    case SweepParameter::LambdaY: return "lambda_y";
  }
  return "unknown";
}

std::optional<SweepParameter> sweep_parameter_from_string(std::string_view name) {
  for (SweepParameter p : {SweepParameter::Theta, SweepParameter::Alpha, SweepParameter::IncomeX,
                           SweepParameter::IncomeY, SweepParameter::LambdaX,
                           SweepParameter::LambdaY}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::string_view to_string(Claim c) {
  switch (c) {
    case Claim::Holds: return "holds";
    case Claim::Violated: return "violated";
    case Claim::NotAsserted: return "not asserted";
  }
  return "unknown";
}

std::vector<double> linear_grid(double from, double to, int steps) {
  if (steps < 1) throw Error(ErrorCode::InvalidParameter, "steps must be >= 1", "steps");
  std::vector<double> g(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    g[static_cast<std::size_t>(i)] = i == steps ? to : from + (to - from) * i / steps;
  }
  return g;
}

namespace {

SweepRow sweep_row(const MarketParams& mkt, const HouseholdParams& hh, const Pricing& pricing,
                   SweepParameter parameter, double value) {
  HouseholdInputs in = hh.inputs();
  Pricing pr = pricing;
  switch (parameter) {
    case SweepParameter::Theta: pr = Pricing::loadings(value, value); break;
    case SweepParameter::Alpha: in.alpha = value; break;
    case SweepParameter::IncomeX: in.income_x = value; break;
    case SweepParameter::IncomeY: in.income_y = value; break;
    case SweepParameter::LambdaX: in.lambda_x = value; break;
    case SweepParameter::LambdaY: in.lambda_y = value; break;
  }
  const HouseholdParams h2(in);
  const QuotePair q = pr.quotes(mkt, h2);
  const PolicySolution single = solve_policy(mkt, h2, q.single);
  SweepRow row;
  row.value = value;
  row.benefit_single = single.benefit;
  row.benefit_continuous = optimal_benefit_continuous(mkt, h2, q.continuous);
  row.jump_x = single.jump_x;
  row.jump_y = single.jump_y;
  return row;
}

constexpr double kSlack = 1e-9;

// sign = -1 checks nonincreasing, +1 nondecreasing.
Claim monotone(const std::vector<SweepRow>& rows, double SweepRow::*field, int sign) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double d = (rows[i].*field - rows[i - 1].*field) * sign;
    if (d < -kSlack * (1.0 + std::abs(rows[i].*field))) return Claim::Violated;
  }
  return Claim::Holds;
}

// sign = +1 checks convexity, -1 concavity, using divided differences over
// consecutive triples where the benefit is positive throughout.
Claim curvature(const std::vector<SweepRow>& rows, double SweepRow::*field, int sign) {
  bool checked = false;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const SweepRow& a = rows[i - 2];
    const SweepRow& b = rows[i - 1];
    const SweepRow& c = rows[i];
    if (!(a.*field > 0.0 && b.*field > 0.0 && c.*field > 0.0)) continue;
    const double s1 = (b.*field - a.*field) / (b.value - a.value);
    const double s2 = (c.*field - b.*field) / (c.value - b.value);
    const double second = (s2 - s1) * sign;
    const double scale = std::abs(s1) + std::abs(s2) + 1.0;
    checked = true;
    if (second < -kSlack * scale) return Claim::Violated;
  }
  return checked ? Claim::Holds : Claim::NotAsserted;
}

}  // namespace

SweepReport comparative_statics_sweep(const MarketParams& mkt, const HouseholdParams& hh,
                                      const Pricing& pricing, SweepParameter parameter,
                                      const std::vector<double>& grid, int workers) {
  SweepReport rep;
  rep.parameter = parameter;
  rep.rows.resize(grid.size());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::InvalidParameter, "sweep grid must be strictly increasing", "grid");
    }
  }
  workers = std::max(1, std::min<int>(workers, static_cast<int>(grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rep.rows[i] = sweep_row(mkt, hh, pricing, parameter, grid[i]);
    }
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = static_cast<std::size_t>(w); i < grid.size();
               i += static_cast<std::size_t>(workers)) {
            rep.rows[i] = sweep_row(mkt, hh, pricing, parameter, grid[i]);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  switch (parameter) {
    case SweepParameter::Theta:
      rep.monotone_single = monotone(rep.rows, &SweepRow::benefit_single, -1);
      rep.monotone_continuous = monotone(rep.rows, &SweepRow::benefit_continuous, -1);
      break;
    case SweepParameter::Alpha: {
      rep.monotone_single = monotone(rep.rows, &SweepRow::benefit_single, +1);
      rep.monotone_continuous = monotone(rep.rows, &SweepRow::benefit_continuous, +1);
      const bool ordered = (hh.income_x() >= hh.income_y() && hh.lambda_x() >= hh.lambda_y()) ||
                           (hh.income_x() <= hh.income_y() && hh.lambda_x() <= hh.lambda_y());
      if (ordered) {
        rep.concave_single = curvature(rep.rows, &SweepRow::benefit_single, -1);
        rep.concave_continuous = curvature(rep.rows, &SweepRow::benefit_continuous, -1);
      } else {
        rep.notes.emplace_back(
            "concavity in alpha not asserted: (income, hazard) pairs are not ordered");
      }
      break;
    }
    case SweepParameter::IncomeX:
    case SweepParameter::IncomeY:
      rep.monotone_single = monotone(rep.rows, &SweepRow::benefit_single, +1);
      rep.monotone_continuous = monotone(rep.rows, &SweepRow::benefit_continuous, +1);
      rep.convex_single = curvature(rep.rows, &SweepRow::benefit_single, +1);
      rep.convex_continuous = curvature(rep.rows, &SweepRow::benefit_continuous, +1);
      break;
    case SweepParameter::LambdaX:
    case SweepParameter::LambdaY:
      rep.notes.emplace_back("direction of change in the hazard is ambiguous; nothing asserted");
      break;
  }
  return rep;
}

namespace {

struct Derivs {
  double u = 0.0;
  double u_w = 0.0;
  double u_ww = 0.0;
  double u_d = 0.0;
};

class ValueSurface {
 public:
  explicit ValueSurface(const PolicySolution& sol)
      : sol_(sol), opt_(sol.coefficient), ar_(sol.household.alpha() * sol.market.r()) {}

  // Closed-form value and derivatives at (w, D), extended below the optimal
  // benefit by an immediate purchase.
  Derivs at(double w, double d) const {
    const bool single = sol_.quote.scheme == Scheme::Single;
    Derivs out;
    if (d >= sol_.benefit) {
      const ValueCoefficient c = coefficient_at(sol_.market, sol_.household, sol_.quote, d);
      const double e = std::exp(c.log_k - ar_ * w);
      out.u = -e / ar_;
      out.u_w = e;
      out.u_ww = -ar_ * e;
      out.u_d = -c.dk_dbenefit / ar_ * std::exp(-ar_ * w);
      return out;
    }
    const double shift = single ? sol_.quote.rate * (sol_.benefit - d) : 0.0;
    const double e = std::exp(opt_.log_k - ar_ * (w - shift));
    out.u = -e / ar_;
    out.u_w = e;
    out.u_ww = -ar_ * e;
    out.u_d = single ? sol_.quote.rate * e : 0.0;
    return out;
  }

  double value(double w, double d) const { return at(w, d).u; }

  // Generator with the analytic maximizers, returned as (value, scale).
  std::pair<double, double> generator(double w, double d, const Derivs& v) const {
    const MarketParams& mkt = sol_.market;
    const HouseholdParams& hh = sol_.household;
    const double r = mkt.r();
    const double a = hh.alpha();
    const double c = -std::log(v.u_w) / a;
    const double pi = -(mkt.mu() - r) * v.u_w / (mkt.sigma() * mkt.sigma() * v.u_ww);
    double drift = r * w + (mkt.mu() - r) * pi + hh.total_income() - c;
    if (sol_.quote.scheme == Scheme::Continuous) drift -= sol_.quote.rate * d;
    const double terms[] = {
        drift * v.u_w,
        0.5 * mkt.sigma() * mkt.sigma() * pi * pi * v.u_ww,
        -std::exp(-a * c) / a,
        -(r + hh.total_hazard()) * v.u,
        hh.lambda_x() * merton_value(mkt, a, hh.lambda_y(), hh.income_y(), w + d),
        hh.lambda_y() * merton_value(mkt, a, hh.lambda_x(), hh.income_x(), w + d),
    };
    double sum = 0.0;
    double scale = 0.0;
    for (double t : terms) {
      sum += t;
      scale += std::abs(t);
    }
    return {sum, scale};
  }

  // Gradient constraint U_D - H U_w (single) or U_D (continuous), with scale.
  std::pair<double, double> gradient(const Derivs& v) const {
    if (sol_.quote.scheme == Scheme::Single) {
      const double hv = sol_.quote.rate;
      return {v.u_d - hv * v.u_w, std::abs(v.u_d) + hv * std::abs(v.u_w)};
    }
    return {v.u_d, std::abs(v.u_d) + std::abs(v.u_w)};
  }

 private:
  const PolicySolution& sol_;
  ValueCoefficient opt_;
  double ar_;
};

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

VerificationReport verify_variational_inequality(const PolicySolution& sol,
                                                 const VerificationGrid& grid, double tol,
                                                 bool finite_difference) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "tolerance must be > 0", "tol");
  if (grid.w_points < 2 || grid.d_points < 2) {
    throw Error(ErrorCode::InvalidParameter, "grid needs at least 2 points per axis", "grid");
  }
  const HouseholdParams& hh = sol.household;
  const MarketParams& mkt = sol.market;
  double d_max = grid.d_max;
  if (d_max < 0.0) d_max = 1.5 * std::max(hh.income_x(), hh.income_y()) / mkt.r();
  if (!(d_max > grid.d_min)) d_max = grid.d_min + 1.0;

  const ValueSurface surf(sol);
  VerificationReport rep;
  rep.tolerance = tol;

  auto note = [&](double value, double& worst, double w, double d, const char* kind) {
    if (value > worst) {
      worst = value;
      double worst_all = std::max({rep.worst_hjb, rep.worst_gradient, rep.worst_buy_region,
                                   rep.boundary_equality});
      if (value >= worst_all) {
        rep.worst_w = w;
        rep.worst_d = d;
        rep.worst_kind = kind;
      }
    }
  };

  const std::vector<double> ws = linear_grid(grid.w_min, grid.w_max, grid.w_points - 1);
  const std::vector<double> ds = linear_grid(grid.d_min, d_max, grid.d_points - 1);
  for (double w : ws) {
    for (double d : ds) {
      ++rep.points;
      const Derivs v = surf.at(w, d);
      const auto [gen, gen_scale] = surf.generator(w, d, v);
      const auto [grad, grad_scale] = surf.gradient(v);
      if (d >= sol.benefit) {
        note(std::abs(gen) / gen_scale, rep.worst_hjb, w, d, "hjb");
      } else {
        note(std::max(gen / gen_scale, 0.0), rep.worst_buy_region, w, d, "buy_region");
      }
      note(std::max(grad / grad_scale, 0.0), rep.worst_gradient, w, d, "gradient");

      if (finite_difference) {
        const double hw = 1e-5 * std::max(1.0, std::abs(w));
        const double hw2 = 1e-3 * std::max(1.0, std::abs(w));
        const double hd = 1e-5 * std::max(1.0, std::abs(d));
        const double fw = (surf.value(w + hw, d) - surf.value(w - hw, d)) / (2.0 * hw);
        const double fww = (surf.value(w + hw2, d) - 2.0 * v.u + surf.value(w - hw2, d)) /
                           (hw2 * hw2);
        double gap = std::max(rel_gap(fw, v.u_w), rel_gap(fww, v.u_ww));
        if (d - hd >= 0.0 && std::abs(d - sol.benefit) > 2.0 * hd) {
          const double fd = (surf.value(w, d + hd) - surf.value(w, d - hd)) / (2.0 * hd);
          gap = std::max(gap, std::abs(fd - v.u_d) / (std::abs(v.u_d) + std::abs(v.u_w)));
        }
        rep.worst_fd_gap = std::max(rep.worst_fd_gap, gap);
      }
    }
    if (sol.benefit > 0.0) {
      const Derivs v = surf.at(w, sol.benefit);
      const auto [grad, grad_scale] = surf.gradient(v);
      note(std::abs(grad) / grad_scale, rep.boundary_equality, w, sol.benefit, "boundary");
      const auto [gen, gen_scale] = surf.generator(w, sol.benefit, v);
      note(std::abs(gen) / gen_scale, rep.worst_hjb, w, sol.benefit, "hjb");
    }
  }

  if (sol.benefit > 0.0) {
    const double r = mkt.r();
    const double a = hh.alpha();
    const double base = -a * hh.total_income() - (hh.total_hazard() + mkt.m()) / r;
    double log_bound = 0.0;
    if (sol.quote.scheme == Scheme::Single) {
      const double hv = sol.quote.rate;
      log_bound = hv / (1.0 - hv) + base;
    } else {
      const double h = sol.quote.rate;
      log_bound = h / r + a * h * sol.benefit + base;
    }
    rep.coefficient_gap = std::abs(std::expm1(sol.coefficient.log_k - log_bound));
  }

  rep.passed = rep.worst_hjb < tol && rep.worst_gradient < tol && rep.worst_buy_region < tol &&
               rep.boundary_equality < tol && rep.coefficient_gap < 1e-10 &&
               (!finite_difference || rep.worst_fd_gap < 1e-4);
  return rep;
}

}  // namespace lifeins
