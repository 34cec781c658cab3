/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lifeins/model.hpp"

#include <cmath>
#include <string>

#include "numeric.hpp"

namespace lifeins {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::PremiumNotViable: return "PremiumNotViable";
    case ErrorCode::LossProbabilityTooHigh: return "LossProbabilityTooHigh";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::InteriorOptimumRequired: return "InteriorOptimumRequired";
    case ErrorCode::SingularParameter: return "SingularParameter";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::Single ? "single" : "continuous";
}

std::string_view to_string(Survivor survivor) { return survivor == Survivor::X ? "x" : "y"; }

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, std::string(field) + ": " + what, field);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

double MarketParams::sharpe_half_square(double r, double mu, double sigma) {
  const double s = (mu - r) / sigma;
  return 0.5 * s * s;
}

MarketParams::MarketParams(const MarketInputs& in) : r_(in.r), mu_(in.mu), sigma_(in.sigma) {
  require(finite(in.r) && in.r > 0.0, "r", "must be a finite number > 0");
  require(finite(in.sigma) && in.sigma > 0.0, "sigma", "must be a finite number > 0");
  require(finite(in.mu) && in.mu > in.r, "mu", "must be a finite number > r");
  m_ = sharpe_half_square(r_, mu_, sigma_);
}

HouseholdParams::HouseholdParams(const HouseholdInputs& in) : in_(in) {
  require(finite(in.lambda_x) && in.lambda_x > 0.0, "lambda_x", "must be a finite number > 0");
  require(finite(in.lambda_y) && in.lambda_y > 0.0, "lambda_y", "must be a finite number > 0");
  require(finite(in.income_x) && in.income_x >= 0.0, "income_x", "must be a finite number >= 0");
  require(finite(in.income_y) && in.income_y >= 0.0, "income_y", "must be a finite number >= 0");
  require(finite(in.alpha) && in.alpha > 0.0, "alpha", "must be a finite number > 0");
}

double joint_life_insurance_apv(const MarketParams& mkt, const HouseholdParams& hh) {
  const double lam = hh.total_hazard();
  return lam / (lam + mkt.r());
}

PremiumQuote single_premium(const MarketParams& mkt, const HouseholdParams& hh, double theta) {
  require(finite(theta) && theta >= 0.0, "loading", "must be a finite number >= 0");
  const double lam = hh.total_hazard();
  const double rate = (1.0 + theta) * lam / (lam + mkt.r());
  if (!(rate < 1.0)) {
    throw Error(ErrorCode::PremiumNotViable,
                "single premium H = " + std::to_string(rate) +
                    " is not below 1; need r > loading * (lambda_x + lambda_y)",
                "loading");
  }
  PremiumQuote q{Scheme::Single, theta, rate, 0.0};
  q.loss_probability = implied_loss_probability(q, mkt, hh);
  return q;
}

PremiumQuote continuous_premium(const MarketParams& mkt, const HouseholdParams& hh,
                                double theta_bar) {
  require(finite(theta_bar) && theta_bar >= 0.0, "loading", "must be a finite number >= 0");
  PremiumQuote q{Scheme::Continuous, theta_bar, (1.0 + theta_bar) * hh.total_hazard(), 0.0};
  q.loss_probability = implied_loss_probability(q, mkt, hh);
  return q;
}

double max_loss_probability(const MarketParams& mkt, const HouseholdParams& hh) {
  const double ratio = hh.total_hazard() / mkt.r();
  return -std::expm1(-ratio * std::log1p(1.0 / ratio));
}

PremiumQuote calibrate_to_loss_probability(const MarketParams& mkt, const HouseholdParams& hh,
                                           double q, Scheme scheme) {
  const double q_max = max_loss_probability(mkt, hh);
  require(finite(q) && q > 0.0, "loss_probability", "must be a finite number > 0");
  if (q > q_max * (1.0 + 1e-13)) {
    throw Error(ErrorCode::LossProbabilityTooHigh,
                "loss_probability " + std::to_string(q) + " exceeds the maximum " +
                    std::to_string(q_max) + " (premium would be below the fair premium)",
                "loss_probability");
  }
  q = std::min(q, q_max);
  const double lam = hh.total_hazard();
  const double r = mkt.r();
  // ln H = (r / lam) ln(1 - q)
  const double log_h_single = (r / lam) * std::log1p(-q);
  const double single_rate = std::exp(log_h_single);
  PremiumQuote out;
  out.scheme = scheme;
  out.loss_probability = q;
  if (scheme == Scheme::Single) {
    out.rate = single_rate;
    out.loading = std::max(0.0, single_rate * (lam + r) / lam - 1.0);
  } else {
    out.rate = -r * single_rate / std::expm1(log_h_single);
    out.loading = std::max(0.0, out.rate / lam - 1.0);
  }
  return out;
}

QuotePair calibrate_to_loss_probability(const MarketParams& mkt, const HouseholdParams& hh,
                                        double q) {
  return {calibrate_to_loss_probability(mkt, hh, q, Scheme::Single),
          calibrate_to_loss_probability(mkt, hh, q, Scheme::Continuous)};
}

double implied_loss_probability(const PremiumQuote& quote, const MarketParams& mkt,
                                const HouseholdParams& hh) {
  const double ratio = hh.total_hazard() / mkt.r();
  if (quote.scheme == Scheme::Single) {
    require(quote.rate > 0.0 && quote.rate < 1.0, "rate", "single premium must lie in (0, 1)");
    return -std::expm1(ratio * std::log(quote.rate));
  }
  require(quote.rate > 0.0, "rate", "continuous premium must be > 0");
  return -std::expm1(-ratio * std::log1p(mkt.r() / quote.rate));
}

double exponential_premium(double loss, double p, double alpha) {
  const double x = alpha * loss;
  if (x < 1.0) return std::log1p(p * std::expm1(x)) / alpha;
  return loss + std::log(p + (1.0 - p) * std::exp(-x)) / alpha;
}

double elicit_risk_aversion(double loss, double p, double willingness_to_pay) {
  require(finite(loss) && loss > 0.0, "loss", "must be a finite number > 0");
  require(finite(p) && p > 0.0 && p < 1.0, "p", "must lie in (0, 1)");
  require(finite(willingness_to_pay), "willingness_to_pay", "must be finite");
  if (!(willingness_to_pay > p * loss && willingness_to_pay < loss)) {
    throw Error(ErrorCode::NoSolution,
                "willingness_to_pay must lie strictly between the expected loss " +
                    std::to_string(p * loss) + " and the loss " + std::to_string(loss),
                "willingness_to_pay");
  }
  const double lo = 1e-12;
  if (exponential_premium(loss, p, lo) >= willingness_to_pay) return lo;
  double hi = 1.0;
  while (exponential_premium(loss, p, hi) < willingness_to_pay) {
    hi *= 2.0;
    if (hi > 1e300) throw Error(ErrorCode::NumericalFailure, "alpha bracket diverged", "alpha");
  }
  return detail::bisect(
      [&](double a) { return exponential_premium(loss, p, a) - willingness_to_pay; }, lo, hi,
      1e-12);
}

}  // namespace lifeins
