/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <string_view>

#include "lifeins/error.hpp"

namespace lifeins {

// Money is measured in units of $50,000 throughout the library. Rates are
// per year, hazards per year, risk aversion per unit.
inline constexpr double kDollarsPerUnit = 50000.0;

inline constexpr double to_dollars(double units) { return units * kDollarsPerUnit; }
inline constexpr double to_units(double dollars) { return dollars / kDollarsPerUnit; }

struct MarketInputs {
  double r = 0.0;      // riskless force of interest
  double mu = 0.0;     // drift of the risky asset
  double sigma = 0.0;  // volatility of the risky asset
};

// Black-Scholes market with a riskless asset. Construction validates
// r > 0, sigma > 0 and mu > r.
class MarketParams {
 public:
  explicit MarketParams(const MarketInputs& in);

  double r() const noexcept { return r_; }
  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }
  // Half the squared Sharpe ratio, ((mu - r) / sigma)^2 / 2.
  double m() const noexcept { return m_; }

  static double sharpe_half_square(double r, double mu, double sigma);

 private:
  double r_;
  double mu_;
  double sigma_;
  double m_;
};

struct HouseholdInputs {
  double lambda_x = 0.0;  // force of mortality of (x)
  double lambda_y = 0.0;  // force of mortality of (y)
  double income_x = 0.0;  // income rate of (x), units per year
  double income_y = 0.0;  // income rate of (y), units per year
  double alpha = 0.0;     // absolute risk aversion, per unit
};

class HouseholdParams {
 public:
  explicit HouseholdParams(const HouseholdInputs& in);

  double lambda_x() const noexcept { return in_.lambda_x; }
  double lambda_y() const noexcept { return in_.lambda_y; }
  double income_x() const noexcept { return in_.income_x; }
  double income_y() const noexcept { return in_.income_y; }
  double alpha() const noexcept { return in_.alpha; }

  double total_hazard() const noexcept { return in_.lambda_x + in_.lambda_y; }
  double total_income() const noexcept { return in_.income_x + in_.income_y; }
  const HouseholdInputs& inputs() const noexcept { return in_; }

 private:
  HouseholdInputs in_;
};

enum class Scheme { Single, Continuous };
enum class Survivor { X, Y };

std::string_view to_string(Scheme scheme);
std::string_view to_string(Survivor survivor);

// Price of first-death insurance. For Scheme::Single, `rate` is H, the
// lump-sum price per unit of benefit. For Scheme::Continuous, `rate` is h,
// the premium per unit of benefit per year payable until the first death.
struct PremiumQuote {
  Scheme scheme = Scheme::Single;
  double loading = 0.0;
  double rate = 0.0;
  double loss_probability = 0.0;
};

struct QuotePair {
  PremiumQuote single;
  PremiumQuote continuous;
};

// Joint-life insurance APV, (lambda_x + lambda_y) / (lambda_x + lambda_y + r).
double joint_life_insurance_apv(const MarketParams& mkt, const HouseholdParams& hh);

PremiumQuote single_premium(const MarketParams& mkt, const HouseholdParams& hh, double theta);
PremiumQuote continuous_premium(const MarketParams& mkt, const HouseholdParams& hh,
                                double theta_bar);

// Largest per-policy loss probability whose premiums are not below the
// actuarially fair ones: 1 - (Abar_xy)^{(lambda_x + lambda_y) / r}.
double max_loss_probability(const MarketParams& mkt, const HouseholdParams& hh);

PremiumQuote calibrate_to_loss_probability(const MarketParams& mkt, const HouseholdParams& hh,
                                           double q, Scheme scheme);
QuotePair calibrate_to_loss_probability(const MarketParams& mkt, const HouseholdParams& hh,
                                        double q);

// P(L > 0) for the insurer's loss at issue under the quoted rate.
double implied_loss_probability(const PremiumQuote& quote, const MarketParams& mkt,
                                const HouseholdParams& hh);

// Exponential premium for a loss of size `loss` occurring with probability
// `p`: (1/alpha) ln(p e^{alpha loss} + 1 - p).
double exponential_premium(double loss, double p, double alpha);

// Inverts exponential_premium in alpha. Throws NoSolution unless
// p * loss < willingness_to_pay < loss.
double elicit_risk_aversion(double loss, double p, double willingness_to_pay);

}  // namespace lifeins
