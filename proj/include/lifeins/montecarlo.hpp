/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lifeins/model.hpp"
#include "lifeins/policy.hpp"
#include "lifeins/ruin.hpp"

namespace lifeins {

struct SimConfig {
  std::uint64_t n_paths = 100000;
  double dt = 1.0 / 2000.0;
  double horizon_cap = 2000.0;  // years; paths are truncated beyond this
  std::uint64_t seed = 20260101;
  double wealth = 0.0;
  bool bridge_correction = true;
  // When set, each phase between deaths is sampled as one exact Gaussian
  // step plus the bridge crossing test, which has the same law as stepping
  // at dt with the bridge test. When clear, the path is stepped at dt.
  bool aggregate_steps = true;
  int workers = 1;  // 0 means one per hardware thread

  void validate() const;
};

struct Estimate {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

struct SimResult {
  std::vector<Estimate> estimates;
  std::uint64_t n_paths = 0;
  std::uint64_t n_effective = 0;  // paths not truncated at horizon_cap
  std::uint64_t truncated = 0;
  std::uint64_t rng_fingerprint = 0;

  const Estimate& get(const std::string& name) const;
};

// Engine seed for one path; results do not depend on the number of workers.
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path_index);

// Fingerprint of the first draws of path 0, recorded with every result.
std::uint64_t rng_fingerprint(std::uint64_t seed);

// Probability that an arithmetic Brownian motion with variance rate v2 that
// starts at a > 0 and ends at b > 0 after time t touched zero in between.
double bridge_crossing_probability(double a, double b, double v2, double t);

// Ruin probabilities of the optimal consumption rate for a household that
// starts at cfg.wealth. Estimates: p_before, p_between, p_at_first_death,
// p_total.
SimResult estimate_ruin_probability(const SimConfig& cfg, const RuinInputs& in);
SimResult estimate_ruin_probability(const SimConfig& cfg, const PolicySolution& sol);

// P(L > 0) and P(Lbar > 0) for the insurer's losses at issue. Estimates:
// loss_single, loss_continuous.
SimResult estimate_insurer_loss_probability(const SimConfig& cfg, const MarketParams& mkt,
                                            const HouseholdParams& hh, const QuotePair& quotes,
                                            double benefit_single, double benefit_continuous);

// Moments of the pre-death consumption process at time `probe` (deaths
// ignored) and of two disjoint increments. Estimates: mean_increment,
// variance_rate, increment_correlation, survival_to_probe.
SimResult simulate_consumption_paths(const SimConfig& cfg, const PolicySolution& sol,
                                     double probe = 5.0);

struct PathPoint {
  double t = 0.0;
  double consumption = 0.0;
  double wealth = 0.0;
};

// One controlled path on a grid of step cfg.dt up to min(second death,
// until). Path index selects the random stream.
std::vector<PathPoint> sample_path(const SimConfig& cfg, const PolicySolution& sol,
                                   std::uint64_t path_index, double until);

struct EquivalenceReport {
  std::uint64_t paths = 0;
  double max_consumption_gap = 0.0;
  double max_wealth_gap = 0.0;
  double premium_identity_gap = 0.0;  // |r H D - h Dbar| / (r H D)
  double benefit_identity_gap = 0.0;  // |(1 - H) D - Dbar| / Dbar
};

// Drives both schemes with the same Brownian path and death times on a grid
// of step cfg.dt and records the largest pathwise gaps.
EquivalenceReport verify_consumption_equivalence(const SimConfig& cfg, const MarketParams& mkt,
                                                 const HouseholdParams& hh,
                                                 const QuotePair& quotes);

}  // namespace lifeins
