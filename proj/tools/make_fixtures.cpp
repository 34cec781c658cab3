/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
// Writes random ruin fixtures: a household, a premium, a wealth level chosen
// so that ruin is not negligible, the closed-form probabilities and a seeded
// Monte Carlo estimate. The acceptance suite replays them.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "lifeins/montecarlo.hpp"
#include "lifeins/policy.hpp"
#include "lifeins/ruin.hpp"

using namespace lifeins;
using Json = nlohmann::json;

namespace {

Json report_json(const RuinReport& r) {
  return {{"p_before", r.p_before},
          {"p_between", r.p_between},
          {"p_at_first_death", r.p_at_first_death},
          {"p_total", r.p_total},
          {"case", r.case_label},
          {"subcase", std::string(1, r.subcase)}};
}

Json estimate_json(const SimResult& s) {
  Json out = Json::object();
  for (const Estimate& e : s.estimates) out[e.name] = {{"value", e.value}, {"std_error", e.std_error}};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate ruin fixtures"};
  std::string out_dir = "fixtures/ruin";
  int count = 20;
  std::uint64_t seed = 20261016;
  std::uint64_t paths = 1000000;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--count", count, "number of fixtures")->check(CLI::Range(1, 1000));
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--paths", paths, "Monte Carlo paths per fixture")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<std::string, int> per_case;
  int written = 0;
  for (int attempt = 0; written < count && attempt < 100000; ++attempt) {
    const double r = 0.01 + 0.05 * u(eng);
    const MarketParams mkt({r, r + 0.01 + 0.08 * u(eng), 0.1 + 0.3 * u(eng)});
    const HouseholdParams hh({0.01 + 0.15 * u(eng), 0.01 + 0.15 * u(eng), 3.0 * u(eng),
                              3.0 * u(eng), 0.3 + 3.0 * u(eng)});
    const Scheme scheme = u(eng) < 0.5 ? Scheme::Single : Scheme::Continuous;
    const double q = max_loss_probability(mkt, hh) * (0.2 + 0.8 * u(eng));
    std::optional<PolicySolution> found;
    try {
      const QuotePair quotes = calibrate_to_loss_probability(mkt, hh, q);
      found = solve_policy(mkt, hh, scheme == Scheme::Single ? quotes.single : quotes.continuous);
    } catch (const Error&) {
      continue;
    }
    const PolicySolution& sol = *found;
    // Aim c0 at a small positive level; wealth follows from the affine rule.
    const double c0 = 0.05 + 1.5 * u(eng);
    const double wealth = (c0 - sol.c0_intercept) / sol.c0_slope;
    const RuinInputs in = ruin_inputs(sol, wealth);
    RuinReport rep;
    try {
      rep = prob_ruin_total(in);
    } catch (const Error&) {
      continue;
    }
    if (rep.p_total < 0.005 || rep.p_total > 0.8) continue;
    const std::string key = rep.case_label + rep.subcase;
    if (per_case[key] >= 4) continue;
    ++per_case[key];

    SimConfig cfg;
    cfg.n_paths = paths;
    cfg.seed = seed + 1000 * static_cast<std::uint64_t>(written + 1);
    cfg.workers = 0;
    const SimResult mc = estimate_ruin_probability(cfg, in);

    char name[32];
    std::snprintf(name, sizeof name, "ruin_%02d", written + 1);
    const Json doc = {
        {"name", name},
        {"household",
         {{"r", mkt.r()}, {"mu", mkt.mu()}, {"sigma", mkt.sigma()}, {"lambda_x", hh.lambda_x()},
          {"lambda_y", hh.lambda_y()}, {"income_x", hh.income_x()}, {"income_y", hh.income_y()},
          {"alpha", hh.alpha()}}},
        {"premium", {{"scheme", std::string(to_string(scheme))}, {"loss_probability", q}}},
        {"wealth", wealth},
        {"ruin_inputs",
         {{"c0", in.c0}, {"delta", in.delta}, {"jump_x", in.jump_x}, {"jump_y", in.jump_y},
          {"lambda_x", in.lambda_x}, {"lambda_y", in.lambda_y}, {"m", in.m}, {"r", in.r},
          {"alpha", in.alpha}}},
        {"analytic", report_json(rep)},
        {"simulation",
         {{"paths", cfg.n_paths}, {"dt", cfg.dt}, {"seed", cfg.seed},
          {"horizon_cap", cfg.horizon_cap}, {"bridge_correction", cfg.bridge_correction}}},
        {"monte_carlo", estimate_json(mc)}};
    std::ofstream(std::filesystem::path(out_dir) / (std::string(name) + ".json")) << doc.dump(2) << "\n";
    std::printf("%s case %s p_total %.6f mc %.6f (se %.2g)\n", name, key.c_str(), rep.p_total,
                mc.get("p_total").value, mc.get("p_total").std_error);
    ++written;
  }
  return written == count ? 0 : 1;
}
