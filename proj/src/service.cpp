/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "service.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "config.hpp"
#include "lifeins/montecarlo.hpp"
#include "lifeins/policy.hpp"
#include "lifeins/ruin.hpp"

namespace lifeins::service {

namespace {

using config::Json;
using config::Scenario;

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigInvalid, field + ": " + what, field);
}

Json money(double units) { return {{"units", units}, {"dollars", to_dollars(units)}}; }

// JSON has no infinity; unbounded values are written as null.
Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct Household {
  MarketParams mkt;
  HouseholdParams hh;
  explicit Household(const Scenario& s) : mkt(s.market), hh(s.household) {}
};

Json envelope(const Scenario& s) {
  Json fields = Json::object();
  for (const char* key : {"r", "mu", "sigma", "lambda_x", "lambda_y", "income_x", "income_y",
                          "alpha", "premium"}) {
    fields[key] = "ok";
  }
  if (s.wealth) fields["wealth"] = "ok";
  return {{"schema", "v1"},
          {"inputs", config::to_json(s)},
          {"validation", {{"ok", true}, {"fields", fields}}}};
}

Json quote_json(const PremiumQuote& q) {
  return {{"scheme", to_string(q.scheme)},
          {"loading", q.loading},
          {"rate", q.rate},
          {"loss_probability", q.loss_probability}};
}

Json policy_json(const PolicySolution& sol, std::optional<Pricing> pricing) {
  const double r = sol.market.r();
  const double a = sol.household.alpha();
  Json after = Json::object();
  for (Survivor sv : {Survivor::X, Survivor::Y}) {
    after[std::string(to_string(sv))] = {
        {"per_unit_wealth", r},
        {"constant", money(consumption_rate(sol, 0.0, Phase::AfterFirstDeath, sv))}};
  }
  Json out = {
      {"scheme", to_string(sol.quote.scheme)},
      {"benefit", money(sol.benefit)},
      {"quote", quote_json(sol.quote)},
      {"risky_allocation", money(sol.risky_allocation)},
      {"log_k", sol.coefficient.log_k},
      {"k_residual", sol.coefficient.residual},
      {"consumption",
       {{"before_first_death",
         {{"per_unit_wealth", r}, {"constant", money(-sol.coefficient.log_k / a)}}},
        {"at_purchase", {{"per_unit_wealth", sol.c0_slope}, {"constant", money(sol.c0_intercept)}}},
        {"after_first_death", after}}},
      {"jump_x", money(sol.jump_x)},
      {"jump_y", money(sol.jump_y)},
      {"wealth_drift", money(wealth_drift(sol))},
      {"wealth_drift_reduced", nullptr},
      {"alpha_threshold", nullptr},
  };
  if (sol.benefit > 0.0) out["wealth_drift_reduced"] = money(pre_death_drift(sol).reduced);
  if (pricing) {
    out["alpha_threshold"] =
        finite_or_null(alpha_threshold(sol.market, sol.household, *pricing, sol.quote.scheme));
  }
  return out;
}

Json ruin_inputs_json(const RuinInputs& in) {
  return {{"c0", money(in.c0)},         {"delta", money(in.delta)},
          {"jump_x", money(in.jump_x)}, {"jump_y", money(in.jump_y)},
          {"lambda_x", in.lambda_x},    {"lambda_y", in.lambda_y},
          {"m", in.m},                  {"r", in.r},
          {"alpha", in.alpha}};
}

Json ruin_json(const RuinReport& rep, const RuinInputs& in) {
  return {{"p_before", rep.p_before},
          {"p_between", rep.p_between},
          {"p_at_first_death", rep.p_at_first_death},
          {"p_total", rep.p_total},
          {"case", rep.case_label},
          {"subcase", std::string(1, rep.subcase)},
          {"large_jump_survivor", to_string(rep.large_jump_survivor)},
          {"inputs", ruin_inputs_json(in)}};
}

std::optional<Pricing> optional_pricing(const Scenario& s) {
  if (s.premium.kind == config::PremiumSpec::Kind::Rate) return std::nullopt;
  return config::pricing_for(s);
}

double require_wealth(const Scenario& s) {
  if (!s.wealth) invalid("wealth", "missing");
  if (!std::isfinite(*s.wealth)) invalid("wealth", "must be finite");
  return *s.wealth;
}

std::optional<bool> optional_bool(const Json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_boolean()) invalid(path + "." + key, "must be true or false");
  return it->get<bool>();
}

std::optional<long long> optional_integer(const Json& obj, const std::string& key,
                                          const std::string& path) {
  const std::optional<double> v = config::optional_number(obj, key, path);
  if (!v) return std::nullopt;
  if (std::floor(*v) != *v || std::abs(*v) > 9e15) invalid(path + "." + key, "must be an integer");
  return static_cast<long long>(*v);
}

const Json& block(const Json& doc, const std::string& key, bool required) {
  static const Json empty = Json::object();
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) {
    if (required) invalid(key, "missing");
    return empty;
  }
  if (!it->is_object()) invalid(key, "must be an object");
  return *it;
}

Json solve(const Json& doc) {
  const Scenario s = config::scenario_from_json(doc);
  const Household h(s);
  Json out = envelope(s);
  out["market"] = {{"m", h.mkt.m()},
                   {"total_hazard", h.hh.total_hazard()},
                   {"joint_life_insurance_apv", joint_life_insurance_apv(h.mkt, h.hh)},
                   {"max_loss_probability", max_loss_probability(h.mkt, h.hh)},
                   {"risky_allocation", money(investment_rate(h.mkt, h.hh))}};
  const std::optional<Pricing> pricing = optional_pricing(s);
  for (Scheme scheme : s.schemes()) {
    const std::string name(to_string(scheme));
    const PremiumQuote q = config::quote_for(s, h.mkt, h.hh, scheme);
    const PolicySolution sol = solve_policy(h.mkt, h.hh, q);
    out["quotes"][name] = quote_json(q);
    out["policies"][name] = policy_json(sol, pricing);
    if (s.wealth) {
      const RuinInputs in = ruin_inputs(sol, *s.wealth);
      if (in.c0 > 0.0) {
        out["ruin"][name] = ruin_json(prob_ruin_total(in), in);
      } else {
        out["ruin"][name] = {{"error", "initial consumption is not positive"},
                             {"inputs", ruin_inputs_json(in)}};
      }
    }
  }
  return out;
}

Json calibrate(const Json& doc) {
  const Scenario s = config::scenario_from_json(doc);
  const Household h(s);
  const QuotePair qp = config::pricing_for(s).quotes(h.mkt, h.hh);
  const double d = optimal_benefit(h.mkt, h.hh, qp.single);
  const double db = optimal_benefit(h.mkt, h.hh, qp.continuous);
  Json out = envelope(s);
  out["max_loss_probability"] = max_loss_probability(h.mkt, h.hh);
  out["quotes"] = {{"single", quote_json(qp.single)}, {"continuous", quote_json(qp.continuous)}};
  out["benefits"] = {{"single", money(d)}, {"continuous", money(db)}};
  const double r = h.mkt.r();
  out["identities"] = {
      {"premium_flow_gap", std::abs(r * qp.single.rate * d - qp.continuous.rate * db)},
      {"benefit_gap", std::abs((1.0 - qp.single.rate) * d - db)},
      {"rate_gap", std::abs(qp.continuous.rate - r * qp.single.rate / (1.0 - qp.single.rate))}};
  return out;
}

Json ruin(const Json& doc) {
  const Scenario s = config::scenario_from_json(doc);
  const double w = require_wealth(s);
  const Household h(s);
  Json out = envelope(s);
  for (Scheme scheme : s.schemes()) {
    const std::string name(to_string(scheme));
    const PolicySolution sol = solve_policy(h.mkt, h.hh, config::quote_for(s, h.mkt, h.hh, scheme));
    const RuinInputs in = ruin_inputs(sol, w);
    out["ruin"][name] = ruin_json(prob_ruin_total(in), in);
  }
  return out;
}

Json sweep(const Json& doc) {
  const Scenario s = config::scenario_from_json(doc, {"sweep"});
  const Json& b = block(doc, "sweep", true);
  config::reject_unknown(b, {"parameter", "from", "to", "steps", "values", "workers"}, "sweep");
  if (!b.contains("parameter") || !b["parameter"].is_string()) {
    invalid("sweep.parameter", "missing or not a string");
  }
  const auto param = sweep_parameter_from_string(b["parameter"].get<std::string>());
  if (!param) {
    invalid("sweep.parameter",
            "must be one of theta, alpha, income_x, income_y, lambda_x, lambda_y");
  }
  std::vector<double> grid;
  if (b.contains("values")) {
    if (b.contains("from") || b.contains("to") || b.contains("steps")) {
      invalid("sweep", "give either values or from/to/steps");
    }
    if (!b["values"].is_array()) invalid("sweep.values", "must be an array of numbers");
    if (b["values"].size() > static_cast<std::size_t>(kMaxSweepPoints)) {
      throw Error(ErrorCode::InvalidParameter,
                  "sweep.values: at most " + std::to_string(kMaxSweepPoints) + " points",
                  "sweep.values");
    }
    for (const Json& v : b["values"]) {
      if (!v.is_number()) invalid("sweep.values", "must be an array of numbers");
      grid.push_back(v.get<double>());
    }
  } else {
    const double from = config::number_at(b, "from", "sweep");
    const double to = config::number_at(b, "to", "sweep");
    const std::optional<long long> steps = optional_integer(b, "steps", "sweep");
    if (!steps) invalid("sweep.steps", "missing");
    if (*steps < 1 || *steps + 1 > kMaxSweepPoints) {
      throw Error(ErrorCode::InvalidParameter,
                  "sweep.steps: must lie in [1, " + std::to_string(kMaxSweepPoints - 1) + "]",
                  "sweep.steps");
    }
    grid = linear_grid(from, to, static_cast<int>(*steps));
  }
  const int workers = static_cast<int>(optional_integer(b, "workers", "sweep").value_or(1));
  if (workers < 0) invalid("sweep.workers", "must be >= 0");
  const Household h(s);
  const SweepReport rep =
      comparative_statics_sweep(h.mkt, h.hh, config::pricing_for(s), *param, grid, workers);
  Json rows = Json::array();
  for (const SweepRow& row : rep.rows) {
    rows.push_back({{"value", row.value},
                    {"benefit_single", money(row.benefit_single)},
                    {"benefit_continuous", money(row.benefit_continuous)},
                    {"jump_x", money(row.jump_x)},
                    {"jump_y", money(row.jump_y)}});
  }
  Json out = envelope(s);
  out["sweep"] = {{"parameter", to_string(rep.parameter)},
                  {"claims",
                   {{"monotone_single", to_string(rep.monotone_single)},
                    {"monotone_continuous", to_string(rep.monotone_continuous)},
                    {"convex_single", to_string(rep.convex_single)},
                    {"convex_continuous", to_string(rep.convex_continuous)},
                    {"concave_single", to_string(rep.concave_single)},
                    {"concave_continuous", to_string(rep.concave_continuous)}}},
                  {"notes", rep.notes},
                  {"rows", rows}};
  return out;
}

Json elicit(const Json& doc) {
  if (!doc.is_object()) invalid("", "document must be an object");
  config::reject_unknown(doc,
                         {"schema", "loss", "p", "willingness_to_pay", "loss_dollars",
                          "willingness_to_pay_dollars"},
                         "");
  auto amount = [&](const std::string& key) {
    const auto units = config::optional_number(doc, key, "");
    const auto dollars = config::optional_number(doc, key + "_dollars", "");
    if (units && dollars) invalid(key, "give it in units or in dollars, not both");
    if (!units && !dollars) invalid(key, "missing");
    return units ? *units : to_units(*dollars);
  };
  const double loss = amount("loss");
  const double wtp = amount("willingness_to_pay");
  const double p = config::number_at(doc, "p", "");
  const double alpha = elicit_risk_aversion(loss, p, wtp);
  return {{"schema", "v1"},
          {"inputs", {{"loss", money(loss)}, {"p", p}, {"willingness_to_pay", money(wtp)}}},
          {"expected_loss", money(p * loss)},
          {"alpha", alpha}};
}

Json verification_json(const VerificationReport& rep) {
  return {{"passed", rep.passed},
          {"tolerance", rep.tolerance},
          {"points", rep.points},
          {"worst_hjb", rep.worst_hjb},
          {"worst_gradient", rep.worst_gradient},
          {"worst_buy_region", rep.worst_buy_region},
          {"boundary_equality", rep.boundary_equality},
          {"coefficient_gap", rep.coefficient_gap},
          {"worst_fd_gap", rep.worst_fd_gap},
          {"worst_point", {{"w", rep.worst_w}, {"d", rep.worst_d}, {"kind", rep.worst_kind}}}};
}

Json verify(const Json& doc) {
  const Scenario s = config::scenario_from_json(doc, {"verify"});
  const Json& b = block(doc, "verify", false);
  config::reject_unknown(b,
                         {"tolerance", "w_min", "w_max", "w_points", "d_min", "d_max", "d_points",
                          "finite_difference"},
                         "verify");
  VerificationGrid grid;
  grid.w_min = config::optional_number(b, "w_min", "verify").value_or(grid.w_min);
  grid.w_max = config::optional_number(b, "w_max", "verify").value_or(grid.w_max);
  grid.d_min = config::optional_number(b, "d_min", "verify").value_or(grid.d_min);
  grid.d_max = config::optional_number(b, "d_max", "verify").value_or(grid.d_max);
  grid.w_points = static_cast<int>(optional_integer(b, "w_points", "verify").value_or(grid.w_points));
  grid.d_points = static_cast<int>(optional_integer(b, "d_points", "verify").value_or(grid.d_points));
  if (grid.w_points < 2 || grid.d_points < 2) invalid("verify", "grids need at least 2 points");
  if (static_cast<long long>(grid.w_points) * grid.d_points > 4000000) {
    invalid("verify", "grid is larger than 4e6 points");
  }
  const double tol = config::optional_number(b, "tolerance", "verify").value_or(1e-6);
  if (!(tol > 0.0)) invalid("verify.tolerance", "must be > 0");
  const bool fd = optional_bool(b, "finite_difference", "verify").value_or(false);
  const Household h(s);
  Json out = envelope(s);
  bool passed = true;
  for (Scheme scheme : s.schemes()) {
    const PolicySolution sol = solve_policy(h.mkt, h.hh, config::quote_for(s, h.mkt, h.hh, scheme));
    const VerificationReport rep = verify_variational_inequality(sol, grid, tol, fd);
    passed = passed && rep.passed;
    Json r = verification_json(rep);
    r["benefit"] = money(sol.benefit);
    out["verification"][std::string(to_string(scheme))] = r;
  }
  out["passed"] = passed;
  return out;
}

std::string hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json estimate_json(const Estimate& e, double exact, double slack) {
  const double gap = std::abs(e.value - exact);
  return {{"analytic", exact},
          {"monte_carlo", e.value},
          {"std_error", e.std_error},
          {"gap", gap},
          {"agrees", gap < 3.0 * e.std_error + slack}};
}

Json simulate(const Json& doc) {
  const Scenario s = config::scenario_from_json(doc, {"simulation"});
  const double w = require_wealth(s);
  const Json& b = block(doc, "simulation", false);
  config::reject_unknown(b,
                         {"paths", "dt", "seed", "horizon_cap", "bridge_correction",
                          "aggregate_steps", "workers"},
                         "simulation");
  SimConfig cfg;
  if (const auto v = optional_integer(b, "paths", "simulation")) {
    if (*v < 1) invalid("simulation.paths", "must be >= 1");
    cfg.n_paths = static_cast<std::uint64_t>(*v);
  }
  if (const auto v = optional_integer(b, "seed", "simulation")) {
    if (*v < 0) invalid("simulation.seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(*v);
  }
  cfg.dt = config::optional_number(b, "dt", "simulation").value_or(cfg.dt);
  cfg.horizon_cap = config::optional_number(b, "horizon_cap", "simulation").value_or(cfg.horizon_cap);
  cfg.bridge_correction =
      optional_bool(b, "bridge_correction", "simulation").value_or(cfg.bridge_correction);
  cfg.aggregate_steps =
      optional_bool(b, "aggregate_steps", "simulation").value_or(cfg.aggregate_steps);
  cfg.workers = static_cast<int>(optional_integer(b, "workers", "simulation").value_or(cfg.workers));
  cfg.wealth = w;
  cfg.validate();

  const Household h(s);
  Json out = envelope(s);
  out["simulation"] = {{"paths", cfg.n_paths},
                       {"dt", cfg.dt},
                       {"seed", cfg.seed},
                       {"horizon_cap", cfg.horizon_cap},
                       {"bridge_correction", cfg.bridge_correction},
                       {"aggregate_steps", cfg.aggregate_steps},
                       {"rng_fingerprint", hex(rng_fingerprint(cfg.seed))}};
  constexpr double kSlack = 0.002;
  std::map<Scheme, double> benefits;
  for (Scheme scheme : s.schemes()) {
    const PolicySolution sol = solve_policy(h.mkt, h.hh, config::quote_for(s, h.mkt, h.hh, scheme));
    benefits[scheme] = sol.benefit;
    const RuinInputs in = ruin_inputs(sol, w);
    const RuinReport rep = prob_ruin_total(in);
    const SimResult mc = estimate_ruin_probability(cfg, in);
    out["ruin"][std::string(to_string(scheme))] = {
        {"case", rep.case_label},
        {"subcase", std::string(1, rep.subcase)},
        {"p_before", estimate_json(mc.get("p_before"), rep.p_before, kSlack)},
        {"p_between", estimate_json(mc.get("p_between"), rep.p_between, kSlack)},
        {"p_at_first_death", estimate_json(mc.get("p_at_first_death"), rep.p_at_first_death, kSlack)},
        {"p_total", estimate_json(mc.get("p_total"), rep.p_total, kSlack)},
        {"n_effective", mc.n_effective},
        {"truncated", mc.truncated},
        {"inputs", ruin_inputs_json(in)}};
  }
  if (const std::optional<Pricing> pricing = optional_pricing(s)) {
    const QuotePair qp = pricing->quotes(h.mkt, h.hh);
    const double d = benefits.count(Scheme::Single) ? benefits[Scheme::Single]
                                                    : optimal_benefit(h.mkt, h.hh, qp.single);
    const double db = benefits.count(Scheme::Continuous)
                          ? benefits[Scheme::Continuous]
                          : optimal_benefit(h.mkt, h.hh, qp.continuous);
    const SimResult mc = estimate_insurer_loss_probability(cfg, h.mkt, h.hh, qp, d, db);
    out["insurer_loss"] = {
        {"single", estimate_json(mc.get("loss_single"), qp.single.loss_probability, 0.0)},
        {"continuous", estimate_json(mc.get("loss_continuous"), qp.continuous.loss_probability, 0.0)}};
  }
  return out;
}

Json error_body(const Error& e) {
  return {{"schema", "v1"},
          {"error", {{"code", to_string(e.code())}, {"message", e.what()}, {"field", e.field()}}}};
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid: return 400;
    case ErrorCode::NumericalFailure: return 500;
    default: return 422;
  }
}

bool served_over_http(std::string_view endpoint) {
  return endpoint == "solve" || endpoint == "elicit" || endpoint == "ruin" || endpoint == "sweep";
}

Reply handle(std::string_view endpoint, std::string_view body) {
  static const std::map<std::string_view, std::function<Json(const Json&)>> handlers = {
      {"solve", solve},   {"calibrate", calibrate}, {"ruin", ruin},         {"sweep", sweep},
      {"elicit", elicit}, {"verify", verify},       {"simulate", simulate},
  };
  const auto it = handlers.find(endpoint);
  if (it == handlers.end()) {
    const Json err = {{"schema", "v1"},
                      {"error",
                       {{"code", "NotFound"},
                        {"message", "unknown endpoint " + std::string(endpoint)},
                        {"field", ""}}}};
    return {404, err.dump()};
  }
  try {
    const Json doc = config::parse(body, config::Format::Json);
    return {200, it->second(doc).dump()};
  } catch (const Error& e) {
    return {http_status(e.code()), error_body(e).dump()};
  } catch (const Json::exception& e) {
    return {400, error_body(Error(ErrorCode::ConfigInvalid, e.what(), "")).dump()};
  } catch (const std::exception& e) {
    const Json err = {{"schema", "v1"},
                      {"error", {{"code", "Internal"}, {"message", e.what()}, {"field", ""}}}};
    return {500, err.dump()};
  }
}

}  // namespace lifeins::service
