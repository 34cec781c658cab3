/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lifeins/lifeins.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "config.hpp"
#include "lifeins/policy.hpp"
#include "lifeins/ruin.hpp"
#include "server.hpp"
#include "service.hpp"

struct lifeins_model {
  lifeins::MarketParams market;
  lifeins::HouseholdParams household;
};

struct lifeins_server {
  lifeins::server::Server server;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_field;

lifeins_status status_of(lifeins::ErrorCode code) {
  using lifeins::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidParameter: return LIFEINS_INVALID_PARAMETER;
    case ErrorCode::PremiumNotViable: return LIFEINS_PREMIUM_NOT_VIABLE;
    case ErrorCode::LossProbabilityTooHigh: return LIFEINS_LOSS_PROBABILITY_TOO_HIGH;
    case ErrorCode::NoSolution: return LIFEINS_NO_SOLUTION;
    case ErrorCode::InteriorOptimumRequired: return LIFEINS_INTERIOR_OPTIMUM_REQUIRED;
    case ErrorCode::SingularParameter: return LIFEINS_SINGULAR_PARAMETER;
    case ErrorCode::VerificationFailed: return LIFEINS_VERIFICATION_FAILED;
    case ErrorCode::ConfigInvalid: return LIFEINS_CONFIG_INVALID;
    case ErrorCode::NumericalFailure: return LIFEINS_NUMERICAL_FAILURE;
  }
  return LIFEINS_INTERNAL;
}

lifeins_status fail(lifeins_status s, std::string message, std::string field = {}) {
  last_error = std::move(message);
  last_field = std::move(field);
  return s;
}

template <typename F>
lifeins_status guarded(F&& f) {
  try {
    last_error.clear();
    last_field.clear();
    f();
    return LIFEINS_OK;
  } catch (const lifeins::Error& e) {
    return fail(status_of(e.code()), e.what(), e.field());
  } catch (const std::bad_alloc&) {
    return fail(LIFEINS_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LIFEINS_INTERNAL, e.what());
  }
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

lifeins::Scheme scheme_of(lifeins_scheme s) {
  if (s != LIFEINS_SINGLE && s != LIFEINS_CONTINUOUS) {
    throw lifeins::Error(lifeins::ErrorCode::InvalidParameter, "unknown scheme", "scheme");
  }
  return s == LIFEINS_SINGLE ? lifeins::Scheme::Single : lifeins::Scheme::Continuous;
}

// Quote for an explicit premium rate, checked like any other quote.
lifeins::PremiumQuote quote_for_rate(const lifeins_model& m, lifeins_scheme scheme, double rate) {
  lifeins::config::Scenario s;
  s.premium.kind = lifeins::config::PremiumSpec::Kind::Rate;
  s.premium.value = rate;
  return lifeins::config::quote_for(s, m.market, m.household, scheme_of(scheme));
}

#define LIFEINS_REQUIRE(ptr)                                                  \
  do {                                                                        \
    if (!(ptr)) return fail(LIFEINS_INVALID_PARAMETER, #ptr " is null", #ptr); \
  } while (0)

}  // namespace

extern "C" {

const char* lifeins_version(void) { return LIFEINS_VERSION; }

const char* lifeins_status_name(lifeins_status status) {
  switch (status) {
    case LIFEINS_OK: return "Ok";
    case LIFEINS_INVALID_PARAMETER: return "InvalidParameter";
    case LIFEINS_PREMIUM_NOT_VIABLE: return "PremiumNotViable";
    case LIFEINS_LOSS_PROBABILITY_TOO_HIGH: return "LossProbabilityTooHigh";
    case LIFEINS_NO_SOLUTION: return "NoSolution";
    case LIFEINS_INTERIOR_OPTIMUM_REQUIRED: return "InteriorOptimumRequired";
    case LIFEINS_SINGULAR_PARAMETER: return "SingularParameter";
    case LIFEINS_VERIFICATION_FAILED: return "VerificationFailed";
    case LIFEINS_CONFIG_INVALID: return "ConfigInvalid";
    case LIFEINS_NUMERICAL_FAILURE: return "NumericalFailure";
    case LIFEINS_NOT_FOUND: return "NotFound";
    case LIFEINS_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* lifeins_last_error(void) { return last_error.c_str(); }
const char* lifeins_last_error_field(void) { return last_field.c_str(); }

lifeins_status lifeins_model_create(const lifeins_params* params, lifeins_model** out) {
  LIFEINS_REQUIRE(params);
  LIFEINS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const lifeins_params& p = *params;
    *out = new lifeins_model{lifeins::MarketParams({p.r, p.mu, p.sigma}),
                             lifeins::HouseholdParams(
                                 {p.lambda_x, p.lambda_y, p.income_x, p.income_y, p.alpha})};
  });
}

void lifeins_model_destroy(lifeins_model* model) { delete model; }

lifeins_status lifeins_max_loss_probability(const lifeins_model* model, double* out) {
  LIFEINS_REQUIRE(model);
  LIFEINS_REQUIRE(out);
  return guarded([&] { *out = lifeins::max_loss_probability(model->market, model->household); });
}

lifeins_status lifeins_rate_for_loading(const lifeins_model* model, lifeins_scheme scheme,
                                        double loading, double* rate) {
  LIFEINS_REQUIRE(model);
  LIFEINS_REQUIRE(rate);
  return guarded([&] {
    *rate = lifeins::Pricing::loadings(loading, loading)
                .quote(model->market, model->household, scheme_of(scheme))
                .rate;
  });
}

lifeins_status lifeins_rate_for_loss_probability(const lifeins_model* model, lifeins_scheme scheme,
                                                 double q, double* rate) {
  LIFEINS_REQUIRE(model);
  LIFEINS_REQUIRE(rate);
  return guarded([&] {
    *rate = lifeins::calibrate_to_loss_probability(model->market, model->household, q,
                                                   scheme_of(scheme))
                .rate;
  });
}

lifeins_status lifeins_solve(const lifeins_model* model, lifeins_scheme scheme, double rate,
                             lifeins_policy* out) {
  LIFEINS_REQUIRE(model);
  LIFEINS_REQUIRE(out);
  return guarded([&] {
    const lifeins::PolicySolution sol =
        lifeins::solve_policy(model->market, model->household, quote_for_rate(*model, scheme, rate));
    *out = lifeins_policy{sol.benefit,           sol.quote.rate, sol.quote.loading,
                          sol.quote.loss_probability, sol.risky_allocation,
                          sol.coefficient.log_k, sol.jump_x,     sol.jump_y,
                          sol.c0_slope,          sol.c0_intercept, lifeins::wealth_drift(sol)};
  });
}

lifeins_status lifeins_ruin_probability(const lifeins_model* model, lifeins_scheme scheme,
                                        double rate, double wealth, lifeins_ruin* out) {
  LIFEINS_REQUIRE(model);
  LIFEINS_REQUIRE(out);
  return guarded([&] {
    const lifeins::PolicySolution sol =
        lifeins::solve_policy(model->market, model->household, quote_for_rate(*model, scheme, rate));
    const lifeins::RuinReport rep = lifeins::prob_ruin_total(lifeins::ruin_inputs(sol, wealth));
    lifeins_ruin r{};
    r.p_before = rep.p_before;
    r.p_between = rep.p_between;
    r.p_at_first_death = rep.p_at_first_death;
    r.p_total = rep.p_total;
    std::strncpy(r.case_label, rep.case_label.c_str(), sizeof r.case_label - 1);
    r.subcase = rep.subcase;
    *out = r;
  });
}

lifeins_status lifeins_elicit_alpha(double loss, double p, double willingness_to_pay,
                                    double* alpha) {
  LIFEINS_REQUIRE(alpha);
  return guarded([&] { *alpha = lifeins::elicit_risk_aversion(loss, p, willingness_to_pay); });
}

lifeins_status lifeins_request(const char* endpoint, const char* body, int* http_status,
                               char** response) {
  LIFEINS_REQUIRE(endpoint);
  LIFEINS_REQUIRE(body);
  LIFEINS_REQUIRE(response);
  *response = nullptr;
  lifeins::service::Reply reply;
  const lifeins_status st = guarded([&] {
    reply = lifeins::service::handle(endpoint, body);
    *response = copy_out(reply.body);
    if (!*response) throw std::bad_alloc();
  });
  if (st != LIFEINS_OK) return st;
  if (http_status) *http_status = reply.status;
  if (reply.status == 200) return LIFEINS_OK;
  // Error replies carry the code name; map it back to a status.
  const auto doc = nlohmann::json::parse(reply.body);
  const std::string code = doc["error"]["code"].get<std::string>();
  lifeins_status out = LIFEINS_INTERNAL;
  for (int s = LIFEINS_INVALID_PARAMETER; s <= LIFEINS_INTERNAL; ++s) {
    if (code == lifeins_status_name(static_cast<lifeins_status>(s))) {
      out = static_cast<lifeins_status>(s);
    }
  }
  return fail(out, doc["error"]["message"].get<std::string>(),
              doc["error"]["field"].get<std::string>());
}

lifeins_status lifeins_config_load(const char* path, char** json) {
  LIFEINS_REQUIRE(path);
  LIFEINS_REQUIRE(json);
  *json = nullptr;
  return guarded([&] {
    *json = copy_out(lifeins::config::load_file(path).dump());
    if (!*json) throw std::bad_alloc();
  });
}

void lifeins_free(char* text) { std::free(text); }

lifeins_status lifeins_server_create(const char* host, int port, const char* cors_origin,
                                     lifeins_server** out) {
  LIFEINS_REQUIRE(out);
  *out = nullptr;
  if (port < 0 || port > 65535) return fail(LIFEINS_CONFIG_INVALID, "port out of range", "port");
  return guarded([&] {
    lifeins::server::Options opt;
    if (host && *host) opt.host = host;
    opt.port = port;
    if (cors_origin && *cors_origin) opt.cors_origins.push_back(cors_origin);
    auto* s = new lifeins_server{lifeins::server::Server(std::move(opt))};
    try {
      s->server.bind();
    } catch (...) {
      delete s;
      throw;
    }
    *out = s;
  });
}

int lifeins_server_port(const lifeins_server* server) { return server ? server->server.port() : -1; }

lifeins_status lifeins_server_run(lifeins_server* server) {
  LIFEINS_REQUIRE(server);
  return guarded([&] { server->server.run(); });
}

void lifeins_server_stop(lifeins_server* server) {
  if (server) server->server.stop();
}

void lifeins_server_destroy(lifeins_server* server) { delete server; }

}  // extern "C"
