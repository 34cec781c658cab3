/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#ifndef LIFEINS_LIFEINS_H
#define LIFEINS_LIFEINS_H

/* C interface to liblifeins. Amounts are in units of $50,000; rates are
 * per year. Every call returns a status; on failure lifeins_last_error()
 * describes it for the calling thread. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LIFEINS_API __declspec(dllexport)
#else
#define LIFEINS_API __attribute__((visibility("default")))
#endif

typedef enum lifeins_status {
  LIFEINS_OK = 0,
  LIFEINS_INVALID_PARAMETER = 1,
  LIFEINS_PREMIUM_NOT_VIABLE = 2,
  LIFEINS_LOSS_PROBABILITY_TOO_HIGH = 3,
  LIFEINS_NO_SOLUTION = 4,
  LIFEINS_INTERIOR_OPTIMUM_REQUIRED = 5,
  LIFEINS_SINGULAR_PARAMETER = 6,
  LIFEINS_VERIFICATION_FAILED = 7,
  LIFEINS_CONFIG_INVALID = 8,
  LIFEINS_NUMERICAL_FAILURE = 9,
  LIFEINS_NOT_FOUND = 10,
  LIFEINS_INTERNAL = 11
} lifeins_status;

typedef enum lifeins_scheme { LIFEINS_SINGLE = 0, LIFEINS_CONTINUOUS = 1 } lifeins_scheme;

typedef struct lifeins_params {
  double r;
  double mu;
  double sigma;
  double lambda_x;
  double lambda_y;
  double income_x;
  double income_y;
  double alpha;
} lifeins_params;

/* Validated market and household. */
typedef struct lifeins_model lifeins_model;

typedef struct lifeins_policy {
  double benefit;
  double premium_rate;
  double loading;
  double loss_probability;
  double risky_allocation;
  double log_k;
  double jump_x;
  double jump_y;
  double c0_slope; /* consumption right after purchase: c0_slope * w + c0_intercept */
  double c0_intercept;
  double wealth_drift;
} lifeins_policy;

typedef struct lifeins_ruin {
  double p_before;
  double p_between; /* includes p_at_first_death */
  double p_at_first_death;
  double p_total;
  char case_label[4];
  char subcase;
} lifeins_ruin;

LIFEINS_API const char* lifeins_version(void);
LIFEINS_API const char* lifeins_status_name(lifeins_status status);
LIFEINS_API const char* lifeins_last_error(void);
LIFEINS_API const char* lifeins_last_error_field(void);

LIFEINS_API lifeins_status lifeins_model_create(const lifeins_params* params, lifeins_model** out);
LIFEINS_API void lifeins_model_destroy(lifeins_model* model);

LIFEINS_API lifeins_status lifeins_max_loss_probability(const lifeins_model* model, double* out);
/* Premium rate (H or h) for a loading, or for a target loss probability. */
LIFEINS_API lifeins_status lifeins_rate_for_loading(const lifeins_model* model,
                                                    lifeins_scheme scheme, double loading,
                                                    double* rate);
LIFEINS_API lifeins_status lifeins_rate_for_loss_probability(const lifeins_model* model,
                                                             lifeins_scheme scheme, double q,
                                                             double* rate);
LIFEINS_API lifeins_status lifeins_solve(const lifeins_model* model, lifeins_scheme scheme,
                                         double rate, lifeins_policy* out);
LIFEINS_API lifeins_status lifeins_ruin_probability(const lifeins_model* model,
                                                    lifeins_scheme scheme, double rate,
                                                    double wealth, lifeins_ruin* out);
LIFEINS_API lifeins_status lifeins_elicit_alpha(double loss, double p, double willingness_to_pay,
                                                double* alpha);

/* JSON requests: endpoint is one of solve, calibrate, elicit, ruin, sweep,
 * verify, simulate. *response is always set (free with lifeins_free) and
 * *http_status receives the matching HTTP status. */
LIFEINS_API lifeins_status lifeins_request(const char* endpoint, const char* body,
                                           int* http_status, char** response);
/* Reads a config file (.toml or JSON) and returns it as JSON text. */
LIFEINS_API lifeins_status lifeins_config_load(const char* path, char** json);
LIFEINS_API void lifeins_free(char* text);

/* HTTP service on host:port (port 0 picks a free one). */
typedef struct lifeins_server lifeins_server;
LIFEINS_API lifeins_status lifeins_server_create(const char* host, int port,
                                                 const char* cors_origin, lifeins_server** out);
LIFEINS_API int lifeins_server_port(const lifeins_server* server);
/* Blocks until lifeins_server_stop is called from another thread. */
LIFEINS_API lifeins_status lifeins_server_run(lifeins_server* server);
LIFEINS_API void lifeins_server_stop(lifeins_server* server);
LIFEINS_API void lifeins_server_destroy(lifeins_server* server);

#ifdef __cplusplus
}
#endif

#endif /* LIFEINS_LIFEINS_H */
