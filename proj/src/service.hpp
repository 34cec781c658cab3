/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <string>
#include <string_view>

#include "lifeins/error.hpp"

namespace lifeins::service {

struct Reply {
  int status = 200;
  std::string body;
};

// Handles one JSON request. Endpoints: solve, calibrate, elicit, ruin, sweep,
// verify, simulate. Every body carries "schema": "v1". Handlers keep no
// state, so equal requests give byte-identical replies.
Reply handle(std::string_view endpoint, std::string_view body);

// Endpoints served over HTTP. Simulation and verification run long and stay
// on the command line.
bool served_over_http(std::string_view endpoint);

int http_status(ErrorCode code);

// Upper limit on sweep grid points per request.
inline constexpr int kMaxSweepPoints = 10000;

}  // namespace lifeins::service
