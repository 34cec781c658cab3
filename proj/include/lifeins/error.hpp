/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lifeins {

enum class ErrorCode {
  InvalidParameter,
  PremiumNotViable,
  LossProbabilityTooHigh,
  NoSolution,
  InteriorOptimumRequired,
  SingularParameter,
  VerificationFailed,
  ConfigInvalid,
  NumericalFailure,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the core carries a code and, when it can be
// attributed to one input, the name of that input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string field = {})
      : std::runtime_error(std::move(message)), code_(code), field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace lifeins
