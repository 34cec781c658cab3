/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lifeins/model.hpp"
#include "lifeins/policy.hpp"

namespace lifeins::config {

using Json = nlohmann::json;

enum class Format { Json, Toml };

// Format from the file extension: .toml is TOML, anything else JSON.
Format format_for_path(std::string_view path);

// Parses a config document. Syntax errors throw ConfigInvalid naming the
// line. The TOML reader covers the subset used by config files: tables,
// key = value pairs, strings, numbers, booleans and flat arrays.
Json parse(std::string_view text, Format format);
Json load_file(const std::string& path);

struct PremiumSpec {
  enum class Kind { Loading, LossProbability, Rate };
  Kind kind = Kind::Loading;
  double value = 0.0;
  std::optional<Scheme> scheme;  // empty means both schemes
};

struct Scenario {
  MarketInputs market;
  HouseholdInputs household;
  PremiumSpec premium;
  std::optional<double> wealth;

  std::vector<Scheme> schemes() const;
};

// Reads the household document. Structural problems (missing or unknown
// keys, wrong types) throw ConfigInvalid with the dotted field path; values
// are checked later by the model types. `extra` lists the additional
// top-level blocks a caller accepts.
Scenario scenario_from_json(const Json& doc, const std::vector<std::string>& extra = {});
Json to_json(const Scenario& s);

// Quote for one scheme under the scenario's premium block.
PremiumQuote quote_for(const Scenario& s, const MarketParams& mkt, const HouseholdParams& hh,
                       Scheme scheme);
// Pricing rule for sweeps and thresholds; fails for an explicit rate.
Pricing pricing_for(const Scenario& s);

// Typed readers for caller-specific blocks.
double number_at(const Json& obj, const std::string& key, const std::string& path);
std::optional<double> optional_number(const Json& obj, const std::string& key,
                                      const std::string& path);
void reject_unknown(const Json& obj, const std::vector<std::string>& allowed,
                    const std::string& path);

}  // namespace lifeins::config
