/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <thread>

#include "config.hpp"
#include "doctest.h"
#include "service.hpp"

using namespace lifeins;
using config::Json;

namespace {

const char* kToml = R"(# comment line
r = 0.02
mu = 0.06      # trailing comment
sigma = 2e-1
lambda_x = 0.04
lambda_y = 0.03
income_x = 2
income_y = 1.5
alpha = 2.0

[premium]
scheme = "both"
loading = 0
)";

Json reference_doc() {
  return {{"r", 0.02},        {"mu", 0.06},       {"sigma", 0.2},   {"lambda_x", 0.04},
          {"lambda_y", 0.03}, {"income_x", 2.0},  {"income_y", 1.5}, {"alpha", 2.0},
          {"premium", {{"scheme", "both"}, {"loading", 0.0}}}};
}

struct Parsed {
  int status;
  Json body;
};

Parsed post(const std::string& endpoint, const Json& doc) {
  const service::Reply r = service::handle(endpoint, doc.dump());
  return {r.status, Json::parse(r.body)};
}

void check_error(const Parsed& p, int status, const std::string& code, const std::string& field) {
  CHECK(p.status == status);
  CHECK(p.body["schema"] == "v1");
  CHECK(p.body["error"]["code"] == code);
  CHECK(p.body["error"]["field"] == field);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("toml subset") {
    const Json doc = config::parse(kToml, config::Format::Toml);
    CHECK(doc["sigma"].get<double>() == 0.2);
    CHECK(doc["income_x"].get<int>() == 2);
    CHECK(doc["premium"]["scheme"] == "both");
    const Json more = config::parse(
        "a = true\nb = [1, 2.5, \"x\"]\nc = 1_000\n[t.u]\nd = \"q\\\"z\"\n", config::Format::Toml);
    CHECK(more["a"] == true);
    CHECK(more["b"].size() == 3);
    CHECK(more["c"] == 1000);
    CHECK(more["t"]["u"]["d"] == "q\"z");
  }

  TEST_CASE("toml errors name the line") {
    for (const char* bad : {"a = 1\nb 2\n", "a = 1\na = 2\n", "a = \"open\n", "a = 1x\n",
                            "[t\n", "a = 1 2\n"}) {
      try {
        config::parse(bad, config::Format::Toml);
        FAIL("expected ConfigInvalid for " << bad);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigInvalid);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
      }
    }
  }

  TEST_CASE("format from extension") {
    CHECK(config::format_for_path("a/b.toml") == config::Format::Toml);
    CHECK(config::format_for_path("a/b.TOML") == config::Format::Toml);
    CHECK(config::format_for_path("b.json") == config::Format::Json);
    CHECK(config::format_for_path("noext") == config::Format::Json);
  }

  TEST_CASE("toml and json give the same scenario") {
    const config::Scenario a = config::scenario_from_json(config::parse(kToml, config::Format::Toml));
    const config::Scenario b = config::scenario_from_json(reference_doc());
    CHECK(config::to_json(a) == config::to_json(b));
    CHECK(a.schemes().size() == 2);
  }

  TEST_CASE("structural problems") {
    auto field_of = [](const Json& doc) {
      try {
        config::scenario_from_json(doc);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigInvalid);
        return e.field();
      }
      return std::string("<none>");
    };
    Json doc = reference_doc();
    doc["beta"] = 1;
    CHECK(field_of(doc) == "beta");
    doc = reference_doc();
    doc["premium"]["theta"] = 0;
    CHECK(field_of(doc) == "premium.theta");
    doc = reference_doc();
    doc.erase("alpha");
    CHECK(field_of(doc) == "alpha");
    doc = reference_doc();
    doc["mu"] = "high";
    CHECK(field_of(doc) == "mu");
    doc = reference_doc();
    doc["premium"]["scheme"] = "annual";
    CHECK(field_of(doc) == "premium.scheme");
    doc = reference_doc();
    doc["premium"]["loss_probability"] = 0.3;
    CHECK(field_of(doc) == "premium");
    doc = reference_doc();
    doc["premium"] = {{"rate", 0.5}};
    CHECK(field_of(doc) == "premium.scheme");
    CHECK(field_of(Json::array()) == "");
  }

  TEST_CASE("premium block defaults to fair pricing for both schemes") {
    Json doc = reference_doc();
    doc.erase("premium");
    const config::Scenario s = config::scenario_from_json(doc);
    CHECK(s.premium.kind == config::PremiumSpec::Kind::Loading);
    CHECK(s.premium.value == 0.0);
    CHECK(!s.premium.scheme);
    CHECK(!s.wealth);
  }
}

TEST_SUITE("service") {
  TEST_CASE("solve the reference household") {
    const Parsed p = post("solve", reference_doc());
    REQUIRE(p.status == 200);
    CHECK(p.body["schema"] == "v1");
    CHECK(p.body["validation"]["ok"] == true);
    const Json& pol = p.body["policies"];
    CHECK(std::abs(pol["single"]["benefit"]["units"].get<double>() - 52.38) < 0.01);
    CHECK(std::abs(pol["continuous"]["benefit"]["units"].get<double>() - 11.64) < 0.01);
    CHECK(pol["single"]["benefit"]["dollars"].get<double>() ==
          doctest::Approx(52.37795990003324 * 50000).epsilon(1e-12));
    CHECK(std::abs(pol["single"]["jump_x"]["units"].get<double>() - 0.5476) < 1e-4);
    CHECK(std::abs(pol["single"]["jump_y"]["units"].get<double>() + 0.2024) < 1e-4);
    CHECK(p.body["quotes"]["single"]["rate"].get<double>() == doctest::Approx(7.0 / 9.0));
    CHECK(p.body["quotes"]["continuous"]["rate"].get<double>() == doctest::Approx(0.07));
    CHECK(std::abs(p.body["market"]["max_loss_probability"].get<double>() - 0.585) < 1e-3);
    CHECK(pol["single"]["wealth_drift_reduced"]["units"].get<double>() == doctest::Approx(0.5));
    CHECK(!p.body.contains("ruin"));
  }

  TEST_CASE("same body twice gives identical bytes") {
    Json doc = reference_doc();
    doc["wealth"] = 10.0;
    const service::Reply a = service::handle("solve", doc.dump());
    const service::Reply b = service::handle("solve", doc.dump());
    CHECK(a.body == b.body);
    std::vector<std::string> bodies(8);
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
      threads.emplace_back([&, i] { bodies[i] = service::handle("solve", doc.dump()).body; });
    }
    for (auto& t : threads) t.join();
    for (const auto& body : bodies) CHECK(body == a.body);
    const Json parsed = Json::parse(a.body);
    CHECK(parsed["ruin"]["single"]["case"] == "II");
    CHECK(parsed["ruin"]["single"]["p_total"].get<double>() > 0.0);
  }

  TEST_CASE("loading zero equals pricing at the largest loss probability") {
    Json a = reference_doc();
    a["premium"] = {{"scheme", "single"}, {"loading", 0.0}};
    Json b = reference_doc();
    b["premium"] = {{"scheme", "single"}, {"loss_probability", 0.5850513490191337}};
    const Parsed pa = post("solve", a);
    const Parsed pb = post("solve", b);
    REQUIRE(pa.status == 200);
    REQUIRE(pb.status == 200);
    CHECK(pa.body["policies"]["single"]["benefit"]["units"].get<double>() ==
          doctest::Approx(pb.body["policies"]["single"]["benefit"]["units"].get<double>())
              .epsilon(1e-12));
    CHECK(!pa.body["policies"].contains("continuous"));
  }

  TEST_CASE("error statuses") {
    Json doc = reference_doc();
    doc.erase("alpha");
    check_error(post("solve", doc), 400, "ConfigInvalid", "alpha");
    doc = reference_doc();
    doc["r"] = -0.01;
    check_error(post("solve", doc), 422, "InvalidParameter", "r");
    doc = reference_doc();
    doc["premium"] = {{"scheme", "single"}, {"rate", 1.2}};
    check_error(post("solve", doc), 422, "PremiumNotViable", "premium.rate");
    doc = reference_doc();
    doc["premium"] = {{"scheme", "single"}, {"loading", 0.3}};
    check_error(post("solve", doc), 422, "PremiumNotViable", "loading");
    doc = reference_doc();
    doc["premium"] = {{"loss_probability", 0.7}};
    check_error(post("solve", doc), 422, "LossProbabilityTooHigh", "loss_probability");
    const service::Reply bad = service::handle("solve", "{\"r\": ");
    CHECK(bad.status == 400);
    CHECK(Json::parse(bad.body)["error"]["code"] == "ConfigInvalid");
    const service::Reply none = service::handle("teleport", "{}");
    CHECK(none.status == 404);
    check_error(post("ruin", reference_doc()), 400, "ConfigInvalid", "wealth");
  }

  TEST_CASE("calibrate") {
    Json doc = reference_doc();
    doc["premium"] = {{"loss_probability", 0.55}};
    const Parsed p = post("calibrate", doc);
    REQUIRE(p.status == 200);
    CHECK(p.body["quotes"]["single"]["loss_probability"].get<double>() == doctest::Approx(0.55));
    CHECK(p.body["quotes"]["continuous"]["loss_probability"].get<double>() == doctest::Approx(0.55));
    CHECK(p.body["benefits"]["single"]["units"].get<double>() > 0.0);
    CHECK(p.body["identities"]["premium_flow_gap"].get<double>() < 1e-10);
    CHECK(p.body["identities"]["benefit_gap"].get<double>() < 1e-10);
  }

  TEST_CASE("ruin") {
    Json doc = reference_doc();
    doc["wealth"] = 10.0;
    const Parsed p = post("ruin", doc);
    REQUIRE(p.status == 200);
    const Json& r = p.body["ruin"]["single"];
    CHECK(r["case"] == "II");
    CHECK(r["subcase"] == "B");
    CHECK(r["p_total"].get<double>() ==
          doctest::Approx(r["p_before"].get<double>() + r["p_between"].get<double>()).epsilon(1e-12));
    CHECK(r["inputs"]["c0"]["units"].get<double>() ==
          doctest::Approx(0.02 * (10 - 7.0 / 9.0 * 52.37795990003324) + 4.0));
    doc["wealth"] = -300.0;
    check_error(post("ruin", doc), 422, "InvalidParameter", "c0");
  }

  TEST_CASE("sweep") {
    Json doc = reference_doc();
    doc["sweep"] = {{"parameter", "theta"}, {"from", 0.0}, {"to", 0.25}, {"steps", 5}};
    const Parsed p = post("sweep", doc);
    REQUIRE(p.status == 200);
    CHECK(p.body["sweep"]["rows"].size() == 6);
    CHECK(p.body["sweep"]["claims"]["monotone_single"] == "holds");
    CHECK(p.body["sweep"]["rows"][0]["benefit_single"]["units"].get<double>() ==
          doctest::Approx(52.37795990003324));
    doc["sweep"]["steps"] = service::kMaxSweepPoints;
    check_error(post("sweep", doc), 422, "InvalidParameter", "sweep.steps");
    doc["sweep"]["steps"] = service::kMaxSweepPoints - 1;
    CHECK(post("sweep", doc).status == 200);
    doc["sweep"] = {{"parameter", "alpha"}, {"values", Json(std::vector<double>(10001, 2.0))}};
    check_error(post("sweep", doc), 422, "InvalidParameter", "sweep.values");
    doc["sweep"] = {{"parameter", "beta"}, {"values", {1, 2}}};
    check_error(post("sweep", doc), 400, "ConfigInvalid", "sweep.parameter");
    doc = reference_doc();
    check_error(post("sweep", doc), 400, "ConfigInvalid", "sweep");
    doc["sweep"] = {{"parameter", "alpha"}, {"values", {1, 2}}};
    doc["premium"] = {{"scheme", "single"}, {"rate", 0.8}};
    check_error(post("sweep", doc), 400, "ConfigInvalid", "premium.rate");
  }

  TEST_CASE("elicit") {
    const Parsed a = post("elicit", {{"loss_dollars", 10000}, {"p", 0.01},
                                     {"willingness_to_pay_dollars", 122.65}});
    REQUIRE(a.status == 200);
    CHECK(std::abs(a.body["alpha"].get<double>() - 2.0) < 1e-3);
    const Parsed b = post("elicit", {{"loss", 0.2}, {"p", 0.01}, {"willingness_to_pay", 0.002453}});
    CHECK(b.body["alpha"].get<double>() == doctest::Approx(a.body["alpha"].get<double>()));
    check_error(post("elicit", {{"loss", 0.2}, {"p", 0.01}, {"willingness_to_pay", 0.001}}), 422,
                "NoSolution", "willingness_to_pay");
    check_error(post("elicit", {{"loss", 0.2}, {"loss_dollars", 1}, {"p", 0.01},
                                {"willingness_to_pay", 0.1}}),
                400, "ConfigInvalid", "loss");
    check_error(post("elicit", {{"loss", 0.2}, {"p", 0.01}}), 400, "ConfigInvalid",
                "willingness_to_pay");
  }

  TEST_CASE("verify honours the tolerance") {
    Json doc = reference_doc();
    doc["verify"] = {{"tolerance", 1e-6}, {"w_points", 21}, {"d_points", 21}};
    const Parsed loose = post("verify", doc);
    REQUIRE(loose.status == 200);
    CHECK(loose.body["passed"] == true);
    doc["verify"]["tolerance"] = 1e-17;
    const Parsed tight = post("verify", doc);
    CHECK(tight.body["passed"] == false);
    doc["verify"] = {{"w_points", 1}};
    check_error(post("verify", doc), 400, "ConfigInvalid", "verify");
  }

  TEST_CASE("simulate") {
    Json doc = reference_doc();
    doc["wealth"] = 10.0;
    doc["premium"]["scheme"] = "single";
    doc["simulation"] = {{"paths", 20000}, {"seed", 3}};
    const service::Reply a = service::handle("simulate", doc.dump());
    const service::Reply b = service::handle("simulate", doc.dump());
    REQUIRE(a.status == 200);
    CHECK(a.body == b.body);
    const Json r = Json::parse(a.body);
    CHECK(r["ruin"]["single"]["p_total"]["agrees"] == true);
    CHECK(r["insurer_loss"]["single"]["agrees"] == true);
    doc["simulation"]["paths"] = 0;
    check_error(post("simulate", doc), 400, "ConfigInvalid", "simulation.paths");
    doc["simulation"] = {{"dt", 0.1}};
    check_error(post("simulate", doc), 400, "ConfigInvalid", "dt");
    CHECK_FALSE(service::served_over_http("simulate"));
    CHECK(service::served_over_http("solve"));
  }
}
