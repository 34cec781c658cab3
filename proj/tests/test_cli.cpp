/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "lifeins/lifeins.h"

using Json = nlohmann::json;

namespace {

struct Run {
  int rc = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(LIFEINS_CLI) + " " + args + " 2>/dev/null";
  Run run;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) run.out.append(buf.data(), n);
  const int status = pclose(pipe);
  run.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kToml = std::string("--config ") + LIFEINS_FIXTURES + "/reference_household.toml";
const std::string kJson = std::string("--config ") + LIFEINS_FIXTURES + "/reference_household.json";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("solve json carries a manifest") {
    const Run r = cli(kToml + " --format json solve");
    REQUIRE(r.rc == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["manifest"]["command"] == "solve");
    CHECK(j["manifest"]["version"] == lifeins_version());
    CHECK(j["manifest"]["config_path"].get<std::string>().find("reference_household.toml") != std::string::npos);
    CHECK(j["policies"]["single"]["benefit"]["units"].get<double>() ==
          doctest::Approx(52.37795990003324));
  }

  TEST_CASE("toml and json configs print the same policies") {
    const Json a = Json::parse(cli(kToml + " --format json solve").out);
    const Json b = Json::parse(cli(kJson + " --format json solve").out);
    CHECK(a["policies"] == b["policies"]);
    CHECK(a["quotes"] == b["quotes"]);
  }

  TEST_CASE("cli output matches the library response") {
    for (const std::string cmd : {"solve", "calibrate", "ruin --wealth 10"}) {
      const Run r = cli(kJson + " --format json " + cmd);
      REQUIRE(r.rc == 0);
      Json printed = Json::parse(r.out);
      printed.erase("manifest");
      Json body = printed["inputs"];
      const std::string endpoint = cmd.substr(0, cmd.find(' '));
      int status = 0;
      char* text = nullptr;
      lifeins_request(endpoint.c_str(), body.dump().c_str(), &status, &text);
      REQUIRE(text != nullptr);
      CHECK(status == 200);
      CHECK(Json::parse(text) == printed);
      lifeins_free(text);
    }
  }

  TEST_CASE("loading zero equals the largest loss probability") {
    const Json a = Json::parse(cli(kJson + " --format json solve --scheme single --loading 0").out);
    const Json b = Json::parse(
        cli(kJson + " --format json solve --scheme single --loss-prob 0.5850513490191337").out);
    CHECK(a["policies"]["single"]["benefit"]["units"].get<double>() ==
          doctest::Approx(b["policies"]["single"]["benefit"]["units"].get<double>()).epsilon(1e-12));
  }

  TEST_CASE("bad input exits with 2") {
    CHECK(cli(kJson + " solve --scheme single --rate 1.2").rc == 2);
    CHECK(cli(kJson + " simulate --wealth 10 --paths 0").rc == 2);
    CHECK(cli(kJson + " solve --alpha -1").rc == 2);
    CHECK(cli("--config /nonexistent.toml solve").rc == 2);
    CHECK(cli(kJson + " --format yaml solve").rc == 2);
    CHECK(cli(kJson + " ruin --wealth -300").rc == 2);
  }

  TEST_CASE("sweep csv header") {
    const Run r = cli(kJson + " sweep --param theta --from 0 --to 0.2 --steps 4");
    REQUIRE(r.rc == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "parameter,value,D_star,D_bar_star,dc_x,dc_y");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) rows += !line.empty();
    CHECK(rows == 5);
  }

  TEST_CASE("verify tolerance") {
    const std::string grid = " verify --w-points 11 --d-points 11";
    CHECK(cli(kJson + grid + " --tol 1e-6").rc == 0);
    CHECK(cli(kJson + grid + " --tol 1e-17").rc == 1);
  }

  TEST_CASE("same seed gives identical bytes") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "lifeins_cli_seed_a.csv";
    const auto c = dir / "lifeins_cli_seed_c.csv";
    const std::string sim = " simulate --wealth 10 --scheme single --paths 20000 --format csv";
    REQUIRE(cli(kJson + " --seed 11 --out " + a.string() + sim).rc == 0);
    const std::string first = slurp(a);
    REQUIRE(cli(kJson + " --seed 11 --out " + a.string() + sim).rc == 0);
    CHECK(!first.empty());
    CHECK(first.rfind("# manifest: ", 0) == 0);
    CHECK(first == slurp(a));
    REQUIRE(cli(kJson + " --seed 12345678901 --out " + c.string() + sim).rc == 0);
    const std::string other = slurp(c);
    CHECK(other.substr(other.find('\n')) != first.substr(first.find('\n')));
    std::filesystem::remove(a);
    std::filesystem::remove(c);
  }

  TEST_CASE("elicit in dollars") {
    const Run r = cli("--format json elicit --loss 10000 --p 0.01 --wtp 122.65 --dollars");
    REQUIRE(r.rc == 0);
    CHECK(std::abs(Json::parse(r.out)["alpha"].get<double>() - 2.0) < 1e-3);
  }
}
