/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cmath>
#include <random>

#include "doctest.h"
#include "lifeins/ruin.hpp"
#include "oracles.hpp"

using namespace lifeins;

namespace {

RuinInputs random_inputs(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RuinInputs in;
  in.c0 = 0.01 + 5.0 * u(eng);
  in.delta = -3.0 + 6.0 * u(eng);
  in.jump_x = -3.0 + 6.0 * u(eng);
  in.jump_y = -3.0 + 6.0 * u(eng);
  in.lambda_x = 0.005 + 0.2 * u(eng);
  in.lambda_y = 0.005 + 0.2 * u(eng);
  in.m = 0.005 + 0.2 * u(eng);
  in.r = 0.005 + 0.08 * u(eng);
  in.alpha = 0.2 + 5.0 * u(eng);
  return in;
}

oracle::RuinCase as_case(const RuinInputs& in) {
  return {in.c0, in.delta, in.jump_x, in.jump_y, in.lambda_x, in.lambda_y, in.m, in.r, in.alpha};
}

RuinInputs reference_inputs(double c0, double jx, double jy) {
  RuinInputs in;
  in.c0 = c0;
  in.delta = 0.5;
  in.jump_x = jx;
  in.jump_y = jy;
  in.lambda_x = 0.04;
  in.lambda_y = 0.03;
  in.m = 0.02;
  in.r = 0.02;
  in.alpha = 2.0;
  return in;
}

PolicySolution reference_policy(Scheme scheme) {
  const oracle::Params p = oracle::reference_household();
  const MarketParams mkt = oracle::market(p);
  const HouseholdParams hh = oracle::household(p);
  const QuotePair q = Pricing::loadings(0, 0).quotes(mkt, hh);
  return solve_policy(mkt, hh, scheme == Scheme::Single ? q.single : q.continuous);
}

}  // namespace

TEST_SUITE("ruin") {
  TEST_CASE("before the first death") {
    const RuinInputs in = reference_inputs(1.0, 0.5, -0.2);
    const double p = prob_ruin_before_first_death(in);
    CHECK(p == doctest::Approx(oracle::before_first_death_closed(as_case(in))).epsilon(1e-14));
    RuinInputs tiny = in;
    tiny.c0 = 1e-12;
    CHECK(prob_ruin_before_first_death(tiny) == doctest::Approx(1.0).epsilon(1e-10));
    // Vanishing hazards recover the mass of the first-passage density.
    RuinInputs quiet = in;
    quiet.lambda_x = quiet.lambda_y = 1e-14;
    CHECK(prob_ruin_before_first_death(quiet) ==
          doctest::Approx(std::exp(-4.0 * 0.02 * 0.5 * 1.0 / 0.02)).epsilon(1e-10));
    CHECK(ruin_density_mass(quiet) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    // Very negative drift does not lose precision in S - r delta.
    RuinInputs down = in;
    down.delta = -1e6;
    CHECK(prob_ruin_before_first_death(down) ==
          doctest::Approx(std::exp(-0.07 / (0.02 * 1e6))).epsilon(1e-12));
    RuinInputs bad = in;
    bad.c0 = 0.0;
    CHECK_THROWS_AS(prob_ruin_before_first_death(bad), Error);
  }

  TEST_CASE("reference household at w = 10") {
    for (Scheme s : {Scheme::Single, Scheme::Continuous}) {
      const PolicySolution sol = reference_policy(s);
      const RuinInputs in = ruin_inputs(sol, 10.0);
      CHECK(in.c0 == doctest::Approx(0.02 * (10.0 - 7.0 / 9.0 * 52.37795990003324) + 4.0)
                         .epsilon(1e-12));
      CHECK(in.delta == doctest::Approx(0.5).epsilon(1e-10));
      const RuinReport rep = prob_ruin_total(in);
      CHECK(rep.case_label == "II");
      CHECK(rep.subcase == 'B');
      CHECK(rep.large_jump_survivor == Survivor::X);
      CHECK(rep.p_at_first_death < 1e-6);
      // With fair pricing e^{-alpha c} is a martingale before the first
      // death, so ruin is driven by the post-jump level.
      const double approx = (0.04 * std::exp(-2.0 * (in.c0 + sol.jump_y)) +
                             0.03 * std::exp(-2.0 * (in.c0 + sol.jump_x))) / 0.07;
      CHECK(rep.p_total == doctest::Approx(approx).epsilon(1e-3));
      CHECK(rep.p_before == doctest::Approx(oracle::before_first_death_closed(as_case(in))).epsilon(1e-12));
      const double q = oracle::between_deaths_quadrature(as_case(in));
      CHECK(std::abs(rep.p_between - q) < 1e-12 + 1e-8 * q);
    }
  }

  TEST_CASE("every subcase is reachable and labelled") {
    struct Row {
      double c0, jx, jy;
      const char* label;
      char sub;
    };
    const Row rows[] = {
        {1.0, 0.5, 0.2, "I", 'A'},    {1.0, 0.5, -0.4, "II", 'B'},
        {1.0, -0.2, -0.4, "III", 'C'}, {0.3, 0.5, -0.4, "II", 'D'},
        {0.3, -0.2, -0.4, "III", 'E'}, {0.1, -0.2, -0.4, "III", 'F'},
        {1.0, -0.4, 0.5, "II", 'B'},   {0.3, -0.4, -0.2, "III", 'E'},
    };
    for (const Row& row : rows) {
      const RuinInputs in = reference_inputs(row.c0, row.jx, row.jy);
      const RuinReport rep = prob_ruin_total(in);
      CHECK(rep.case_label == row.label);
      CHECK(rep.subcase == row.sub);
      CHECK(rep.p_total == doctest::Approx(rep.p_before + rep.p_between).epsilon(1e-12));
      const double q = oracle::between_deaths_quadrature(as_case(in));
      CHECK(std::abs(rep.p_between - q) < 1e-12 + 1e-8 * q);
      if (row.sub == 'D' || row.sub == 'E' || row.sub == 'F') CHECK(rep.p_at_first_death > 0.0);
    }
  }

  TEST_CASE("swapping the lives swaps nothing but the label") {
    RuinInputs a = reference_inputs(0.8, 0.6, -0.5);
    RuinInputs b = a;
    std::swap(b.jump_x, b.jump_y);
    std::swap(b.lambda_x, b.lambda_y);
    const RuinReport ra = prob_ruin_total(a);
    const RuinReport rb = prob_ruin_total(b);
    CHECK(ra.p_total == doctest::Approx(rb.p_total).epsilon(1e-14));
    CHECK(ra.subcase == rb.subcase);
    CHECK(ra.large_jump_survivor == Survivor::X);
    CHECK(rb.large_jump_survivor == Survivor::Y);
  }

  TEST_CASE("closed forms agree with quadrature on random draws") {
    std::mt19937_64 eng(17);
    for (int i = 0; i < 60; ++i) {
      const RuinInputs in = random_inputs(eng);
      const BetweenDeaths b = prob_ruin_between_deaths(in);
      const double q = oracle::between_deaths_quadrature(as_case(in));
      INFO("draw " << i << " subcase " << b.subcase);
      REQUIRE(std::abs(b.probability - q) < 1e-10 + 1e-8 * q);
    }
  }

  TEST_CASE("continuity across case boundaries") {
    std::mt19937_64 eng(19);
    for (int i = 0; i < 200; ++i) {
      RuinInputs in = random_inputs(eng);
      // Boundary at c0 = -jump for each negative jump, and at jump = 0.
      for (double* j : {&in.jump_x, &in.jump_y}) {
        const double saved = *j;
        if (saved < 0.0) {
          RuinInputs lo = in, hi = in;
          lo.c0 = -saved * (1.0 - 1e-12);
          hi.c0 = -saved * (1.0 + 1e-12);
          const RuinReport a = prob_ruin_total(lo), b = prob_ruin_total(hi);
          REQUIRE(a.subcase != b.subcase);
          REQUIRE(std::abs(a.p_total - b.p_total) < 1e-8);
          REQUIRE(std::abs(a.p_between - b.p_between) < 1e-8);
        }
        *j = -1e-13;
        const double neg = prob_ruin_total(in).p_total;
        *j = 0.0;
        const double zero = prob_ruin_total(in).p_total;
        REQUIRE(std::abs(neg - zero) < 1e-8);
        *j = saved;
      }
    }
  }

  TEST_CASE("probability bounds and monotonicity in c0") {
    std::mt19937_64 eng(23);
    for (int i = 0; i < 1000; ++i) {
      const RuinInputs in = random_inputs(eng);
      const RuinReport rep = prob_ruin_total(in);
      REQUIRE(rep.p_before >= 0.0);
      REQUIRE(rep.p_before <= 1.0);
      REQUIRE(rep.p_between >= 0.0);
      REQUIRE(rep.p_at_first_death <= rep.p_between + 1e-15);
      REQUIRE(rep.p_total <= 1.0);
      REQUIRE(std::abs(rep.p_total - rep.p_before - rep.p_between) < 1e-12);
    }
    for (int i = 0; i < 200; ++i) {
      RuinInputs in = random_inputs(eng);
      double prev = 2.0;
      for (int j = 1; j <= 120; ++j) {
        in.c0 = 0.05 * j;
        const double p = prob_ruin_total(in).p_total;
        REQUIRE(p <= prev + 1e-12);
        prev = p;
      }
    }
  }

  TEST_CASE("all jumps to zero: nothing left between deaths as c0 vanishes") {
    RuinInputs in = reference_inputs(1e-9, -0.2, -0.4);
    const RuinReport rep = prob_ruin_total(in);
    CHECK(rep.subcase == 'F');
    CHECK(rep.p_between < 1e-6);
    CHECK(rep.p_total == doctest::Approx(1.0).epsilon(1e-6));
    in.c0 = 0.1;
    CHECK(prob_ruin_total(in).p_between > 1e-3);
  }

  TEST_CASE("first-passage density") {
    std::mt19937_64 eng(29);
    for (int i = 0; i < 10; ++i) {
      RuinInputs in = random_inputs(eng);
      in.delta = std::abs(in.delta) * (i % 3 == 0 ? -1.0 : 1.0);
      auto f = [&](double t) { return ruin_density_before_first_death(in, t); };
      for (double t = 0.01; t < 1e4; t *= 1.7) REQUIRE(f(t) >= 0.0);
      double mass = 0.0;
      double a = 0.0;
      for (double b : {0.1, 1.0, 10.0, 100.0, 1e3, 1e4}) {
        mass += oracle::integrate(f, a, b);
        a = b;
      }
      const double tail = oracle::integrate_tail(f, 1e4);
      INFO("draw " << i);
      CHECK(std::abs(mass - ruin_density_mass(in)) < 1e-6 + tail);
      const double lam = in.lambda_x + in.lambda_y;
      const double laplace =
          oracle::integrate_tail([&](double t) { return std::exp(-lam * t) * f(t); }, 0.0);
      CHECK(std::abs(laplace - prob_ruin_before_first_death(in)) < 1e-8);
    }
  }

  TEST_CASE("singular parameters") {
    RuinInputs in = reference_inputs(1.0, 0.1, 0.1);
    in.delta = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(prob_ruin_total(in), Error);
    in.delta = 1e200;
    try {
      prob_ruin_total(in);
      FAIL("expected SingularParameter");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularParameter);
    }
  }
}
