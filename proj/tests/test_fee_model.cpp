#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "frsc/fee_model.hpp"

using namespace frsc;

TEST_CASE("constant inflow of 50 BTC per block") {
  const FeeScenario s(scenarios::constant(5'000'000'000, 600));
  CHECK(arrived_fees(s, 0.0) == Amount(0));
  CHECK(arrived_fees(s, 600.0) == Amount(5'000'000'000));
  CHECK(arrived_fees(s, 6000.0) == Amount(50'000'000'000));
  CHECK(arrived_fees(s, 300.0) == Amount(2'500'000'000));
  CHECK(s.rate_at(1e6) == doctest::Approx(5e9 / 600));
}

TEST_CASE("segments are integrated piecewise") {
  const FeeScenario s({{0, 10, 1}, {100, 0, 1}});
  CHECK(arrived_fees(s, 250.0) == Amount(1000));
  CHECK(arrived_fees(s, 50.0) == Amount(500));
  CHECK(arrived_fees(s, 100.0) == Amount(1000));
  CHECK(arrived_fees(s, -5.0) == Amount(0));
}

TEST_CASE("arrived fees are monotone and track the rate") {
  const FeeScenario s(scenarios::long_term());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t(0.0, 2.5e7);
  for (int i = 0; i < 2000; ++i) {
    const double a = t(rng), b = t(rng);
    const double lo = std::min(a, b), hi = std::max(a, b);
    CHECK(arrived_fees(s, lo) <= arrived_fees(s, hi));
  }
  const FeeScenario c({{0, 7, 1}});
  for (int i = 0; i < 2000; ++i) {
    const double t1 = t(rng), t2 = t1 + t(rng) / 1000;
    const double diff = static_cast<double>(arrived_fees(c, t2).sat()) - static_cast<double>(arrived_fees(c, t1).sat());
    CHECK(std::abs(diff - 7 * (t2 - t1)) <= 1.0 + 1e-6);
  }
}

TEST_CASE("claimable fees honour the block cap") {
  const Amount cap = Amount::btc(50);
  const FeeScenario full(scenarios::constant(1, 1), true, cap);
  const FeeScenario open(scenarios::constant(1, 1), false, cap);
  CHECK(claimable_fees(full, Amount::btc(80)) == Amount::btc(50));
  CHECK(claimable_fees(full, Amount::btc(20)) == Amount::btc(20));
  CHECK(claimable_fees(open, Amount::btc(80)) == Amount::btc(80));
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_AS(FeeScenario({}), std::invalid_argument);
  CHECK_THROWS_AS(FeeScenario({{5, 1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FeeScenario({{0, 1, 1}, {0, 2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FeeScenario({{0, 1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(FeeScenario({{0, 1, 1}}, true, Amount(0)), std::invalid_argument);
}

TEST_CASE("scenario text format") {
  const auto segs = parse_scenario("# comment\nfrsc-scenario v1\n0,10\n\n# mid\n100, 0\n");
  REQUIRE(segs.size() == 2);
  CHECK(segs[1] == InflowSegment{100, 0, 1});
  CHECK(parse_scenario(format_scenario(segs)) == segs);

  CHECK_THROWS_WITH_AS(parse_scenario("0,10\n"), doctest::Contains("header"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_scenario("frsc-scenario v1\n0,10\n5,x\n"), doctest::Contains("line 3"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_scenario("frsc-scenario v1\n0,-1\n"), doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_scenario("frsc-scenario v1\n0,1\n0,2\n"), doctest::Contains("increasing"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_scenario("frsc-scenario v1\n3,1\n"), doctest::Contains("time 0"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_scenario("frsc-scenario v1\n0;1\n"), doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_AS(parse_scenario("frsc-scenario v1\n"), std::runtime_error);
  CHECK_THROWS_AS(format_scenario(scenarios::constant(5, 600)), std::invalid_argument);
  CHECK_THROWS_AS(load_scenario("/nonexistent/file.csv"), std::runtime_error);
}

TEST_CASE("bundled scenario files match the generators") {
  const std::string dir = FRSC_SCENARIO_DIR;
  CHECK(load_scenario(dir + "/long_term.csv") == scenarios::long_term(6000));
  CHECK(load_scenario(dir + "/triangle_wave.csv") == scenarios::triangle_wave(6000));
}

TEST_CASE("staircase approximates linear phases") {
  const scenarios::Phase phases[] = {{600, 5, 5}, {6000, 0, 100}, {600, 100, 100}};
  const auto segs = scenarios::staircase(phases, 600);
  REQUIRE(segs.size() == 12);
  CHECK(segs[0] == InflowSegment{0, 5, 1});
  CHECK(segs[1] == InflowSegment{600, 0, 1});
  CHECK(segs[5].amount == 40);
  CHECK(segs[10] == InflowSegment{6000, 90, 1});
  CHECK(segs[11] == InflowSegment{6600, 100, 1});
  CHECK_THROWS_AS(scenarios::staircase(phases, 0), std::invalid_argument);
}

TEST_CASE("extreme-rate windows") {
  const FeeScenario tri(scenarios::triangle_wave(), true);
  const auto lo = tri.min_rate_window();
  const auto hi = tri.max_rate_window();
  CHECK(tri.rate_at(lo.first) == doctest::Approx(2e8 / 600).epsilon(1e-6));
  CHECK(tri.rate_at(hi.first) == doctest::Approx(5e9 / 600).epsilon(1e-6));
  // the last hold at each extreme
  CHECK(lo.first == doctest::Approx(600.0 * (12000 + 10000 + 12000 + 10000 + 12000 + 10000)));
  // the first step of the following ramp still runs at the low rate and is merged in
  CHECK(lo.second - lo.first == doctest::Approx(600.0 * 12001));
  CHECK(hi.first == doctest::Approx(600.0 * (4 * 12000 + 4 * 10000)));
  const FeeScenario c(scenarios::constant(1, 1));
  CHECK(c.max_rate_window().second == std::numeric_limits<double>::infinity());
}
