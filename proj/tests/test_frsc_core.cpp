#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "frsc/frsc_core.hpp"

using namespace frsc;

namespace {

std::string str(const boost::rational<std::int64_t>& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

FrscSet single(std::uint64_t nu, std::uint32_t lambda) { return FrscSet({{Amount(nu), lambda, Ppm::one()}}); }

const std::vector<ContractSpec> kFour{{1008, Ppm(70'000)}, {2016, Ppm(140'000)}, {4032, Ppm(280'000)},
                                      {8064, Ppm(510'000)}};

}  // namespace

TEST_CASE("partial claim floors nu over lambda") {
  CHECK(partial_claim({Amount::btc(2016), 2016, Ppm::one()}) == Amount::btc(1));
  CHECK(partial_claim({Amount(0), 2016, Ppm::one()}) == Amount(0));
  CHECK(partial_claim({Amount(100), 7, Ppm::one()}) == Amount(14));
  CHECK(partial_claim({Amount(6), 7, Ppm::one()}) == Amount(0));
}

TEST_CASE("partial claim is monotone in nu") {
  for (std::uint32_t lambda : {1u, 2u, 7u, 2016u}) {
    Amount prev{0};
    for (std::uint64_t nu = 0; nu < 5000; ++nu) {
      const Amount claim = partial_claim({Amount(nu), lambda, Ppm::one()});
      CHECK(claim >= prev);
      CHECK(claim <= Amount(nu));
      prev = claim;
    }
  }
}

TEST_CASE("next claim sums partial claims") {
  CHECK(next_claim(single(Amount::btc(2016).sat(), 2016)) == Amount::btc(1));
  const FrscSet two({{Amount(21), 7, Ppm(500'000)}, {Amount(50), 10, Ppm(500'000)}});
  CHECK(next_claim(two) == Amount(8));
}

TEST_CASE("worked example: 2 BTC block with 60% deposited") {
  const auto [s, after] = apply_block(single(Amount::btc(2016).sat(), 2016), Amount::btc(2),
                                      SplitParams(Ppm(600'000), Ppm(400'000)));
  CHECK(s.next_claim == Amount(100'000'000));
  CHECK(s.reward_total == Amount(180'000'000));
  CHECK(s.deposit_total == Amount(120'000'000));
  CHECK(s.miner_direct == Amount(80'000'000));
  CHECK(after[0].nu == Amount(201'620'000'000));
  CHECK(after[0].lambda == 2016);
}

TEST_CASE("empty block only pays out the claims") {
  const FrscSet set({{Amount(1000), 10, Ppm(300'000)}, {Amount(999), 3, Ppm(700'000)}});
  const auto [s, after] = apply_block(set, Amount(0), SplitParams::from_contract_share(Ppm(700'000)));
  CHECK(s.reward_total == s.next_claim);
  CHECK(s.next_claim == Amount(100 + 333));
  CHECK(after[0].nu == Amount(900));
  CHECK(after[1].nu == Amount(666));
}

TEST_CASE("deposit remainder goes to the last contract") {
  const FrscSet set({{Amount(0), 1, Ppm(333'333)}, {Amount(0), 1, Ppm(333'333)}, {Amount(0), 1, Ppm(333'334)}});
  const auto [s, after] = apply_block(set, Amount(100), SplitParams::from_contract_share(Ppm::one()));
  CHECK(s.deposit_total == Amount(100));
  CHECK(s.per_contract_deposits == std::vector<Amount>{Amount(33), Amount(33), Amount(34)});
  CHECK(after.total_nu() == Amount(100));
}

TEST_CASE("reward_total agrees with apply_block") {
  const FrscSet set = init_genesis(Amount::btc(50), SplitParams::from_contract_share(Ppm(700'000)), kFour);
  for (std::uint64_t fees : {0ull, 1ull, 123'456'789ull, 5'000'000'000ull}) {
    const auto params = SplitParams::from_contract_share(Ppm(650'000));
    CHECK(reward_total(set, Amount(fees), params) == apply_block(set, Amount(fees), params).first.reward_total);
  }
}

TEST_CASE("fixed point is invariant") {
  // lambda * c * f = 2016 * 0.7 * 50 BTC
  const FrscSet set = single(7'056'000'000'000, 2016);
  const auto [s, after] = apply_block(set, Amount::btc(50), SplitParams::from_contract_share(Ppm(700'000)));
  CHECK(after == set);
  CHECK(s.reward_total == Amount::btc(50));
}

TEST_CASE("genesis balances") {
  const auto c70 = SplitParams::from_contract_share(Ppm(700'000));
  const std::vector<ContractSpec> one{{2016, Ppm::one()}};
  CHECK(init_genesis(Amount(5'000'000'000), c70, one)[0].nu == Amount(7'056'000'000'000));
  CHECK(init_genesis(Amount(0), c70, kFour).total_nu() == Amount(0));

  const FrscSet four = init_genesis(Amount::btc(50), SplitParams::from_contract_share(Ppm(500'000)), kFour);
  REQUIRE(four.size() == 4);
  CHECK(four[0].nu == Amount(176'400'000'000));
  CHECK(four[1].nu == Amount(705'600'000'000));
  CHECK(four[2].nu == Amount(2'822'400'000'000));
  CHECK(four[3].nu == Amount(10'281'600'000'000));
  CHECK(four[3].lambda == 8064);
  CHECK(four[3].rho == Ppm(510'000));
}

TEST_CASE("rho values must sum to one") {
  const std::vector<ContractSpec> bad{{10, Ppm(500'000)}, {20, Ppm(600'000)}};
  CHECK_THROWS_AS(init_genesis(Amount(1), SplitParams{}, bad), std::invalid_argument);
  CHECK_THROWS_AS(require_unit_rho_sum(bad), std::invalid_argument);
  CHECK_THROWS_AS(FrscSet({{Amount(0), 10, Ppm(999'999)}}), std::invalid_argument);
  CHECK_THROWS_AS(FrscSet({}), std::invalid_argument);
  CHECK_THROWS_AS(FrscSet({{Amount(0), 0, Ppm::one()}}), std::invalid_argument);
  CHECK_THROWS_AS(SplitParams(Ppm(500'000), Ppm(400'000)), std::invalid_argument);
}

TEST_CASE("effective lambda") {
  const std::vector<ContractSpec> paper{{1008, Ppm(70'000)}, {2016, Ppm(190'000)}, {4032, Ppm(280'000)},
                                        {8064, Ppm(460'000)}};
  CHECK(str(effective_lambda(paper)) == "5292");
  CHECK(str(effective_lambda(std::vector<ContractSpec>{{5292, Ppm::one()}})) == "5292");
  const std::vector<ContractSpec> equal{{1008, Ppm(250'000)}, {2016, Ppm(250'000)}, {4032, Ppm(250'000)},
                                        {8064, Ppm(250'000)}};
  CHECK(str(effective_lambda(equal)) == "3780");
  const std::vector<ContractSpec> frac{{3, Ppm(500'000)}, {4, Ppm(500'000)}};
  CHECK(str(effective_lambda(frac)) == "7/2");

  const FrscSet set = init_genesis(Amount::btc(1), SplitParams::from_contract_share(Ppm(1)), paper);
  CHECK(str(effective_lambda(set)) == "5292");
}

TEST_CASE("effective lambda ignores contract order") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    std::vector<ContractSpec> specs;
    std::uint32_t left = kPpmScale;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      const std::uint32_t rho = i + 1 == n ? left : static_cast<std::uint32_t>(rng() % (left + 1));
      left -= rho;
      specs.push_back({static_cast<std::uint32_t>(1 + rng() % 10'000), Ppm(rho)});
    }
    const auto expected = effective_lambda(specs);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(specs.begin(), specs.end(), rng);
      CHECK(str(effective_lambda(specs)) == str(expected));
    }
  }
}

TEST_CASE("parity fees") {
  CHECK(parity_fees(Amount::btc(1), SplitParams::from_contract_share(Ppm(600'000))) == Amount(166'666'666));
  CHECK(parity_fees(Amount(12345), SplitParams::from_contract_share(Ppm::one())) == Amount(12345));
  CHECK(parity_fees(Amount::btc(35), SplitParams::from_contract_share(Ppm(700'000))) == Amount::btc(50));
  CHECK_THROWS_AS(parity_fees(Amount(1), SplitParams{}), std::invalid_argument);
}

TEST_CASE("conservation over random block sequences") {
  std::mt19937_64 rng(2024);
  for (int run = 0; run < 200; ++run) {
    const std::vector<ContractSpec> specs = [&] {
      std::vector<ContractSpec> s;
      std::uint32_t left = kPpmScale;
      const int n = 1 + static_cast<int>(rng() % 5);
      for (int i = 0; i < n; ++i) {
        const std::uint32_t rho = i + 1 == n ? left : static_cast<std::uint32_t>(rng() % (left + 1));
        left -= rho;
        s.push_back({static_cast<std::uint32_t>(1 + rng() % 3000), Ppm(rho)});
      }
      return s;
    }();
    const auto params = SplitParams::from_contract_share(Ppm(static_cast<std::uint32_t>(rng() % (kPpmScale + 1))));
    FrscSet set = init_genesis(Amount(rng() % 10'000'000'000), params, specs);
    const Amount start = set.total_nu();
    Amount fees_sum, reward_sum;
    for (int b = 0; b < 100; ++b) {
      const Amount fees(rng() % 20'000'000'000);
      auto [s, next] = apply_block(set, fees, params);
      CHECK(s.miner_direct + s.deposit_total == fees);
      CHECK(s.reward_total == s.next_claim + s.miner_direct);
      fees_sum += fees;
      reward_sum += s.reward_total;
      set = std::move(next);
    }
    CHECK(fees_sum + start == reward_sum + set.total_nu());
  }
}

TEST_CASE("impulse response matches the recursion") {
  for (std::uint32_t lambda : {2u, 7u, 2016u}) {
    for (std::uint64_t d : {std::uint64_t{1}, std::uint64_t{lambda}, std::uint64_t{100'000'000}}) {
      FrscSet set = single(0, lambda);
      auto [first, loaded] = apply_block(set, Amount(d), SplitParams::from_contract_share(Ppm::one()));
      CHECK(first.next_claim == Amount(0));
      set = loaded;
      std::uint64_t nu = d;
      for (std::uint64_t k = 0; k < 5ull * lambda; ++k) {
        const std::uint64_t claim = nu / lambda;
        nu -= claim;
        auto [s, next] = apply_block(set, Amount(0), SplitParams::from_contract_share(Ppm::one()));
        REQUIRE(s.next_claim == Amount(claim));
        REQUIRE(next[0].nu == Amount(nu));
        set = std::move(next);
      }
    }
  }
}

TEST_CASE("approach to the fixed point is monotone and geometric") {
  const auto params = SplitParams::from_contract_share(Ppm(700'000));
  const Amount fees = Amount::btc(50);
  const std::uint32_t lambda = 2016;
  const double target = 7'056'000'000'000.0;
  for (std::uint64_t nu0 : {std::uint64_t{0}, std::uint64_t{20'000'000'000'000}}) {
    FrscSet set = single(nu0, lambda);
    double gap = std::abs(target - static_cast<double>(nu0));
    const double gap0 = gap;
    for (std::uint32_t t = 1; t <= 10 * lambda; ++t) {
      set = apply_block(set, fees, params).second;
      const double g = std::abs(target - static_cast<double>(set[0].nu.sat()));
      REQUIRE(g <= gap);
      gap = g;
    }
    // |gap_t| <= gap_0 (1 - 1/lambda)^t plus flooring slack of at most lambda per step
    const double bound = gap0 * std::pow(1.0 - 1.0 / lambda, 10.0 * lambda) + lambda;
    CHECK(gap <= bound);
    const double claim_gap = std::abs(static_cast<double>(next_claim(set).sat()) - 3'500'000'000.0);
    CHECK(claim_gap <= bound / lambda + 1);
  }
}

TEST_CASE("four contracts settle at c times fees") {
  const auto params = SplitParams::from_contract_share(Ppm(700'000));
  std::vector<Frsc> zero;
  for (const auto& s : kFour) zero.push_back({Amount(0), s.lambda, s.rho});
  FrscSet set(zero);
  for (int b = 0; b < 30 * 8064; ++b) set = apply_block(set, Amount::btc(50), params).second;
  const auto claim = next_claim(set).sat();
  CHECK(claim <= 3'500'000'000 + 4);
  CHECK(claim + 4 >= 3'500'000'000);
  const auto s = apply_block(set, Amount::btc(50), params).first;
  CHECK(s.per_contract_claims[0] == Amount(245'000'000));
  CHECK(s.per_contract_claims[3] == Amount(1'785'000'000));
}

TEST_CASE("scaled rounds half up") {
  const FrscSet set({{Amount(10), 2, Ppm(500'000)}, {Amount(7'056'000'000'000), 2016, Ppm(500'000)}});
  const FrscSet s = set.scaled(14, 10);
  CHECK(s[0].nu == Amount(14));
  CHECK(s[1].nu == Amount(9'878'400'000'000));
  CHECK(FrscSet({{Amount(5), 1, Ppm::one()}}).scaled(1, 2)[0].nu == Amount(3));
}
