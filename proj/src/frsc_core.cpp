#include "frsc/frsc_core.hpp"

#include <stdexcept>
#include <string>

namespace frsc {

namespace {

void require_rho_sum(std::uint64_t sum) {
  if (sum != kPpmScale) {
    throw std::invalid_argument("contract rho values must sum to exactly 1000000 ppm, got " + std::to_string(sum));
  }
}

}  // namespace

FrscSet::FrscSet(std::vector<Frsc> contracts) : contracts_(std::move(contracts)) {
  if (contracts_.empty()) throw std::invalid_argument("contract set must not be empty");
  std::uint64_t rho_sum = 0;
  for (const auto& c : contracts_) {
    if (c.lambda == 0) throw std::invalid_argument("contract lambda must be >= 1");
    rho_sum += c.rho.value();
  }
  require_rho_sum(rho_sum);
}

Amount FrscSet::total_nu() const {
  Amount total;
  for (const auto& c : contracts_) total += c.nu;
  return total;
}

FrscSet FrscSet::scaled(std::uint64_t num, std::uint64_t den) const {
  if (den == 0) throw std::invalid_argument("scale denominator must be positive");
  FrscSet out = *this;
  for (auto& c : out.contracts_) {
    const unsigned __int128 wide = static_cast<unsigned __int128>(c.nu.sat()) * num;
    c.nu = Amount(static_cast<std::uint64_t>((2 * wide + den) / (2 * static_cast<unsigned __int128>(den))));
  }
  return out;
}

SplitParams::SplitParams(Ppm c, Ppm m) : c_(c), m_(m) {
  if (c.value() + m.value() != kPpmScale) {
    throw std::invalid_argument("contract share c and miner share m must sum to 1000000 ppm");
  }
}

Amount partial_claim(const Frsc& frsc) { return Amount(frsc.nu.sat() / frsc.lambda); }

Amount next_claim(const FrscSet& set) {
  Amount total;
  for (const auto& c : set.contracts()) total += partial_claim(c);
  return total;
}

std::pair<BlockSettlement, FrscSet> apply_block(const FrscSet& set, Amount block_fees, const SplitParams& params) {
  BlockSettlement s;
  s.deposit_total = scale_floor(block_fees, params.c());
  s.miner_direct = block_fees - s.deposit_total;

  const auto contracts = set.contracts();
  s.per_contract_claims.reserve(contracts.size());
  s.per_contract_deposits.reserve(contracts.size());

  std::vector<Frsc> next;
  next.reserve(contracts.size());
  Amount deposited;
  for (std::size_t i = 0; i < contracts.size(); ++i) {
    const Frsc& x = contracts[i];
    const Amount claim = partial_claim(x);
    const Amount deposit =
        (i + 1 == contracts.size()) ? s.deposit_total - deposited : scale_floor(s.deposit_total, x.rho);
    deposited += deposit;
    s.next_claim += claim;
    s.per_contract_claims.push_back(claim);
    s.per_contract_deposits.push_back(deposit);
    next.push_back(Frsc{x.nu - claim + deposit, x.lambda, x.rho});
  }
  s.reward_total = s.next_claim + s.miner_direct;
  return {std::move(s), FrscSet(std::move(next))};
}

Amount reward_total(const FrscSet& set, Amount block_fees, const SplitParams& params) {
  return next_claim(set) + (block_fees - scale_floor(block_fees, params.c()));
}

void require_unit_rho_sum(std::span<const ContractSpec> specs) {
  std::uint64_t sum = 0;
  for (const auto& s : specs) sum += s.rho.value();
  require_rho_sum(sum);
}

FrscSet init_genesis(Amount mean_fees, const SplitParams& params, std::span<const ContractSpec> specs) {
  require_unit_rho_sum(specs);
  const Amount deposit = scale_floor(mean_fees, params.c());
  std::vector<Frsc> contracts;
  contracts.reserve(specs.size());
  for (const auto& spec : specs) {
    if (spec.lambda == 0) throw std::invalid_argument("contract lambda must be >= 1");
    contracts.push_back(Frsc{Amount(scale_floor(deposit, spec.rho).sat() * spec.lambda), spec.lambda, spec.rho});
  }
  return FrscSet(std::move(contracts));
}

boost::rational<std::int64_t> effective_lambda(std::span<const ContractSpec> specs) {
  std::int64_t weighted = 0;
  for (const auto& s : specs) weighted += static_cast<std::int64_t>(s.rho.value()) * s.lambda;
  return {weighted, kPpmScale};
}

boost::rational<std::int64_t> effective_lambda(const FrscSet& set) {
  std::vector<ContractSpec> specs;
  specs.reserve(set.size());
  for (const auto& c : set.contracts()) specs.push_back({c.lambda, c.rho});
  return effective_lambda(specs);
}

Amount parity_fees(Amount next_claim, const SplitParams& params) {
  if (params.c().value() == 0) throw std::invalid_argument("parity fees undefined for contract share c = 0");
  const unsigned __int128 wide = static_cast<unsigned __int128>(next_claim.sat()) * kPpmScale;
  return Amount(static_cast<std::uint64_t>(wide / params.c().value()));
}

}  // namespace frsc
