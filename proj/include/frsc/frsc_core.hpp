#pragma once

// Fee-redistribution contracts: a share of every block's fees is deposited
// into one or more contracts, and each contract pays the next block's miner
// nu / lambda of its balance. All arithmetic is integer satoshi with floor
// division; remainders stay inside the contracts.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "frsc/amount.hpp"

namespace frsc {

struct Frsc {
  Amount nu;               // accumulated balance
  std::uint32_t lambda{};  // sliding-window length in blocks, >= 1
  Ppm rho;                 // share of each deposit

  friend bool operator==(const Frsc&, const Frsc&) = default;
};

/// Lambda and rho of one contract, before a balance is assigned.
struct ContractSpec {
  std::uint32_t lambda{};
  Ppm rho;

  friend bool operator==(const ContractSpec&, const ContractSpec&) = default;
};

/// Non-empty, ordered set of contracts whose rho values sum to exactly 10^6.
/// The order is fixed at construction; the last contract absorbs deposit
/// rounding remainders.
class FrscSet {
 public:
  explicit FrscSet(std::vector<Frsc> contracts);

  std::span<const Frsc> contracts() const { return contracts_; }
  std::size_t size() const { return contracts_.size(); }
  const Frsc& operator[](std::size_t i) const { return contracts_[i]; }
  Amount total_nu() const;

  /// Same lambda/rho layout with every balance multiplied by (num / den),
  /// rounded half-up.
  FrscSet scaled(std::uint64_t num, std::uint64_t den) const;

  friend bool operator==(const FrscSet&, const FrscSet&) = default;

 private:
  std::vector<Frsc> contracts_;
};

/// Contract share c (deposited) and miner share m; c + m = 10^6 ppm.
class SplitParams {
 public:
  SplitParams() : c_(Ppm(0)), m_(Ppm::one()) {}
  SplitParams(Ppm c, Ppm m);
  static SplitParams from_contract_share(Ppm c) { return {c, c.complement()}; }

  Ppm c() const { return c_; }
  Ppm m() const { return m_; }

 private:
  Ppm c_;
  Ppm m_;
};

struct BlockSettlement {
  Amount reward_total;
  Amount next_claim;
  Amount miner_direct;
  Amount deposit_total;
  std::vector<Amount> per_contract_claims;
  std::vector<Amount> per_contract_deposits;
};

/// floor(nu / lambda).
Amount partial_claim(const Frsc& frsc);

/// Sum of partial claims over the set.
Amount next_claim(const FrscSet& set);

/// Settles a block carrying `block_fees` against the contract state before it
/// and returns the settlement together with the state after it.
std::pair<BlockSettlement, FrscSet> apply_block(const FrscSet& set, Amount block_fees, const SplitParams& params);

/// rewardT for a block with `block_fees` mined on top of `set`, without
/// materialising the new state.
Amount reward_total(const FrscSet& set, Amount block_fees, const SplitParams& params);

/// Genesis balances nu = floor(floor(mean_fees * c) * rho) * lambda.
/// Throws std::invalid_argument when the rho values do not sum to 10^6.
FrscSet init_genesis(Amount mean_fees, const SplitParams& params, std::span<const ContractSpec> specs);

/// Exact sum of rho_i * lambda_i, in blocks.
boost::rational<std::int64_t> effective_lambda(const FrscSet& set);
boost::rational<std::int64_t> effective_lambda(std::span<const ContractSpec> specs);

/// Block-fee level at which rewardT equals the full fees: floor(next_claim / c).
/// Throws std::invalid_argument for c = 0.
Amount parity_fees(Amount next_claim, const SplitParams& params);

/// Throws std::invalid_argument unless the rho values sum to exactly 10^6.
void require_unit_rho_sum(std::span<const ContractSpec> specs);

}  // namespace frsc
