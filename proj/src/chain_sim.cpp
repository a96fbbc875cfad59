#include "frsc/chain_sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace frsc {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

BlockTree::BlockTree(std::optional<FrscSet> genesis_state) { reset(std::move(genesis_state)); }

void BlockTree::reset(std::optional<FrscSet> genesis_state) {
  blocks_.clear();
  tips_.clear();
  Block g;
  g.frsc_after = std::move(genesis_state);
  blocks_.push_back(std::move(g));
  tips_.push_back(kGenesisId);
}

Amount BlockTree::available_at(BlockId id, double now, const FeeScenario& scenario) const {
  const Block& b = blocks_.at(id);
  return arrived_fees(scenario, std::max(now, b.found_at)) - b.path_claimed;
}

const Block& BlockTree::append(BlockId parent, MinerId miner, double found_at, Amount claimed, Amount rem_balance,
                               BlockSettlement settlement, std::optional<FrscSet> frsc_after) {
  if (!contains(parent)) throw std::logic_error("unknown parent block " + std::to_string(parent));
  const Block& p = blocks_[parent];
  if (found_at < p.found_at) throw std::logic_error("block found before its parent");

  Block b;
  b.id = static_cast<BlockId>(blocks_.size());
  b.parent = parent;
  b.height = p.height + 1;
  b.miner = miner;
  b.found_at = found_at;
  b.claimed_fees = claimed;
  b.path_claimed = p.path_claimed + claimed;
  b.rem_balance = rem_balance;
  b.settlement = std::move(settlement);
  b.frsc_after = std::move(frsc_after);

  const std::uint32_t top = blocks_[tips_.front()].height;
  if (b.height > top) {
    tips_.clear();
    tips_.push_back(b.id);
  } else if (b.height == top) {
    tips_.push_back(b.id);
  }
  blocks_.push_back(std::move(b));
  return blocks_.back();
}

std::vector<BlockId> BlockTree::path_to(BlockId tip) const {
  std::vector<BlockId> path(blocks_.at(tip).height + 1);
  for (BlockId id = tip;; id = blocks_[id].parent) {
    path[blocks_[id].height] = id;
    if (id == kGenesisId) break;
  }
  return path;
}

double sample_interval(Rng& rng, double total_rate) {
  if (!(total_rate > 0.0)) throw std::invalid_argument("block arrival rate must be positive");
  // 1 - u lies in (0, 1], so the log is finite.
  return -std::log1p(-rng.uniform01()) / total_rate;
}

std::size_t pick_winner(Rng& rng, std::span<const Miner> miners) {
  if (miners.empty()) throw std::invalid_argument("no miners");
  const std::uint64_t draw = rng.below(kPpmScale);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < miners.size(); ++i) {
    acc += miners[i].hash_power.value();
    if (draw < acc) return i;
  }
  throw std::invalid_argument("miner hash powers must sum to 1000000 ppm");
}

const Block& extend(BlockTree& tree, MinerId winner, const StrategyDecision& decision, const FeeScenario& scenario,
                    const FrscMode& mode, double now) {
  if (!tree.contains(decision.parent)) {
    throw std::logic_error("strategy chose unknown parent block " + std::to_string(decision.parent));
  }
  const Block& parent = tree.block(decision.parent);
  const Amount available = tree.available_at(decision.parent, now, scenario);
  if (decision.claim > claimable_fees(scenario, available)) {
    throw std::logic_error("strategy claimed " + std::to_string(decision.claim.sat()) + " sat but only " +
                           std::to_string(claimable_fees(scenario, available).sat()) + " sat are claimable");
  }
  const Amount rem_balance = available - decision.claim;

  if (mode.enabled) {
    if (!parent.frsc_after) throw std::logic_error("contract mode enabled but parent block has no contract state");
    auto [settlement, next] = apply_block(*parent.frsc_after, decision.claim, mode.split);
    return tree.append(decision.parent, winner, now, decision.claim, rem_balance, std::move(settlement),
                       std::move(next));
  }
  BlockSettlement settlement;
  settlement.reward_total = decision.claim;
  settlement.miner_direct = decision.claim;
  return tree.append(decision.parent, winner, now, decision.claim, rem_balance, std::move(settlement), std::nullopt);
}

BlockId longest_tip(const BlockTree& tree) {
  const auto tips = tree.max_height_tips();
  BlockId best = tips.front();
  for (BlockId id : tips.subspan(1)) {
    const Block& cand = tree.block(id);
    const Block& cur = tree.block(best);
    if (cand.found_at < cur.found_at || (cand.found_at == cur.found_at && id < best)) best = id;
  }
  return best;
}

double orphan_rate(const BlockTree& tree) {
  const std::size_t mined = tree.size() - 1;
  if (mined == 0) return 0.0;
  const std::size_t main_chain = tree.block(longest_tip(tree)).height;
  return static_cast<double>(mined - main_chain) / static_cast<double>(mined);
}

}  // namespace frsc
