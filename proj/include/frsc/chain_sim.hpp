#pragma once

// Block tree and proof-of-work race. One global exponential clock drives
// block discovery; the winner is drawn in proportion to hash power. Every
// block carries the contract state after it, so competing branches never
// share state.

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "frsc/amount.hpp"
#include "frsc/fee_model.hpp"
#include "frsc/frsc_core.hpp"
#include "frsc/strategy_spec.hpp"

namespace frsc {

using BlockId = std::uint32_t;
using MinerId = std::uint32_t;

constexpr BlockId kGenesisId = 0;
constexpr BlockId kNoParent = std::numeric_limits<BlockId>::max();
constexpr MinerId kNoMiner = std::numeric_limits<MinerId>::max();

/// Deterministic random stream. Draws are built from raw 64-bit engine output
/// so results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// Contract mode of a simulation. When disabled the miner keeps the full
/// claimed fees.
struct FrscMode {
  bool enabled = false;
  SplitParams split;
};

struct Block {
  BlockId id = kGenesisId;
  BlockId parent = kNoParent;
  std::uint32_t height = 0;
  MinerId miner = kNoMiner;
  double found_at = 0.0;
  Amount claimed_fees;
  Amount path_claimed;  // claimed fees summed over the root path, this block included
  Amount rem_balance;   // fees left in this branch's mempool at found_at
  BlockSettlement settlement;
  std::optional<FrscSet> frsc_after;
};

class BlockTree {
 public:
  explicit BlockTree(std::optional<FrscSet> genesis_state = std::nullopt);

  /// Drops every block but a fresh genesis. Keeps allocated capacity.
  void reset(std::optional<FrscSet> genesis_state);

  const Block& block(BlockId id) const { return blocks_.at(id); }
  const Block& genesis() const { return blocks_.front(); }
  std::span<const Block> blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  bool contains(BlockId id) const { return id < blocks_.size(); }

  /// Tips at maximal height, oldest first.
  std::span<const BlockId> max_height_tips() const { return tips_; }
  std::uint32_t max_height() const { return blocks_[tips_.front()].height; }

  /// Fees a miner could still claim on top of `id` at time `now`.
  Amount available_at(BlockId id, double now, const FeeScenario& scenario) const;

  /// Appends a block on top of `parent`; checks only structural invariants.
  const Block& append(BlockId parent, MinerId miner, double found_at, Amount claimed, Amount rem_balance,
                      BlockSettlement settlement, std::optional<FrscSet> frsc_after);

  /// Block ids from genesis to `tip`, inclusive.
  std::vector<BlockId> path_to(BlockId tip) const;

 private:
  std::vector<Block> blocks_;
  std::vector<BlockId> tips_;
};

struct Miner {
  MinerId id = 0;
  Ppm hash_power;
  StrategySpec strategy;
};

/// The parent to build on and the fees to put in the new block.
struct StrategyDecision {
  BlockId parent = kGenesisId;
  Amount claim;

  friend bool operator==(const StrategyDecision&, const StrategyDecision&) = default;
};

/// Exponential inter-arrival time with mean 1 / total_rate seconds.
double sample_interval(Rng& rng, double total_rate);

/// Index into `miners`, drawn with probability hash_power / 10^6.
std::size_t pick_winner(Rng& rng, std::span<const Miner> miners);

/// Settles and appends the block described by `decision`. Throws
/// std::logic_error if the parent is unknown or the claim exceeds what the
/// mempool allows at that parent.
const Block& extend(BlockTree& tree, MinerId winner, const StrategyDecision& decision, const FeeScenario& scenario,
                    const FrscMode& mode, double now);

/// Tip of maximal height; ties go to the earliest found, then lowest id.
BlockId longest_tip(const BlockTree& tree);

/// Share of non-genesis blocks that are not on the path to longest_tip.
/// Returns 0 for a tree holding only genesis.
double orphan_rate(const BlockTree& tree);

}  // namespace frsc
