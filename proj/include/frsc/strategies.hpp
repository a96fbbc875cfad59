#pragma once

// Miner decision procedures. A decision is taken when the miner wins the
// race: it names the parent block and the fees to claim. Profit comparisons
// use the full reward a block would pay (contract claim plus the miner's
// direct share), so enabling contracts changes the incentives.

#include "frsc/chain_sim.hpp"
#include "frsc/strategy_spec.hpp"

namespace frsc {

/// Read-only view of the world at decision time.
struct View {
  const BlockTree& tree;
  double now;
  const FeeScenario& scenario;
  const FrscMode& mode;
};

/// Reward a block on top of `parent` carrying `claim` would pay its miner.
Amount block_reward(const View& view, BlockId parent, Amount claim);

/// Longest chain (oldest tie-break), every claimable fee.
StrategyDecision default_compliant(const View& view);

/// Longest chain, but among equal-height tips the one paying the most.
StrategyDecision petty_compliant(const View& view);

/// Extends the tip or undercuts it, whichever pays more, and always leaves
/// half of the claimable fees behind. Ties extend.
StrategyDecision lazy_fork(const View& view);

/// Undercuts whenever the tip claimed any fees, leaving `kappa` of the
/// claimable fees to lure the next miner; otherwise extends the tip.
StrategyDecision function_fork(const View& view, Ppm kappa);

StrategyDecision decide(const StrategySpec& spec, const View& view);

}  // namespace frsc
