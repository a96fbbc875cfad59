#include "frsc/strategies.hpp"

#include <array>
#include <stdexcept>

namespace frsc {

namespace {

constexpr std::array<std::string_view, 4> kNames = {"default_compliant", "petty_compliant", "lazy_fork",
                                                     "function_fork"};

Amount claimable_at(const View& view, BlockId parent) {
  return claimable_fees(view.scenario, view.tree.available_at(parent, view.now, view.scenario));
}

Amount half(Amount a) { return Amount(a.sat() / 2); }

}  // namespace

std::string_view strategy_name(StrategyKind kind) { return kNames.at(static_cast<std::size_t>(kind)); }

std::optional<StrategyKind> strategy_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<StrategyKind>(i);
  }
  return std::nullopt;
}

Amount block_reward(const View& view, BlockId parent, Amount claim) {
  if (!view.mode.enabled) return claim;
  const auto& state = view.tree.block(parent).frsc_after;
  if (!state) throw std::logic_error("contract mode enabled but block has no contract state");
  return reward_total(*state, claim, view.mode.split);
}

StrategyDecision default_compliant(const View& view) {
  const BlockId tip = longest_tip(view.tree);
  return {tip, claimable_at(view, tip)};
}

StrategyDecision petty_compliant(const View& view) {
  const BlockId oldest = longest_tip(view.tree);
  StrategyDecision best{oldest, claimable_at(view, oldest)};
  Amount best_reward = block_reward(view, oldest, best.claim);
  for (BlockId tip : view.tree.max_height_tips()) {
    if (tip == oldest) continue;
    const Amount claim = claimable_at(view, tip);
    const Amount reward = block_reward(view, tip, claim);
    const Block& cand = view.tree.block(tip);
    const Block& cur = view.tree.block(best.parent);
    const bool older = cand.found_at < cur.found_at || (cand.found_at == cur.found_at && tip < best.parent);
    if (reward > best_reward || (reward == best_reward && older)) {
      best = {tip, claim};
      best_reward = reward;
    }
  }
  return best;
}

StrategyDecision lazy_fork(const View& view) {
  const BlockId tip = longest_tip(view.tree);
  const StrategyDecision extend_tip{tip, half(claimable_at(view, tip))};
  if (tip == kGenesisId) return extend_tip;

  const BlockId parent = view.tree.block(tip).parent;
  const StrategyDecision undercut{parent, half(claimable_at(view, parent))};
  if (block_reward(view, undercut.parent, undercut.claim) > block_reward(view, extend_tip.parent, extend_tip.claim)) {
    return undercut;
  }
  return extend_tip;
}

StrategyDecision function_fork(const View& view, Ppm kappa) {
  const BlockId tip = longest_tip(view.tree);
  const Block& t = view.tree.block(tip);
  const BlockId parent = (tip != kGenesisId && t.claimed_fees.sat() > 0) ? t.parent : tip;
  return {parent, scale_floor(claimable_at(view, parent), kappa.complement())};
}

StrategyDecision decide(const StrategySpec& spec, const View& view) {
  switch (spec.kind) {
    case StrategyKind::kDefaultCompliant:
      return default_compliant(view);
    case StrategyKind::kPettyCompliant:
      return petty_compliant(view);
    case StrategyKind::kLazyFork:
      return lazy_fork(view);
    case StrategyKind::kFunctionFork:
      return function_fork(view, spec.kappa);
  }
  throw std::logic_error("unknown strategy kind");
}

}  // namespace frsc
