#pragma once

// Exp3 adversarial bandit over mining strategies. Each learning miner owns
// one state and updates it after every game with its own earnings.

#include <vector>

#include "frsc/amount.hpp"
#include "frsc/chain_sim.hpp"
#include "frsc/strategy_spec.hpp"

namespace frsc {

struct LearnerState {
  std::vector<StrategySpec> arms;
  std::vector<double> weights;
  double gamma = 0.1;
  double reward_scale = 0.0;  // running maximum of observed game rewards, in satoshi

  /// Uniform weights over `arms`. Throws std::invalid_argument for an empty
  /// arm list or gamma outside (0, 1].
  static LearnerState uniform(std::vector<StrategySpec> arms, double gamma);
};

/// p_i = (1 - gamma) * w_i / sum(w) + gamma / K.
std::vector<double> arm_probabilities(const LearnerState& state);

/// Draws an arm index from arm_probabilities.
std::size_t choose_arm(const LearnerState& state, Rng& rng);

/// Importance-weighted update of the chosen arm with the game reward scaled
/// into [0, 1] by the running maximum.
LearnerState update(LearnerState state, std::size_t arm, Amount game_reward);

}  // namespace frsc
