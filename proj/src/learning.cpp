#include "frsc/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace frsc {

namespace {

constexpr double kWeightCeiling = 1e200;

}  // namespace

LearnerState LearnerState::uniform(std::vector<StrategySpec> arms, double gamma) {
  if (arms.empty()) throw std::invalid_argument("learner needs at least one arm");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("exp3 gamma must lie in (0, 1]");
  LearnerState s;
  s.weights.assign(arms.size(), 1.0);
  s.arms = std::move(arms);
  s.gamma = gamma;
  return s;
}

std::vector<double> arm_probabilities(const LearnerState& state) {
  const double k = static_cast<double>(state.weights.size());
  const double total = std::accumulate(state.weights.begin(), state.weights.end(), 0.0);
  std::vector<double> p(state.weights.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = (1.0 - state.gamma) * state.weights[i] / total + state.gamma / k;
  }
  return p;
}

std::size_t choose_arm(const LearnerState& state, Rng& rng) {
  const auto p = arm_probabilities(state);
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return p.size() - 1;
}

LearnerState update(LearnerState state, std::size_t arm, Amount game_reward) {
  if (arm >= state.weights.size()) throw std::out_of_range("exp3 arm index out of range");
  const double reward = static_cast<double>(game_reward.sat());
  state.reward_scale = std::max(state.reward_scale, reward);
  const double x = state.reward_scale > 0.0 ? std::clamp(reward / state.reward_scale, 0.0, 1.0) : 0.0;
  if (x == 0.0) return state;

  const double k = static_cast<double>(state.weights.size());
  const double p = arm_probabilities(state)[arm];
  state.weights[arm] *= std::exp(state.gamma * x / (k * p));

  const double total = std::accumulate(state.weights.begin(), state.weights.end(), 0.0);
  if (total > kWeightCeiling) {
    const double top = *std::max_element(state.weights.begin(), state.weights.end());
    for (auto& w : state.weights) w = std::max(w / top, std::numeric_limits<double>::min());
  }
  return state;
}

}  // namespace frsc
