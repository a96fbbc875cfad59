#pragma once

// Experiment runners. Experiments I-III replay a fee scenario on an honest
// single-miner chain and record how the contracts shape the miner's reward.
// Experiment IV plays repeated games between compliant and learning miners
// and looks for the compliant share at which undercutting stops paying.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "frsc/chain_sim.hpp"
#include "frsc/fee_model.hpp"
#include "frsc/frsc_core.hpp"
#include "frsc/learning.hpp"
#include "frsc/strategy_spec.hpp"

namespace frsc {

/// Rejected configuration value; `key()` names the offending setting.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

constexpr double kBlockRate = 1.0 / 600.0;

// ---------------------------------------------------------------------------
// Series runs (Experiments I-III)

struct SeriesRecord {
  std::uint32_t height = 0;
  double found_at = 0.0;
  Amount fees_in_mempool;  // available at the tip when the block was found
  Amount block_value;      // rewardT
  Amount next_claim;
  std::vector<Amount> claims;
  std::vector<Amount> nus;
};

struct SeriesConfig {
  FeeScenario scenario;
  SplitParams split;
  std::vector<ContractSpec> contracts;
  Amount genesis_fees{5'000'000'000};
  std::uint64_t blocks = 10'000;
  std::uint64_t seed = 42;
};

/// One compliant miner owning all hash power, contracts enabled.
std::vector<SeriesRecord> run_series(const SeriesConfig& config);

/// A named output of an experiment together with the file it was written to.
struct SeriesRun {
  std::string name;
  SeriesConfig config;
  std::vector<SeriesRecord> records;
  std::filesystem::path path;
};

struct Exp1Config {
  FeeScenario scenario = FeeScenario(scenarios::long_term(), true);
  std::vector<std::uint32_t> lambdas{2016, 5600};
  std::vector<Ppm> c_values{Ppm(500'000), Ppm(700'000), Ppm(900'000)};
  Amount genesis_fees{5'000'000'000};
  std::uint64_t blocks = 42'000;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "out";
};

std::vector<SeriesRun> run_exp1(const Exp1Config& config);

struct Exp2Config {
  FeeScenario scenario = FeeScenario(scenarios::long_term(), true);
  std::vector<ContractSpec> contracts{{1008, Ppm(70'000)}, {2016, Ppm(140'000)}, {4032, Ppm(280'000)},
                                      {8064, Ppm(510'000)}};
  std::vector<Ppm> c_values{Ppm(500'000), Ppm(700'000), Ppm(900'000)};
  Ppm rho_study_c{700'000};
  bool rho_study = true;
  Amount genesis_fees{5'000'000'000};
  std::uint64_t blocks = 42'000;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "out";
};

/// Per c value: the contract series plus a rho-normalised claim file. With
/// `rho_study`, also the correlated / equal / reversed rho variants.
std::vector<SeriesRun> run_exp2(const Exp2Config& config);

struct Exp3Config {
  FeeScenario scenario = FeeScenario(scenarios::triangle_wave(), true);
  std::vector<ContractSpec> single{{5292, Ppm(1'000'000)}};
  std::vector<ContractSpec> multi{{1008, Ppm(70'000)}, {2016, Ppm(190'000)}, {4032, Ppm(280'000)},
                                  {8064, Ppm(460'000)}};
  Ppm c{700'000};
  Amount genesis_fees{5'000'000'000};
  std::uint64_t blocks = 105'000;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "out";
};

struct Exp3Result {
  SeriesRun single;
  SeriesRun multi;
  std::vector<double> relative_diff;  // (multi - single) / single per block
  std::size_t min_fee_index = 0;      // last block inside the lowest-inflow hold
  std::size_t max_fee_index = 0;      // last block inside the highest-inflow hold
  std::filesystem::path diff_path;
};

/// Throws ConfigError("frsc") when the two configurations differ in
/// effective lambda.
Exp3Result run_exp3(const Exp3Config& config);

/// Index of the last record found inside [window.first, window.second).
std::optional<std::size_t> last_record_in(std::span<const SeriesRecord> records, std::pair<double, double> window);

// ---------------------------------------------------------------------------
// Games (Experiment IV)

struct GameSetup {
  std::vector<Miner> miners;
  std::uint64_t blocks = 1'000;
  FrscMode mode;
  std::optional<FrscSet> genesis;
};

struct GameResult {
  std::vector<Amount> earnings;  // per miner, main chain only
  double orphan_rate = 0.0;
  std::uint32_t main_chain_length = 0;
  Amount main_chain_fees;   // claimed fees summed over the main chain
  Amount main_chain_value;  // rewardT summed over the main chain
  Amount genesis_nu;
  std::optional<FrscSet> final_state;

  /// Mean earnings per miner for each strategy kind present in the game.
  std::vector<std::pair<StrategyKind, double>> per_strategy_mean(std::span<const Miner> miners) const;
};

/// Plays one game of `setup.blocks` block discoveries. `tree` is reset and
/// reused to keep its capacity.
GameResult play_game(const GameSetup& setup, const FeeScenario& scenario, Rng& rng, BlockTree& tree);

struct Exp4Config {
  std::uint32_t miners = 20;
  std::uint64_t blocks_per_game = 1'000;
  std::uint64_t games = 2'000;
  Ppm c{700'000};
  bool frsc_enabled = true;
  std::vector<ContractSpec> contracts{{2016, Ppm(1'000'000)}};
  Amount genesis_fees{5'000'000'000};
  FeeScenario scenario = FeeScenario(scenarios::constant(5'000'000'000, 600), false);
  double gamma = 0.1;
  Ppm kappa{500'000};
  std::vector<Ppm> fractions;  // compliant shares to sweep
  Ppm tail_share{200'000};     // trailing share of games that is measured
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Compliant shares start, start + step, ..., up to and including stop.
std::vector<Ppm> fraction_grid(Ppm start, Ppm stop, Ppm step);

struct StrategyTally {
  StrategyKind kind{};
  long double earnings = 0;  // satoshi
  long double exposure = 0;  // hash share x blocks per game, summed over plays
  std::uint64_t plays = 0;

  double mean_profit_per_block() const { return exposure > 0 ? static_cast<double>(earnings / exposure) : 0.0; }
};

struct Exp4Point {
  Ppm fraction;
  std::uint32_t compliant_miners = 0;
  std::vector<StrategyTally> tallies;  // strategies played in the measured tail, fixed kind order
  double orphan_rate = 0.0;            // mean over the measured tail

  const StrategyTally* tally(StrategyKind kind) const;
  /// No undercutting strategy out-earns default-compliant per unit of hash
  /// power. Without compliant miners this holds only if nobody undercut.
  bool undercutting_unprofitable() const;
};

struct Exp4Result {
  bool frsc_enabled = false;
  std::vector<Exp4Point> points;  // ascending fraction
  /// Smallest swept share from which undercutting stays unprofitable at
  /// every larger swept share.
  std::optional<Ppm> crossing;
};

/// Genesis balances for the next game given the previous game's orphan rate,
/// as the exact ratio (mined + orphaned) / mined applied to `base`.
FrscSet orphan_adjusted_genesis(const FrscSet& base, std::uint64_t mined, std::uint64_t orphaned);

Exp4Point run_exp4_point(const Exp4Config& config, Ppm fraction, std::uint64_t point_index);
Exp4Result run_exp4(const Exp4Config& config);

// ---------------------------------------------------------------------------
// CSV output

std::string series_csv_header(std::size_t contracts);
std::string series_csv(std::span<const SeriesRecord> records, std::size_t contracts);
std::string normalized_claims_csv(std::span<const SeriesRecord> records, std::span<const ContractSpec> contracts);
std::string exp3_diff_csv(const Exp3Result& result);
std::string exp4_summary_csv(std::span<const Exp4Result> results);

/// Writes `content` to `path`, creating parent directories. I/O failures throw
/// std::runtime_error naming the path.
void emit_csv(const std::string& content, const std::filesystem::path& path);

std::string format_ratio(double value, int decimals);

}  // namespace frsc
