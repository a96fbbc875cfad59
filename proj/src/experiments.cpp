#include "frsc/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "frsc/strategies.hpp"

namespace frsc {

namespace {

constexpr std::array<StrategyKind, 4> kAllKinds = {StrategyKind::kDefaultCompliant, StrategyKind::kPettyCompliant,
                                                   StrategyKind::kLazyFork, StrategyKind::kFunctionFork};

std::string ppm_tag(Ppm p) { return std::to_string(p.value()); }

std::string format_time(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", seconds);
  return buf;
}

// Exact decimal rendering of a ppm ratio, trailing zeros trimmed.
std::string format_ppm(Ppm p) {
  std::string out = std::to_string(p.value() / kPpmScale);
  std::uint32_t frac = p.value() % kPpmScale;
  if (frac == 0) return out;
  char buf[8];
  std::snprintf(buf, sizeof buf, "%06u", frac);
  std::string digits = buf;
  digits.erase(digits.find_last_not_of('0') + 1);
  return out + '.' + digits;
}

SeriesRun series_run(std::string name, SeriesConfig cfg, const std::filesystem::path& out_dir) {
  SeriesRun run{std::move(name), std::move(cfg), {}, {}};
  run.records = run_series(run.config);
  run.path = out_dir / (run.name + ".csv");
  emit_csv(series_csv(run.records, run.config.contracts.size()), run.path);
  return run;
}

void require_blocks(std::uint64_t blocks) {
  if (blocks == 0) throw ConfigError("blocks", "must be at least 1");
}

void require_c_values(std::span<const Ppm> values) {
  if (values.empty()) throw ConfigError("c", "at least one contract share is required");
}

void check_contracts(std::span<const ContractSpec> specs) {
  if (specs.empty()) throw ConfigError("frsc", "at least one contract is required");
  for (const auto& s : specs) {
    if (s.lambda == 0) throw ConfigError("frsc", "lambda must be >= 1");
  }
  try {
    require_unit_rho_sum(specs);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("frsc", e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<SeriesRecord> run_series(const SeriesConfig& config) {
  const FrscMode mode{true, config.split};
  BlockTree tree(init_genesis(config.genesis_fees, config.split, config.contracts));
  Rng rng(config.seed);

  std::vector<SeriesRecord> records;
  records.reserve(config.blocks);
  double now = 0.0;
  for (std::uint64_t i = 0; i < config.blocks; ++i) {
    now += sample_interval(rng, kBlockRate);
    const View view{tree, now, config.scenario, mode};
    const BlockId tip = longest_tip(tree);
    const Amount available = tree.available_at(tip, now, config.scenario);
    const Block& b = extend(tree, 0, default_compliant(view), config.scenario, mode, now);

    SeriesRecord r;
    r.height = b.height;
    r.found_at = b.found_at;
    r.fees_in_mempool = available;
    r.block_value = b.settlement.reward_total;
    r.next_claim = b.settlement.next_claim;
    r.claims = b.settlement.per_contract_claims;
    r.nus.reserve(b.frsc_after->size());
    for (const auto& c : b.frsc_after->contracts()) r.nus.push_back(c.nu);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<SeriesRun> run_exp1(const Exp1Config& config) {
  require_blocks(config.blocks);
  require_c_values(config.c_values);
  if (config.lambdas.empty()) throw ConfigError("frsc", "at least one lambda is required");
  std::vector<SeriesRun> runs;
  for (std::uint32_t lambda : config.lambdas) {
    if (lambda == 0) throw ConfigError("frsc", "lambda must be >= 1");
    for (Ppm c : config.c_values) {
      SeriesConfig cfg{config.scenario, SplitParams::from_contract_share(c), {{lambda, Ppm::one()}},
                       config.genesis_fees, config.blocks, config.seed};
      runs.push_back(
          series_run("exp1_lambda" + std::to_string(lambda) + "_c" + ppm_tag(c), std::move(cfg), config.out_dir));
    }
  }
  return runs;
}

std::vector<SeriesRun> run_exp2(const Exp2Config& config) {
  require_blocks(config.blocks);
  require_c_values(config.c_values);
  check_contracts(config.contracts);

  std::vector<SeriesRun> runs;
  auto add = [&](std::string name, Ppm c, std::vector<ContractSpec> specs) {
    SeriesConfig cfg{config.scenario, SplitParams::from_contract_share(c), std::move(specs), config.genesis_fees,
                     config.blocks, config.seed};
    auto run = series_run(std::move(name), std::move(cfg), config.out_dir);
    emit_csv(normalized_claims_csv(run.records, run.config.contracts),
             config.out_dir / (run.name + "_normalized.csv"));
    runs.push_back(std::move(run));
  };

  for (Ppm c : config.c_values) add("exp2_c" + ppm_tag(c), c, config.contracts);

  if (config.rho_study) {
    const std::size_t n = config.contracts.size();
    std::vector<ContractSpec> equal = config.contracts;
    std::vector<ContractSpec> reversed = config.contracts;
    for (std::size_t i = 0; i < n; ++i) {
      equal[i].rho = Ppm(kPpmScale / n + (i + 1 == n ? kPpmScale % n : 0));
      reversed[i].rho = config.contracts[n - 1 - i].rho;
    }
    add("exp2_rho_correlated", config.rho_study_c, config.contracts);
    add("exp2_rho_equal", config.rho_study_c, std::move(equal));
    add("exp2_rho_reversed", config.rho_study_c, std::move(reversed));
  }
  return runs;
}

std::optional<std::size_t> last_record_in(std::span<const SeriesRecord> records, std::pair<double, double> window) {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].found_at >= window.first && records[i].found_at < window.second) found = i;
  }
  return found;
}

Exp3Result run_exp3(const Exp3Config& config) {
  require_blocks(config.blocks);
  check_contracts(config.single);
  check_contracts(config.multi);
  if (effective_lambda(config.single) != effective_lambda(config.multi)) {
    throw ConfigError("frsc", "compared configurations must have the same effective lambda");
  }

  const auto split = SplitParams::from_contract_share(config.c);
  Exp3Result result{
      series_run("exp3_single",
                 {config.scenario, split, config.single, config.genesis_fees, config.blocks, config.seed},
                 config.out_dir),
      series_run("exp3_multi", {config.scenario, split, config.multi, config.genesis_fees, config.blocks, config.seed},
                 config.out_dir),
      {},
      0,
      0,
      {}};

  const auto& a = result.single.records;
  const auto& b = result.multi.records;
  result.relative_diff.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double base = static_cast<double>(a[i].next_claim.sat());
    const double diff = static_cast<double>(b[i].next_claim.sat()) - base;
    result.relative_diff.push_back(base > 0.0 ? diff / base : 0.0);
  }
  result.min_fee_index = last_record_in(a, config.scenario.min_rate_window()).value_or(0);
  result.max_fee_index = last_record_in(a, config.scenario.max_rate_window()).value_or(0);
  result.diff_path = config.out_dir / "exp3_relative_diff.csv";
  emit_csv(exp3_diff_csv(result), result.diff_path);
  return result;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<StrategyKind, double>> GameResult::per_strategy_mean(std::span<const Miner> miners) const {
  std::vector<std::pair<StrategyKind, double>> out;
  for (StrategyKind kind : kAllKinds) {
    long double sum = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < miners.size(); ++i) {
      if (miners[i].strategy.kind != kind) continue;
      sum += earnings[i].sat();
      ++n;
    }
    if (n > 0) out.emplace_back(kind, static_cast<double>(sum / n));
  }
  return out;
}

GameResult play_game(const GameSetup& setup, const FeeScenario& scenario, Rng& rng, BlockTree& tree) {
  if (setup.mode.enabled && !setup.genesis) throw std::invalid_argument("contract mode needs a genesis state");
  tree.reset(setup.mode.enabled ? setup.genesis : std::nullopt);

  double now = 0.0;
  for (std::uint64_t i = 0; i < setup.blocks; ++i) {
    now += sample_interval(rng, kBlockRate);
    const std::size_t w = pick_winner(rng, setup.miners);
    const View view{tree, now, scenario, setup.mode};
    extend(tree, static_cast<MinerId>(w), decide(setup.miners[w].strategy, view), scenario, setup.mode, now);
  }

  GameResult r;
  r.earnings.assign(setup.miners.size(), Amount(0));
  const BlockId tip = longest_tip(tree);
  for (BlockId id = tip; id != kGenesisId; id = tree.block(id).parent) {
    const Block& b = tree.block(id);
    r.earnings[b.miner] += b.settlement.reward_total;
    r.main_chain_value += b.settlement.reward_total;
  }
  const Block& t = tree.block(tip);
  r.main_chain_length = t.height;
  r.main_chain_fees = t.path_claimed;
  r.orphan_rate = orphan_rate(tree);
  if (setup.mode.enabled) {
    r.genesis_nu = tree.genesis().frsc_after->total_nu();
    r.final_state = t.frsc_after;
  }
  return r;
}

std::vector<Ppm> fraction_grid(Ppm start, Ppm stop, Ppm step) {
  if (step.value() == 0) throw ConfigError("fraction_grid", "step must be positive");
  if (start > stop) throw ConfigError("fraction_grid", "start must not exceed stop");
  std::vector<Ppm> grid;
  for (std::uint32_t v = start.value(); v <= stop.value(); v += step.value()) grid.emplace_back(v);
  return grid;
}

FrscSet orphan_adjusted_genesis(const FrscSet& base, std::uint64_t mined, std::uint64_t orphaned) {
  if (mined == 0) return base;
  return base.scaled(mined + orphaned, mined);
}

const StrategyTally* Exp4Point::tally(StrategyKind kind) const {
  for (const auto& t : tallies) {
    if (t.kind == kind) return &t;
  }
  return nullptr;
}

bool Exp4Point::undercutting_unprofitable() const {
  const StrategyTally* compliant = tally(StrategyKind::kDefaultCompliant);
  for (const auto& t : tallies) {
    if (!is_undercutting(t.kind)) continue;
    if (compliant == nullptr) return false;
    if (t.mean_profit_per_block() > compliant->mean_profit_per_block()) return false;
  }
  return true;
}

Exp4Point run_exp4_point(const Exp4Config& config, Ppm fraction, std::uint64_t point_index) {
  if (config.miners == 0) throw ConfigError("miners", "must be at least 1");
  if (config.games == 0) throw ConfigError("games", "must be at least 1");
  require_blocks(config.blocks_per_game);

  const std::uint32_t n = config.miners;
  const auto compliant = static_cast<std::uint32_t>(
      (static_cast<std::uint64_t>(fraction.value()) * n + kPpmScale / 2) / kPpmScale);

  GameSetup setup;
  auto& miners = setup.miners;
  miners.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    miners[i].id = i;
    miners[i].hash_power = Ppm(kPpmScale / n + (i < kPpmScale % n ? 1 : 0));
  }

  const std::vector<StrategySpec> arms{{StrategyKind::kPettyCompliant, config.kappa},
                                      {StrategyKind::kLazyFork, config.kappa},
                                      {StrategyKind::kFunctionFork, config.kappa}};
  std::vector<LearnerState> learners;
  for (std::uint32_t i = compliant; i < n; ++i) learners.push_back(LearnerState::uniform(arms, config.gamma));
  std::vector<std::size_t> chosen(learners.size(), 0);

  setup.blocks = config.blocks_per_game;
  setup.mode = FrscMode{config.frsc_enabled, SplitParams::from_contract_share(config.c)};
  std::optional<FrscSet> base;
  if (config.frsc_enabled) {
    check_contracts(config.contracts);
    base = init_genesis(config.genesis_fees, setup.mode.split, config.contracts);
    setup.genesis = base;
  }

  const std::uint64_t tail_games = std::max<std::uint64_t>(
      1, (config.games * config.tail_share.value() + kPpmScale - 1) / kPpmScale);
  const std::uint64_t tail_start = config.games - std::min(tail_games, config.games);

  Exp4Point point;
  point.fraction = fraction;
  point.compliant_miners = compliant;
  std::array<StrategyTally, 4> tallies{};
  for (std::size_t k = 0; k < kAllKinds.size(); ++k) tallies[k].kind = kAllKinds[k];
  double orphan_sum = 0.0;

  Rng rng(config.seed, point_index);
  BlockTree tree;
  for (std::uint64_t g = 0; g < config.games; ++g) {
    for (std::size_t l = 0; l < learners.size(); ++l) {
      chosen[l] = choose_arm(learners[l], rng);
      miners[compliant + l].strategy = learners[l].arms[chosen[l]];
    }

    const GameResult result = play_game(setup, config.scenario, rng, tree);

    for (std::size_t l = 0; l < learners.size(); ++l) {
      learners[l] = update(std::move(learners[l]), chosen[l], result.earnings[compliant + l]);
    }
    if (g >= tail_start) {
      for (std::uint32_t i = 0; i < n; ++i) {
        auto& t = tallies[static_cast<std::size_t>(miners[i].strategy.kind)];
        t.earnings += result.earnings[i].sat();
        t.exposure += miners[i].hash_power.as_double() * static_cast<long double>(config.blocks_per_game);
        ++t.plays;
      }
      orphan_sum += result.orphan_rate;
    }
    if (base) {
      const std::uint64_t mined = tree.size() - 1;
      setup.genesis = orphan_adjusted_genesis(*base, mined, mined - result.main_chain_length);
    }
  }

  for (const auto& t : tallies) {
    if (t.plays > 0) point.tallies.push_back(t);
  }
  point.orphan_rate = orphan_sum / static_cast<double>(config.games - tail_start);
  return point;
}

Exp4Result run_exp4(const Exp4Config& config) {
  Exp4Result result;
  result.frsc_enabled = config.frsc_enabled;
  std::vector<Ppm> fractions = config.fractions;
  if (fractions.empty()) throw ConfigError("fraction_grid", "no compliant fractions to sweep");
  std::sort(fractions.begin(), fractions.end());
  fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());

  result.points.resize(fractions.size());
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(fractions.size()));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned slot) {
    try {
      for (std::size_t i = next++; i < fractions.size(); i = next++) {
        result.points[i] = run_exp4_point(config, fractions[i], i);
      }
    } catch (...) {
      errors[slot] = std::current_exception();
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t i = result.points.size(); i-- > 0;) {
    if (!result.points[i].undercutting_unprofitable()) break;
    result.crossing = result.points[i].fraction;
  }
  return result;
}

// ---------------------------------------------------------------------------

std::string series_csv_header(std::size_t contracts) {
  std::string h = "height,found_at_s,fees_in_mempool_sat,block_value_sat,next_claim_sat";
  for (std::size_t i = 1; i <= contracts; ++i) h += ",claim_c" + std::to_string(i) + "_sat";
  for (std::size_t i = 1; i <= contracts; ++i) h += ",nu_c" + std::to_string(i) + "_sat";
  return h + '\n';
}

std::string series_csv(std::span<const SeriesRecord> records, std::size_t contracts) {
  std::string out = series_csv_header(contracts);
  for (const auto& r : records) {
    out += std::to_string(r.height) + ',' + format_time(r.found_at) + ',' + std::to_string(r.fees_in_mempool.sat()) +
           ',' + std::to_string(r.block_value.sat()) + ',' + std::to_string(r.next_claim.sat());
    for (Amount a : r.claims) out += ',' + std::to_string(a.sat());
    for (Amount a : r.nus) out += ',' + std::to_string(a.sat());
    out += '\n';
  }
  return out;
}

std::string normalized_claims_csv(std::span<const SeriesRecord> records, std::span<const ContractSpec> contracts) {
  std::string out = "height,found_at_s";
  for (std::size_t i = 1; i <= contracts.size(); ++i) out += ",norm_claim_c" + std::to_string(i) + "_sat";
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.height) + ',' + format_time(r.found_at);
    for (std::size_t i = 0; i < contracts.size(); ++i) {
      const std::uint32_t rho = contracts[i].rho.value();
      const unsigned __int128 wide = static_cast<unsigned __int128>(r.claims[i].sat()) * kPpmScale;
      out += ',' + (rho ? std::to_string(static_cast<std::uint64_t>(wide / rho)) : std::string("0"));
    }
    out += '\n';
  }
  return out;
}

std::string exp3_diff_csv(const Exp3Result& result) {
  std::string out = "height,found_at_s,fees_in_mempool_sat,next_claim_single_sat,next_claim_multi_sat,relative_diff\n";
  const auto& a = result.single.records;
  const auto& b = result.multi.records;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out += std::to_string(a[i].height) + ',' + format_time(a[i].found_at) + ',' +
           std::to_string(a[i].fees_in_mempool.sat()) + ',' + std::to_string(a[i].next_claim.sat()) + ',' +
           std::to_string(b[i].next_claim.sat()) + ',' + format_ratio(result.relative_diff[i], 9) + '\n';
  }
  return out;
}

std::string exp4_summary_csv(std::span<const Exp4Result> results) {
  std::string out = "compliant_fraction,frsc_enabled,strategy,mean_profit_sat_per_block,orphan_rate\n";
  for (const auto& res : results) {
    for (const auto& p : res.points) {
      for (const auto& t : p.tallies) {
        const auto profit = static_cast<std::uint64_t>(std::floor(std::max(0.0, t.mean_profit_per_block())));
        out += format_ppm(p.fraction) + ',' + (res.frsc_enabled ? "1" : "0") + ',' +
               std::string(strategy_name(t.kind)) + ',' + std::to_string(profit) + ',' +
               format_ratio(p.orphan_rate, 6) + '\n';
      }
    }
  }
  return out;
}

void emit_csv(const std::string& content, const std::filesystem::path& path) {
  try {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  } catch (const std::filesystem::filesystem_error& e) {
    throw std::runtime_error("cannot create directory for " + path.string() + ": " + e.what());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string format_ratio(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

}  // namespace frsc
