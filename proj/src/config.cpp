#include "frsc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace frsc {

namespace {

constexpr std::array<std::string_view, 5> kCommands = {"exp1", "exp2", "exp3", "exp4", "run"};

constexpr std::array<std::string_view, 16> kKeys = {
    "seed",       "out_dir",   "scenario", "c",     "frsc",          "miners",       "blocks",       "games",
    "full_mempool", "block_cap", "gamma",  "kappa", "fraction_grid", "frsc_enabled", "genesis_fees", "threads"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) return parts;
    s = s.substr(pos + 1);
  }
}

std::uint64_t parse_uint(const std::string& key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

Ppm parse_ppm(const std::string& key, std::string_view text) {
  const std::uint64_t v = parse_uint(key, text);
  if (v > kPpmScale) {
    throw ConfigError(key, "ppm value must lie in [0, 1000000], got " + std::to_string(v));
  }
  return Ppm(static_cast<std::uint32_t>(v));
}

bool parse_bool(const std::string& key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + std::string(text) + "'");
}

ContractSpec parse_contract(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError("frsc", "expected 'lambda,rho_ppm', got '" + std::string(text) + "'");
  const std::uint64_t lambda = parse_uint("frsc", parts[0]);
  if (lambda == 0 || lambda > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("frsc", "lambda must be a positive 32-bit integer, got " + std::string(parts[0]));
  }
  return {static_cast<std::uint32_t>(lambda), parse_ppm("frsc", parts[1])};
}

std::vector<Ppm> parse_grid(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ConfigError("fraction_grid", "expected 'start,stop,step' in ppm");
  return fraction_grid(parse_ppm("fraction_grid", parts[0]), parse_ppm("fraction_grid", parts[1]),
                       parse_ppm("fraction_grid", parts[2]));
}

using Settings = std::map<std::string, std::vector<std::string>, std::less<>>;

Settings parse_file(std::string_view text) {
  Settings settings;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ConfigError(key, "unknown key (config line " + std::to_string(line_no) + ")");
    }
    auto& values = settings[key];
    if (key != "frsc" && !values.empty()) {
      throw ConfigError(key, "set more than once (config line " + std::to_string(line_no) + ")");
    }
    values.emplace_back(trim(line.substr(eq + 1)));
  }
  return settings;
}

std::uint64_t default_blocks(Command command) {
  switch (command) {
    case Command::kExp1:
    case Command::kExp2:
      return 40'000;
    case Command::kExp3:
      return 105'000;
    case Command::kExp4:
      return 1'000;
    case Command::kRun:
      return 10'000;
  }
  return 10'000;
}

void reject_frsc(const RunConfig& cfg) {
  if (!cfg.frsc.empty()) {
    throw ConfigError("frsc", std::string("contract layout is fixed for ") + std::string(command_name(cfg.command)) +
                                  "; use the run command for custom contracts");
  }
}

}  // namespace

std::string_view command_name(Command command) { return kCommands.at(static_cast<std::size_t>(command)); }

RunConfig parse_config(std::span<const std::string> args, std::optional<std::string_view> file_text) {
  CLI::App app{"Fee-redistribution contract mining simulator", "frsc-sim"};
  std::string command;
  std::optional<std::string> seed, out_dir, config_path, scenario, c, miners, blocks, games, block_cap, gamma, kappa,
      grid, genesis_fees, threads;
  std::vector<std::string> frsc;
  bool full_mempool = false, no_full_mempool = false, no_frsc = false;

  app.add_option("command", command, "exp1 | exp2 | exp3 | exp4 | run")->required();
  app.add_option("--seed", seed, "RNG seed (default 42)");
  app.add_option("--out-dir", out_dir, "output directory (default ./out)");
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--scenario", scenario, "fee scenario file (frsc-scenario v1)");
  app.add_option("--c", c, "contract share of block fees, ppm");
  app.add_option("--frsc", frsc, "contract as lambda,rho_ppm; repeatable, order significant");
  app.add_option("--miners", miners, "number of miners (exp4)");
  app.add_option("--blocks", blocks, "blocks per run, or per game for exp4");
  app.add_option("--games", games, "games per sweep point (exp4)");
  app.add_flag("--full-mempool", full_mempool, "cap claimable fees per block");
  app.add_flag("--no-full-mempool", no_full_mempool, "fees per block bounded only by elapsed time");
  app.add_option("--block-cap", block_cap, "per-block fee cap in satoshi");
  app.add_option("--gamma", gamma, "exp3 exploration rate, ppm");
  app.add_option("--kappa", kappa, "share of fees a function-fork miner leaves, ppm");
  app.add_option("--fraction-grid", grid, "compliant fractions start,stop,step in ppm");
  app.add_flag("--no-frsc", no_frsc, "disable the contracts");
  app.add_option("--genesis-fees", genesis_fees, "expected per-block fees used to seed contracts, satoshi");
  app.add_option("--threads", threads, "worker threads for exp4 sweeps (0 = all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError("args", e.what());
  }

  RunConfig cfg;
  const auto cmd = std::find(kCommands.begin(), kCommands.end(), command);
  if (cmd == kCommands.end()) throw ConfigError("command", "unknown command '" + command + "'");
  cfg.command = static_cast<Command>(std::distance(kCommands.begin(), cmd));

  const Settings file = file_text ? parse_file(*file_text) : Settings{};
  auto pick = [&](std::string_view key, const std::optional<std::string>& flag) -> std::optional<std::string> {
    if (flag) return flag;
    if (auto it = file.find(key); it != file.end()) return it->second.front();
    return std::nullopt;
  };

  if (auto v = pick("seed", seed)) cfg.seed = parse_uint("seed", *v);
  if (auto v = pick("out_dir", out_dir)) cfg.out_dir = *v;
  if (auto v = pick("scenario", scenario)) {
    cfg.scenario_path = *v;
    if (!std::filesystem::is_regular_file(*cfg.scenario_path)) {
      throw ConfigError("scenario", "file not found: " + *v);
    }
  }
  if (auto v = pick("c", c)) {
    cfg.c = parse_ppm("c", *v);
    cfg.c_given = true;
  }

  std::vector<std::string> frsc_values = frsc;
  if (frsc_values.empty()) {
    if (auto it = file.find("frsc"); it != file.end()) frsc_values = it->second;
  }
  for (const auto& f : frsc_values) cfg.frsc.push_back(parse_contract(f));
  if (!cfg.frsc.empty()) {
    std::uint64_t sum = 0;
    for (const auto& s : cfg.frsc) sum += s.rho.value();
    if (sum != kPpmScale) {
      throw ConfigError("frsc", "rho values must sum to exactly 1000000 ppm, got " + std::to_string(sum));
    }
  }

  if (auto v = pick("miners", miners)) {
    const auto n = parse_uint("miners", *v);
    if (n == 0 || n > kPpmScale) throw ConfigError("miners", "must lie in [1, 1000000]");
    cfg.miners = static_cast<std::uint32_t>(n);
  }
  cfg.blocks = default_blocks(cfg.command);
  if (auto v = pick("blocks", blocks)) cfg.blocks = parse_uint("blocks", *v);
  if (cfg.blocks == 0) throw ConfigError("blocks", "must be at least 1");
  if (auto v = pick("games", games)) cfg.games = parse_uint("games", *v);
  if (cfg.games == 0) throw ConfigError("games", "must be at least 1");

  cfg.full_mempool = cfg.command != Command::kExp4;
  if (full_mempool && no_full_mempool) {
    throw ConfigError("full_mempool", "--full-mempool and --no-full-mempool are exclusive");
  }
  if (full_mempool || no_full_mempool) {
    cfg.full_mempool = full_mempool;
  } else if (auto it = file.find("full_mempool"); it != file.end()) {
    cfg.full_mempool = parse_bool("full_mempool", it->second.front());
  }
  if (auto v = pick("block_cap", block_cap)) cfg.block_cap = Amount(parse_uint("block_cap", *v));
  if (cfg.full_mempool && cfg.block_cap.sat() == 0) {
    throw ConfigError("block_cap", "must be positive when the full-mempool mode is on");
  }

  if (auto v = pick("gamma", gamma)) cfg.gamma = parse_ppm("gamma", *v);
  if (cfg.gamma.value() == 0) throw ConfigError("gamma", "must be positive");
  if (auto v = pick("kappa", kappa)) cfg.kappa = parse_ppm("kappa", *v);

  cfg.fraction_grid = fraction_grid(Ppm(0), Ppm::one(), Ppm(50'000));
  if (auto v = pick("fraction_grid", grid)) cfg.fraction_grid = parse_grid(*v);

  if (no_frsc) {
    cfg.frsc_enabled = false;
  } else if (auto it = file.find("frsc_enabled"); it != file.end()) {
    cfg.frsc_enabled = parse_bool("frsc_enabled", it->second.front());
  }
  if (auto v = pick("genesis_fees", genesis_fees)) cfg.genesis_fees = Amount(parse_uint("genesis_fees", *v));
  if (auto v = pick("threads", threads)) cfg.threads = static_cast<unsigned>(parse_uint("threads", *v));

  switch (cfg.command) {
    case Command::kExp1:
    case Command::kExp2:
    case Command::kExp3:
      reject_frsc(cfg);
      if (!cfg.frsc_enabled) {
        throw ConfigError("frsc_enabled", std::string(command_name(cfg.command)) + " measures the contracts");
      }
      break;
    case Command::kExp4:
    case Command::kRun:
      if (cfg.frsc.empty()) cfg.frsc = {{2016, Ppm::one()}};
      break;
  }
  return cfg;
}

RunConfig parse_config(std::span<const std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (!path) return parse_config(args, std::nullopt);
  std::ifstream in(*path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read config file " + *path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(args, text.str());
}

FeeScenario build_scenario(const RunConfig& cfg) {
  std::vector<InflowSegment> segments;
  if (cfg.scenario_path) {
    try {
      segments = load_scenario(*cfg.scenario_path);
    } catch (const std::runtime_error& e) {
      throw ConfigError("scenario", e.what());
    }
  } else {
    switch (cfg.command) {
      case Command::kExp3:
        segments = scenarios::triangle_wave();
        break;
      case Command::kExp4:
        segments = scenarios::constant(5'000'000'000, 600);
        break;
      default:
        segments = scenarios::long_term();
        break;
    }
  }
  return FeeScenario(std::move(segments), cfg.full_mempool, cfg.block_cap);
}

Exp1Config to_exp1(const RunConfig& cfg) {
  Exp1Config e;
  e.scenario = build_scenario(cfg);
  if (cfg.c_given) e.c_values = {cfg.c};
  e.genesis_fees = cfg.genesis_fees;
  e.blocks = cfg.blocks;
  e.seed = cfg.seed;
  e.out_dir = cfg.out_dir;
  return e;
}

Exp2Config to_exp2(const RunConfig& cfg) {
  Exp2Config e;
  e.scenario = build_scenario(cfg);
  if (cfg.c_given) {
    e.c_values = {cfg.c};
    e.rho_study_c = cfg.c;
  }
  e.genesis_fees = cfg.genesis_fees;
  e.blocks = cfg.blocks;
  e.seed = cfg.seed;
  e.out_dir = cfg.out_dir;
  return e;
}

Exp3Config to_exp3(const RunConfig& cfg) {
  Exp3Config e;
  e.scenario = build_scenario(cfg);
  e.c = cfg.c;
  e.genesis_fees = cfg.genesis_fees;
  e.blocks = cfg.blocks;
  e.seed = cfg.seed;
  e.out_dir = cfg.out_dir;
  return e;
}

Exp4Config to_exp4(const RunConfig& cfg) {
  Exp4Config e;
  e.miners = cfg.miners;
  e.blocks_per_game = cfg.blocks;
  e.games = cfg.games;
  e.c = cfg.c;
  e.frsc_enabled = cfg.frsc_enabled;
  e.contracts = cfg.frsc;
  e.genesis_fees = cfg.genesis_fees;
  e.scenario = build_scenario(cfg);
  e.gamma = cfg.gamma.as_double();
  e.kappa = cfg.kappa;
  e.fractions = cfg.fraction_grid;
  e.seed = cfg.seed;
  e.threads = cfg.threads;
  return e;
}

SeriesConfig to_series(const RunConfig& cfg) {
  return SeriesConfig{build_scenario(cfg), SplitParams::from_contract_share(cfg.c), cfg.frsc, cfg.genesis_fees,
                      cfg.blocks, cfg.seed};
}

void run_command(const RunConfig& cfg, std::ostream& log) {
  switch (cfg.command) {
    case Command::kExp1:
      for (const auto& run : run_exp1(to_exp1(cfg))) log << "wrote " << run.path.string() << '\n';
      return;
    case Command::kExp2:
      for (const auto& run : run_exp2(to_exp2(cfg))) log << "wrote " << run.path.string() << '\n';
      return;
    case Command::kExp3: {
      const auto r = run_exp3(to_exp3(cfg));
      log << "wrote " << r.single.path.string() << '\n'
          << "wrote " << r.multi.path.string() << '\n'
          << "wrote " << r.diff_path.string() << '\n'
          << "relative difference at lowest-fee block " << r.single.records[r.min_fee_index].height << ": "
          << format_ratio(r.relative_diff[r.min_fee_index], 6) << '\n'
          << "relative difference at highest-fee block " << r.single.records[r.max_fee_index].height << ": "
          << format_ratio(r.relative_diff[r.max_fee_index], 6) << '\n';
      return;
    }
    case Command::kExp4: {
      const Exp4Result r = run_exp4(to_exp4(cfg));
      const auto path = cfg.out_dir / (cfg.frsc_enabled ? "exp4_summary_frsc.csv" : "exp4_summary_nofrsc.csv");
      emit_csv(exp4_summary_csv(std::span(&r, 1)), path);
      log << "wrote " << path.string() << '\n';
      log << "undercutting unprofitable from compliant fraction: "
          << (r.crossing ? format_ratio(r.crossing->as_double(), 2) : std::string("none in grid")) << '\n';
      return;
    }
    case Command::kRun: {
      const SeriesConfig sc = to_series(cfg);
      const auto records = run_series(sc);
      const auto path = cfg.out_dir / "run.csv";
      emit_csv(series_csv(records, sc.contracts.size()), path);
      log << "wrote " << path.string() << '\n';
      return;
    }
  }
}

}  // namespace frsc
