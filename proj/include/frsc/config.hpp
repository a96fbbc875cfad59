#pragma once

// Run configuration for the frsc-sim tool. Values come from command-line
// flags, then a `key = value` config file, then per-command defaults.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "frsc/experiments.hpp"

namespace frsc {

enum class Command { kExp1, kExp2, kExp3, kExp4, kRun };

std::string_view command_name(Command command);

struct RunConfig {
  Command command = Command::kRun;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> scenario_path;
  std::vector<ContractSpec> frsc;
  Ppm c{700'000};
  bool c_given = false;  // narrows the exp1/exp2 sweeps to this value
  std::uint32_t miners = 20;
  std::uint64_t blocks = 0;
  std::uint64_t games = 2'000;
  std::vector<Ppm> fraction_grid;
  bool full_mempool = true;
  Amount block_cap = FeeScenario::kDefaultBlockCap;
  Ppm gamma{100'000};
  Ppm kappa{500'000};
  bool frsc_enabled = true;
  Amount genesis_fees{5'000'000'000};
  unsigned threads = 0;
};

/// --help was requested; what() holds the usage text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `args` (without the program name) with `file_text` as the config
/// file contents. Throws ConfigError naming the key and the violated rule.
RunConfig parse_config(std::span<const std::string> args, std::optional<std::string_view> file_text);

/// Same, reading the file named by --config when present.
RunConfig parse_config(std::span<const std::string> args);

/// Fee scenario for the command: the --scenario file or the built-in default.
FeeScenario build_scenario(const RunConfig& config);

Exp1Config to_exp1(const RunConfig& config);
Exp2Config to_exp2(const RunConfig& config);
Exp3Config to_exp3(const RunConfig& config);
Exp4Config to_exp4(const RunConfig& config);
SeriesConfig to_series(const RunConfig& config);

/// Runs the configured command, writing CSVs under out_dir and a short report
/// to `log`.
void run_command(const RunConfig& config, std::ostream& log);

}  // namespace frsc
