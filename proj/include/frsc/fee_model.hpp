#pragma once

// Fee inflow into the mempool over simulated time.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frsc/amount.hpp"

namespace frsc {

/// Constant inflow of `amount` satoshi every `period` seconds, starting at
/// `start` (integer seconds) and lasting until the next segment.
struct InflowSegment {
  std::uint64_t start = 0;
  std::uint64_t amount = 0;
  std::uint64_t period = 1;

  friend bool operator==(const InflowSegment&, const InflowSegment&) = default;
};

class FeeScenario {
 public:
  /// Default cap: expected inflow per 600 s block at 50 BTC.
  static constexpr Amount kDefaultBlockCap{5'000'000'000};

  FeeScenario(std::vector<InflowSegment> segments, bool full_mempool = false, Amount block_cap = kDefaultBlockCap);

  std::span<const InflowSegment> segments() const { return segments_; }
  bool full_mempool() const { return full_mempool_; }
  Amount block_cap() const { return block_cap_; }

  FeeScenario with_mempool(bool full_mempool, Amount block_cap) const {
    return FeeScenario(segments_, full_mempool, block_cap);
  }

  /// Inflow rate in sat/s at time t.
  double rate_at(double t) const;

  /// [start, end) of the last segment with the lowest / highest rate. `end` is
  /// +inf for the final segment.
  std::pair<double, double> min_rate_window() const;
  std::pair<double, double> max_rate_window() const;

 private:
  friend Amount arrived_fees(const FeeScenario&, double);

  std::vector<InflowSegment> segments_;
  std::vector<std::uint64_t> completed_;  // fees from segments [0, i) when i is fully elapsed
  bool full_mempool_;
  Amount block_cap_;
};

/// Fees that have entered the mempool during [0, t]. Each segment's share is
/// floored to whole satoshi.
Amount arrived_fees(const FeeScenario& scenario, double t);

/// What a miner may put in one block when `available` sits in the mempool.
Amount claimable_fees(const FeeScenario& scenario, Amount available);

/// Parses the `frsc-scenario v1` text format. Throws std::runtime_error with
/// the offending line number.
std::vector<InflowSegment> parse_scenario(std::string_view text);
std::vector<InflowSegment> load_scenario(const std::filesystem::path& path);

/// Renders segments in the v1 file format. Only period-1 segments are
/// representable.
std::string format_scenario(std::span<const InflowSegment> segments);

namespace scenarios {

/// `amount` satoshi every `period` seconds, forever.
std::vector<InflowSegment> constant(std::uint64_t amount, std::uint64_t period);

/// One piece of a piecewise-linear inflow profile, in sat/s.
struct Phase {
  std::uint64_t duration;  // seconds
  std::uint64_t from_rate;
  std::uint64_t to_rate;
};

/// Piecewise-constant staircase approximating the linear phases.
std::vector<InflowSegment> staircase(std::span<const Phase> phases, std::uint64_t step_width = 600);

/// Long multi-phase rise/fall profile used for the single and multi contract
/// sweeps (a reconstruction, not measured data).
std::vector<InflowSegment> long_term(std::uint64_t step_width = 600);

/// Ramps between 2 and 50 BTC per 600 s with long holds at both extremes.
std::vector<InflowSegment> triangle_wave(std::uint64_t step_width = 600);

}  // namespace scenarios

}  // namespace frsc
