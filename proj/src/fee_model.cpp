#include "frsc/fee_model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace frsc {

namespace {

std::uint64_t segment_fees(const InflowSegment& s, std::uint64_t duration) {
  const unsigned __int128 wide = static_cast<unsigned __int128>(s.amount) * duration;
  return static_cast<std::uint64_t>(wide / s.period);
}

double rate_of(const InflowSegment& s) { return static_cast<double>(s.amount) / static_cast<double>(s.period); }

template <typename Better>
std::pair<double, double> extreme_window(std::span<const InflowSegment> segs, Better better) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < segs.size(); ++i) {
    // Equal rates keep the later segment.
    if (!better(rate_of(segs[best]), rate_of(segs[i]))) best = i;
  }
  const double end =
      best + 1 < segs.size() ? static_cast<double>(segs[best + 1].start) : std::numeric_limits<double>::infinity();
  return {static_cast<double>(segs[best].start), end};
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_u64(std::string_view field, std::size_t line_no) {
  field = trim(field);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw std::runtime_error("scenario line " + std::to_string(line_no) + ": expected a non-negative integer, got '" +
                             std::string(field) + "'");
  }
  return value;
}

void push_merged(std::vector<InflowSegment>& out, InflowSegment seg) {
  if (!out.empty() && out.back().amount == seg.amount && out.back().period == seg.period) return;
  out.push_back(seg);
}

}  // namespace

FeeScenario::FeeScenario(std::vector<InflowSegment> segments, bool full_mempool, Amount block_cap)
    : segments_(std::move(segments)), full_mempool_(full_mempool), block_cap_(block_cap) {
  if (segments_.empty()) throw std::invalid_argument("fee scenario needs at least one segment");
  if (segments_.front().start != 0) throw std::invalid_argument("first scenario segment must start at time 0");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i].period == 0) throw std::invalid_argument("scenario segment period must be positive");
    if (i > 0 && segments_[i].start <= segments_[i - 1].start) {
      throw std::invalid_argument("scenario segment start times must be strictly increasing");
    }
  }
  if (full_mempool_ && block_cap_.sat() == 0) throw std::invalid_argument("block cap must be positive in full-mempool mode");

  completed_.assign(segments_.size(), 0);
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    const auto& prev = segments_[i - 1];
    completed_[i] = completed_[i - 1] + segment_fees(prev, segments_[i].start - prev.start);
  }
}

double FeeScenario::rate_at(double t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double time, const InflowSegment& s) { return time < static_cast<double>(s.start); });
  return rate_of(*std::prev(it));
}

std::pair<double, double> FeeScenario::min_rate_window() const {
  return extreme_window(segments_, [](double best, double cand) { return best < cand; });
}

std::pair<double, double> FeeScenario::max_rate_window() const {
  return extreme_window(segments_, [](double best, double cand) { return best > cand; });
}

Amount arrived_fees(const FeeScenario& scenario, double t) {
  if (!(t > 0.0)) return Amount(0);
  const auto& segs = scenario.segments_;
  auto it = std::upper_bound(segs.begin(), segs.end(), t,
                             [](double time, const InflowSegment& s) { return time < static_cast<double>(s.start); });
  const std::size_t i = static_cast<std::size_t>(std::distance(segs.begin(), it)) - 1;
  const auto& seg = segs[i];
  const long double elapsed = static_cast<long double>(t) - static_cast<long double>(seg.start);
  const auto partial = static_cast<std::uint64_t>(static_cast<long double>(seg.amount) * elapsed / seg.period);
  return Amount(scenario.completed_[i] + partial);
}

Amount claimable_fees(const FeeScenario& scenario, Amount available) {
  if (scenario.full_mempool()) return std::min(available, scenario.block_cap());
  return available;
}

std::vector<InflowSegment> parse_scenario(std::string_view text) {
  std::vector<InflowSegment> segments;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "frsc-scenario v1") {
        throw std::runtime_error("scenario line " + std::to_string(line_no) + ": missing 'frsc-scenario v1' header");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw std::runtime_error("scenario line " + std::to_string(line_no) +
                               ": expected 'start_time_seconds,inflow_satoshi_per_second'");
    }
    InflowSegment seg{parse_u64(line.substr(0, comma), line_no), parse_u64(line.substr(comma + 1), line_no), 1};
    if (segments.empty() && seg.start != 0) {
      throw std::runtime_error("scenario line " + std::to_string(line_no) + ": first record must start at time 0");
    }
    if (!segments.empty() && seg.start <= segments.back().start) {
      throw std::runtime_error("scenario line " + std::to_string(line_no) + ": start times must be strictly increasing");
    }
    segments.push_back(seg);
  }
  if (!header_seen) throw std::runtime_error("scenario: missing 'frsc-scenario v1' header");
  if (segments.empty()) throw std::runtime_error("scenario: no inflow records");
  return segments;
}

std::vector<InflowSegment> load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::string format_scenario(std::span<const InflowSegment> segments) {
  std::string out = "frsc-scenario v1\n";
  for (const auto& s : segments) {
    if (s.period != 1) throw std::invalid_argument("only 1-second periods can be written in the v1 format");
    out += std::to_string(s.start) + ',' + std::to_string(s.amount) + '\n';
  }
  return out;
}

namespace scenarios {

namespace {

constexpr std::uint64_t kBlockSeconds = 600;

// BTC per 600 s block expressed in sat/s, truncated.
constexpr std::uint64_t btc_per_block(std::uint64_t btc) { return btc * kSatoshiPerBtc / kBlockSeconds; }

constexpr std::uint64_t blocks(std::uint64_t n) { return n * kBlockSeconds; }

}  // namespace

std::vector<InflowSegment> constant(std::uint64_t amount, std::uint64_t period) { return {{0, amount, period}}; }

std::vector<InflowSegment> staircase(std::span<const Phase> phases, std::uint64_t step_width) {
  if (step_width == 0) throw std::invalid_argument("staircase step width must be positive");
  std::vector<InflowSegment> out;
  std::uint64_t t = 0;
  for (const auto& ph : phases) {
    if (ph.from_rate == ph.to_rate || ph.duration <= step_width) {
      push_merged(out, {t, ph.from_rate, 1});
      t += ph.duration;
      continue;
    }
    const std::uint64_t steps = ph.duration / step_width;
    const auto from = static_cast<std::int64_t>(ph.from_rate);
    const auto delta = static_cast<std::int64_t>(ph.to_rate) - from;
    for (std::uint64_t k = 0; k < steps; ++k) {
      const std::int64_t rate = from + delta * static_cast<std::int64_t>(k) / static_cast<std::int64_t>(steps);
      push_merged(out, {t + k * step_width, static_cast<std::uint64_t>(rate), 1});
    }
    t += ph.duration;
  }
  return out;
}

std::vector<InflowSegment> long_term(std::uint64_t step_width) {
  const Phase phases[] = {
      {blocks(3000), btc_per_block(25), btc_per_block(25)}, {blocks(5000), btc_per_block(25), btc_per_block(45)},
      {blocks(3000), btc_per_block(45), btc_per_block(45)}, {blocks(4000), btc_per_block(45), btc_per_block(8)},
      {blocks(4000), btc_per_block(8), btc_per_block(8)},   {blocks(3000), btc_per_block(8), btc_per_block(60)},
      {blocks(1000), btc_per_block(60), btc_per_block(60)}, {blocks(5000), btc_per_block(60), btc_per_block(20)},
      {blocks(4000), btc_per_block(20), btc_per_block(20)}, {blocks(4000), btc_per_block(20), btc_per_block(35)},
      {blocks(1), btc_per_block(35), btc_per_block(35)},
  };
  return staircase(phases, step_width);
}

std::vector<InflowSegment> triangle_wave(std::uint64_t step_width) {
  constexpr std::uint64_t hold = blocks(12000);
  constexpr std::uint64_t ramp = blocks(10000);
  const std::uint64_t low = btc_per_block(2);
  const std::uint64_t high = btc_per_block(50);
  const Phase phases[] = {
      {hold, high, high}, {ramp, high, low}, {hold, low, low}, {ramp, low, high}, {hold, high, high},
      {ramp, high, low},  {hold, low, low},  {ramp, low, high}, {hold, high, high},
      {1, btc_per_block(26), btc_per_block(26)},
  };
  return staircase(phases, step_width);
}

}  // namespace scenarios

}  // namespace frsc
