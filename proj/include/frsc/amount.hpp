#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace frsc {

constexpr std::uint64_t kSatoshiPerBtc = 100'000'000;
constexpr std::uint32_t kPpmScale = 1'000'000;

/// Non-negative amount of satoshi. Arithmetic is exact; subtraction below
/// zero throws instead of wrapping.
class Amount {
 public:
  constexpr Amount() = default;
  constexpr explicit Amount(std::uint64_t sat) : sat_(sat) {}

  static constexpr Amount btc(std::uint64_t whole) { return Amount(whole * kSatoshiPerBtc); }

  constexpr std::uint64_t sat() const { return sat_; }

  constexpr Amount& operator+=(Amount o) {
    sat_ += o.sat_;
    return *this;
  }
  constexpr Amount& operator-=(Amount o) {
    if (o.sat_ > sat_) throw std::domain_error("Amount underflow");
    sat_ -= o.sat_;
    return *this;
  }
  friend constexpr Amount operator+(Amount a, Amount b) { return a += b; }
  friend constexpr Amount operator-(Amount a, Amount b) { return a -= b; }

  friend constexpr auto operator<=>(Amount, Amount) = default;

 private:
  std::uint64_t sat_ = 0;
};

/// Ratio in parts per million, 0..1'000'000 inclusive.
class Ppm {
 public:
  constexpr Ppm() = default;
  constexpr explicit Ppm(std::uint32_t value) : value_(value) {
    if (value > kPpmScale) throw std::invalid_argument("ppm value " + std::to_string(value) + " exceeds 1000000");
  }

  static constexpr Ppm one() { return Ppm(kPpmScale); }

  constexpr std::uint32_t value() const { return value_; }
  constexpr Ppm complement() const { return Ppm(kPpmScale - value_); }
  constexpr double as_double() const { return static_cast<double>(value_) / kPpmScale; }

  friend constexpr auto operator<=>(Ppm, Ppm) = default;

 private:
  std::uint32_t value_ = 0;
};

/// floor(amount * ratio / 10^6) without intermediate overflow.
constexpr Amount scale_floor(Amount amount, Ppm ratio) {
  const unsigned __int128 wide = static_cast<unsigned __int128>(amount.sat()) * ratio.value();
  return Amount(static_cast<std::uint64_t>(wide / kPpmScale));
}

}  // namespace frsc
