#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dfsopt {

/// Fantasy point quantity held as an exact integer count of micro-points.
///
/// All optimizer arithmetic runs on the integer representation so that
/// results are bit-identical across runs and platforms. Conversion to
/// double only happens for statistics and for display.
class Points {
 public:
  static constexpr std::int64_t kScale = 1'000'000;
  static constexpr int kDigits = 6;

  constexpr Points() = default;

  static constexpr Points from_micro(std::int64_t micro) {
    Points p;
    p.micro_ = micro;
    return p;
  }
  static constexpr Points from_whole(std::int64_t whole) {
    return from_micro(whole * kScale);
  }
  // Rounds half away from zero to the nearest micro-point.
  static Points from_double(double value);

  // Parses a plain decimal ("-15", "8.418504", ".5"). More than six
  // fractional digits are rounded half away from zero. Exponents, signs
  // other than a leading '-', and embedded whitespace are rejected.
  static std::optional<Points> parse(std::string_view text);

  constexpr std::int64_t micro() const { return micro_; }
  double to_double() const { return static_cast<double>(micro_) / kScale; }

  // Shortest exact decimal with at least one fractional digit ("81.0").
  std::string to_string() const;

  constexpr Points& operator+=(Points o) {
    micro_ += o.micro_;
    return *this;
  }
  constexpr Points& operator-=(Points o) {
    micro_ -= o.micro_;
    return *this;
  }
  friend constexpr Points operator+(Points a, Points b) { return a += b; }
  friend constexpr Points operator-(Points a, Points b) { return a -= b; }
  friend constexpr Points operator-(Points a) { return from_micro(-a.micro_); }
  friend constexpr auto operator<=>(Points, Points) = default;

 private:
  std::int64_t micro_ = 0;
};

// Formats an integer count of micro units as a decimal string with at
// least one fractional digit.
std::string format_micro(std::int64_t micro);

}  // namespace dfsopt
