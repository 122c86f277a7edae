#include "dfsopt/points.hpp"

#include <cmath>
#include <limits>

namespace dfsopt {

Points Points::from_double(double value) {
  return from_micro(static_cast<std::int64_t>(std::llround(value * kScale)));
}

std::optional<Points> Points::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-') {
    negative = true;
    pos = 1;
  }
  constexpr std::int64_t kLimit = std::numeric_limits<std::int64_t>::max() / 100;
  std::int64_t whole = 0;
  std::int64_t frac = 0;
  int frac_digits = 0;
  bool any_digit = false;
  bool round_up = false;
  for (; pos < text.size() && text[pos] != '.'; ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') return std::nullopt;
    whole = whole * 10 + (c - '0');
    if (whole > kLimit / kScale) return std::nullopt;
    any_digit = true;
  }
  if (pos < text.size()) {
    ++pos;  // '.'
    bool first_dropped = true;
    for (; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (c < '0' || c > '9') return std::nullopt;
      any_digit = true;
      if (frac_digits < kDigits) {
        frac = frac * 10 + (c - '0');
        ++frac_digits;
      } else if (first_dropped) {
        round_up = c >= '5';
        first_dropped = false;
      }
    }
  }
  if (!any_digit) return std::nullopt;
  for (int i = frac_digits; i < kDigits; ++i) frac *= 10;
  std::int64_t micro = whole * kScale + frac + (round_up ? 1 : 0);
  return from_micro(negative ? -micro : micro);
}

std::string format_micro(std::int64_t micro) {
  const bool negative = micro < 0;
  // Work in unsigned to keep INT64_MIN well-defined.
  const std::uint64_t mag = negative ? 0 - static_cast<std::uint64_t>(micro)
                                     : static_cast<std::uint64_t>(micro);
  const std::uint64_t scale = static_cast<std::uint64_t>(Points::kScale);
  std::string out = negative ? "-" : "";
  out += std::to_string(mag / scale);
  std::string frac = std::to_string(mag % scale);
  frac.insert(0, Points::kDigits - frac.size(), '0');
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  out += '.';
  out += frac;
  return out;
}

std::string Points::to_string() const { return format_micro(micro_); }

}  // namespace dfsopt
