#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

#include "sandbag/errors.hpp"

// Exact decimal arithmetic for the score grid. Scores and thresholds are
// fixed-point values (at most 6 fractional digits) stored as integer
// micro-units, so grid comparisons and quantization are exact by construction.

namespace sandbag {

inline constexpr std::int64_t kMicroScale = 1'000'000;       // 10^6
inline constexpr std::int64_t kPicoScale = 1'000'000'000'000;  // 10^12

namespace detail {

// Parses a plain or scientific decimal literal into an integer scaled by
// 10^scale_digits. Returns nullopt when the value is not exactly
// representable at that scale (too many fractional digits) or overflows.
inline std::optional<std::int64_t> parse_scaled(std::string_view text,
                                                int scale_digits) {
  std::size_t i = 0;
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = (text[i] == '-');
    ++i;
  }
  __int128 mantissa = 0;
  int frac_digits = 0;
  bool any_digit = false;
  bool seen_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (mantissa > (__int128)1 << 100) return std::nullopt;
      if (seen_dot) ++frac_digits;
      any_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c == 'e' || c == 'E') {
      break;
    } else {
      return std::nullopt;
    }
  }
  int exponent = 0;
  if (i < text.size()) {  // exponent part
    ++i;
    if (i >= text.size()) return std::nullopt;
    bool exp_neg = false;
    if (text[i] == '+' || text[i] == '-') {
      exp_neg = (text[i] == '-');
      ++i;
    }
    if (i >= text.size()) return std::nullopt;
    for (; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 400) return std::nullopt;
    }
    if (exp_neg) exponent = -exponent;
  }
  if (!any_digit) return std::nullopt;

  int shift = scale_digits - frac_digits + exponent;
  if (shift > 0) {
    for (int k = 0; k < shift; ++k) {
      mantissa *= 10;
      if (mantissa > (__int128)1 << 110) return std::nullopt;
    }
  } else if (shift < 0) {
    for (int k = 0; k < -shift; ++k) {
      if (mantissa % 10 != 0) return std::nullopt;  // not exact at this scale
      mantissa /= 10;
    }
  }
  if (negative) mantissa = -mantissa;
  if (mantissa > INT64_MAX || mantissa < INT64_MIN) return std::nullopt;
  return static_cast<std::int64_t>(mantissa);
}

}  // namespace detail

// Shortest decimal string that round-trips to the same double.
inline std::string format_double_shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double out = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw NonRepresentableGrid("not a real number: '" + std::string(text) + "'");
  }
  return out;
}

// A decimal number with at most 6 fractional digits, held as exact
// micro-units. Used for scores and the safety threshold h*.
class Decimal {
 public:
  constexpr Decimal() = default;

  static constexpr Decimal from_micro(std::int64_t micro) {
    Decimal d;
    d.micro_ = micro;
    return d;
  }

  static Decimal parse(std::string_view text) {
    auto micro = detail::parse_scaled(text, 6);
    if (!micro) {
      throw NonRepresentableGrid("'" + std::string(text) +
                                 "' is not an exact decimal with <= 6 fractional digits");
    }
    return from_micro(*micro);
  }

  // Exact conversion from a double via its shortest decimal representation.
  static Decimal from_double(double value) {
    if (!std::isfinite(value)) throw NonRepresentableGrid("non-finite score");
    return parse(format_double_shortest(value));
  }

  constexpr std::int64_t micro() const { return micro_; }
  double value() const { return static_cast<double>(micro_) / kMicroScale; }

  std::string str() const {
    std::int64_t m = micro_;
    std::string sign;
    if (m < 0) {
      sign = "-";
      m = -m;
    }
    std::int64_t whole = m / kMicroScale;
    std::int64_t frac = m % kMicroScale;
    std::string out = sign + std::to_string(whole);
    if (frac != 0) {
      std::string digits = std::to_string(frac);
      digits.insert(0, 6 - digits.size(), '0');
      while (digits.back() == '0') digits.pop_back();
      out += "." + digits;
    }
    return out;
  }

  friend constexpr bool operator==(Decimal, Decimal) = default;
  friend constexpr auto operator<=>(Decimal, Decimal) = default;

 private:
  std::int64_t micro_ = 0;
};

// Probability with an optional exact pico-scale (10^-12) representation.
// The exact form, when every input carries one, gives exact arm means and a
// well-defined descending-mean arm order.
struct Probability {
  double value = 0.0;
  std::int64_t pico = 0;
  bool exact = false;

  static Probability from_double(double v) {
    Probability p;
    p.value = v;
    if (std::isfinite(v)) {
      if (auto scaled = detail::parse_scaled(format_double_shortest(v), 12)) {
        p.pico = *scaled;
        p.exact = true;
      }
    }
    return p;
  }

  static Probability from_string(std::string_view text) {
    if (auto scaled = detail::parse_scaled(text, 12)) {
      Probability p;
      p.pico = *scaled;
      p.exact = true;
      p.value = static_cast<double>(*scaled) / kPicoScale;
      return p;
    }
    return from_double(parse_double(text));
  }
};

}  // namespace sandbag
