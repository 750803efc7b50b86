#pragma once

#include <cstdint>
#include <cstdlib>
#include <compare>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace csts {

__extension__ using Wide = __int128;

/// Exact non-negative fraction. Participation indexes are ratios of instance
/// counts, so every comparison against a threshold stays in integers.
class Ratio {
 public:
  constexpr Ratio() = default;

  Ratio(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ <= 0 || num_ < 0) {
      throw std::invalid_argument("Ratio: numerator must be >= 0 and denominator > 0");
    }
    reduce();
  }

  static Ratio integer(std::int64_t v) { return Ratio(v, 1); }

  /// Parses "0.25", "1", "3/8" or ".5" exactly. Scientific notation is not accepted.
  static Ratio parse(std::string_view text) {
    auto fail = [&] { return std::invalid_argument("not an exact decimal: '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      return Ratio(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : text) {
      if (c == '.') {
        if (seen_dot) throw fail();
        seen_dot = true;
        continue;
      }
      if (c < '0' || c > '9') throw fail();
      seen_digit = true;
      if (num > (INT64_MAX - 9) / 10 || (seen_dot && den > INT64_MAX / 10)) {
        throw std::invalid_argument("decimal has too many digits: '" + std::string(text) + "'");
      }
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
    }
    if (!seen_digit) throw fail();
    return Ratio(num, den);
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  friend bool operator==(const Ratio& a, const Ratio& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    const Wide lhs = static_cast<Wide>(a.num_) * b.den_;
    const Wide rhs = static_cast<Wide>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend Ratio operator+(const Ratio& a, const Ratio& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t left = b.den_ / g;
    return from_wide(static_cast<Wide>(a.num_) * left + static_cast<Wide>(b.num_) * (a.den_ / g),
                     static_cast<Wide>(a.den_) * left);
  }

  /// Saturating subtraction: results below zero clamp to 0.
  friend Ratio saturating_sub(const Ratio& a, const Ratio& b) {
    if (a <= b) return Ratio{};
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t left = b.den_ / g;
    return from_wide(static_cast<Wide>(a.num_) * left - static_cast<Wide>(b.num_) * (a.den_ / g),
                     static_cast<Wide>(a.den_) * left);
  }

 private:
  static std::int64_t parse_int(std::string_view part, std::string_view whole) {
    if (part.empty()) throw std::invalid_argument("bad fraction: '" + std::string(whole) + "'");
    std::int64_t v = 0;
    for (char c : part) {
      if (c < '0' || c > '9' || v > (INT64_MAX - 9) / 10) {
        throw std::invalid_argument("bad fraction: '" + std::string(whole) + "'");
      }
      v = v * 10 + (c - '0');
    }
    return v;
  }

  static Ratio from_wide(Wide num, Wide den) {
    Wide a = num < 0 ? -num : num;
    Wide b = den;
    while (b != 0) {
      Wide t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    if (num > INT64_MAX || den > INT64_MAX) throw std::overflow_error("Ratio overflow");
    Ratio r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  void reduce() {
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace csts
