#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nafree {

/// Raised when an exact rational operation would leave the int64 range.
class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

/// Raised for malformed input (unparseable numbers, bad shapes, unknown names).
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/*
 * Exact rational number num/den with den > 0 and gcd(num, den) = 1.
 *
 * All arithmetic is checked; anything that does not fit in int64 after
 * reduction throws OverflowError instead of wrapping.
 */
class Rational {
public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const {
    if (num_ == INT64_MIN) throw OverflowError("rational negation overflow");
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Canonical text: "p" for integers, "p/q" otherwise, always in lowest terms.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "p", "-p" or "p/q". Decimal points and exponents are rejected.
  static Rational parse(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> std::int64_t {
      if (s.empty()) throw InputError("malformed rational '" + std::string(text) + "'");
      std::size_t i = 0;
      bool neg = false;
      if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
      }
      if (i == s.size()) throw InputError("malformed rational '" + std::string(text) + "'");
      __int128 v = 0;
      for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw InputError("malformed rational '" + std::string(text) + "'");
        v = v * 10 + (s[i] - '0');
        if (v > static_cast<__int128>(INT64_MAX)) throw OverflowError("rational literal out of range");
      }
      return static_cast<std::int64_t>(neg ? -v : v);
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const auto d = parse_int(text.substr(slash + 1));
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), d);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
  void assign(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(n, d);
  }

  static Rational from_wide(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    if (n > INT64_MAX || n < -static_cast<__int128>(INT64_MAX) || d > INT64_MAX)
      throw OverflowError("rational result out of int64 range");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace nafree
