#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "jacloc/errors.hpp"

namespace jacloc {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number over arbitrary-precision integers. Always kept in
/// canonical form: denominator > 0, gcd(num, den) = 1. No implicit floating
/// point conversion exists anywhere; stability decisions must stay exact.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // intentionally implicit
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}
  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_integer() const { return den_ == 1; }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  Rational& operator+=(const Rational& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
  }
  Rational& operator-=(const Rational& o) { return *this += -o; }
  Rational& operator*=(const Rational& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    normalize();
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.num_ == 0) throw InvalidDataError("division of rational by zero");
    num_ *= o.den_;
    den_ *= o.num_;
    normalize();
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const BigInt lhs = a.num_ * b.den_;
    const BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Largest integer <= value.
  BigInt floor() const {
    BigInt q = num_ / den_;
    if (num_ < 0 && q * den_ != num_) --q;
    return q;
  }
  /// Smallest integer >= value.
  BigInt ceil() const { return -(-*this).floor(); }

  /// Canonical form "p/q" with q > 0 and gcd(p, q) = 1; integers render as "p".
  std::string str() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
  }

  /// Parses "p", "p/q", or "-p/q". Rejects anything else (notably decimal
  /// points: no float shortcut into exact arithmetic).
  static Rational parse(std::string_view text) {
    const auto bad = [&] {
      throw SchemaError("invalid rational literal: '" + std::string(text) + "'");
    };
    if (text.empty()) bad();
    const auto slash = text.find('/');
    std::string_view num_part = text.substr(0, slash);
    std::string_view den_part =
        slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (num_part.empty() || den_part.empty()) bad();
    const auto parse_int = [&](std::string_view s, bool allow_sign) -> BigInt {
      bool negative = false;
      std::size_t i = 0;
      if (allow_sign && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        i = 1;
      }
      if (i == s.size()) bad();
      for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') bad();
      BigInt value(std::string(s.substr(i)));
      return negative ? -value : value;
    };
    BigInt num = parse_int(num_part, true);
    BigInt den = parse_int(den_part, false);
    if (den == 0) bad();
    return Rational(std::move(num), std::move(den));
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  void normalize() {
    if (den_ == 0) throw InvalidDataError("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_;
  BigInt den_;
};

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  return Rational(a, b).floor();
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::lcm(a, b);
}

/// Narrowing with an explicit failure instead of silent wraparound.
inline std::int64_t checked_int64(const BigInt& v, const char* what) {
  static const BigInt hi(std::numeric_limits<std::int64_t>::max());
  static const BigInt lo(std::numeric_limits<std::int64_t>::min());
  if (v > hi || v < lo)
    throw ScaleLimitError(std::string(what) + " exceeds the supported integer range");
  return v.convert_to<std::int64_t>();
}

}  // namespace jacloc
