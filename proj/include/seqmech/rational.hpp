#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "seqmech/errors.hpp"

namespace seqmech {

// Exact rational with 64-bit numerator and denominator.
//
// Invariants: den > 0 and gcd(|num|, den) == 1 always hold, so equality is
// bitwise equality.  All intermediate products are taken in 128-bit
// arithmetic; a result whose reduced numerator or denominator does not fit
// in 64 bits raises OverflowError instead of wrapping.  Ties between
// payoffs are meaningful to every consumer in this library, which is why
// there is no floating-point constructor.
class Rational {
 public:
  constexpr Rational() = default;
  // NOLINTNEXTLINE(google-explicit-constructor): integers embed exactly.
  constexpr Rational(std::int64_t value) : num_(value), den_(1) {}
  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw PreconditionError("rational with zero denominator");
    __int128 n = num;
    __int128 d = den;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num_ = narrow(n);
    den_ = narrow(d);
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(__int128(a.num_) * b.den_ + __int128(b.num_) * a.den_,
                __int128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(__int128(a.num_) * b.den_ - __int128(b.num_) * a.den_,
                __int128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(__int128(a.num_) * b.num_, __int128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw PreconditionError("rational division by zero");
    return make(__int128(a.num_) * b.den_, __int128(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = narrow(-__int128(num_));
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  // Reduced representations are unique, so == is componentwise; < compares
  // cross products, which cannot overflow __int128 for 64-bit components.
  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) noexcept {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) noexcept {
    return __int128(a.num_) * b.den_ < __int128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) noexcept {
    return b < a;
  }
  friend bool operator<=(const Rational& a, const Rational& b) noexcept {
    return !(b < a);
  }
  friend bool operator>=(const Rational& a, const Rational& b) noexcept {
    return !(a < b);
  }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Accepts "p" and "p/q" with optionally signed p and positive q.
  static Rational parse(const std::string& text) {
    const auto bad = [&text]() -> Rational {
      throw InputError("malformed rational: '" + text + "'");
    };
    if (text.empty()) return bad();
    std::size_t pos = 0;
    auto read_int = [&](bool allow_sign) -> std::int64_t {
      std::size_t start = pos;
      if (allow_sign && pos < text.size() &&
          (text[pos] == '+' || text[pos] == '-')) {
        ++pos;
      }
      std::size_t digits = 0;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        ++pos;
        ++digits;
      }
      if (digits == 0 || digits > 18) bad();
      return std::stoll(text.substr(start, pos - start));
    };
    const std::int64_t num = read_int(true);
    if (pos == text.size()) return Rational(num);
    if (text[pos] != '/') return bad();
    ++pos;
    const std::int64_t den = read_int(false);
    if (pos != text.size() || den == 0) return bad();
    return Rational(num, den);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  static __int128 gcd128(__int128 a, __int128 b) noexcept {
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  static std::int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) {
      throw OverflowError("rational component exceeds 64 bits");
    }
    return static_cast<std::int64_t>(v);
  }
  static Rational make(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rational r;
    r.num_ = narrow(n);
    r.den_ = narrow(d);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace seqmech
