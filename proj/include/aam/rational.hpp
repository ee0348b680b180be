#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aam {

/// Thrown when an exact computation leaves the range of 64-bit numerators.
struct ArithmeticOverflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

/// Thrown on division by an exact zero.
struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};

/// Reduced fraction with a positive denominator. Intermediate products are
/// carried in 128 bits and checked before narrowing.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  [[nodiscard]] constexpr std::int64_t num() const { return num_; }
  [[nodiscard]] constexpr std::int64_t den() const { return den_; }
  [[nodiscard]] constexpr bool is_zero() const { return num_ == 0; }
  [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }
  [[nodiscard]] double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// Parses "n" or "n/d" with an optional leading sign.
  static Rational parse(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> std::int64_t {
      if (s.empty()) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
      std::size_t i = 0;
      bool neg = false;
      if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
      }
      if (i == s.size()) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
      __int128 v = 0;
      for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
          throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        v = v * 10 + (s[i] - '0');
        if (v > INT64_MAX) throw ArithmeticOverflow("rational literal out of range: " + std::string(text));
      }
      return static_cast<std::int64_t>(neg ? -v : v);
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw DivisionByZero("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const {
    if (num_ == INT64_MIN) throw ArithmeticOverflow("rational negation overflow");
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend constexpr bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

  /// Integer power; negative exponents invert.
  [[nodiscard]] Rational pow(int e) const {
    if (e < 0) return Rational(1) / pow(-e);
    Rational r(1), base = *this;
    while (e > 0) {
      if (e & 1) r *= base;
      e >>= 1;
      if (e > 0) base *= base;
    }
    return r;
  }

  [[nodiscard]] std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(__int128 n, __int128 d) {
    if (d == 0) throw DivisionByZero("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n == 0) d = 1;
    if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX) throw ArithmeticOverflow("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Exact Gaussian rational re + i*im.
struct ComplexRational {
  Rational re;
  Rational im;

  constexpr ComplexRational() = default;
  ComplexRational(Rational r) : re(r) {}  // NOLINT(google-explicit-constructor)
  ComplexRational(std::int64_t r) : re(r) {}  // NOLINT(google-explicit-constructor)
  ComplexRational(Rational r, Rational i) : re(r), im(i) {}

  static ComplexRational i() { return {Rational(0), Rational(1)}; }

  [[nodiscard]] bool is_zero() const { return re.is_zero() && im.is_zero(); }
  [[nodiscard]] bool is_real() const { return im.is_zero(); }
  [[nodiscard]] ComplexRational conj() const { return {re, -im}; }

  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
    Rational n2 = b.re * b.re + b.im * b.im;
    if (n2.is_zero()) throw DivisionByZero("complex rational division by zero");
    ComplexRational t = a * b.conj();
    return {t.re / n2, t.im / n2};
  }
  ComplexRational operator-() const { return {-re, -im}; }
  ComplexRational& operator+=(const ComplexRational& o) { return *this = *this + o; }
  ComplexRational& operator*=(const ComplexRational& o) { return *this = *this * o; }

  friend bool operator==(const ComplexRational&, const ComplexRational&) = default;
  friend auto operator<=>(const ComplexRational& a, const ComplexRational& b) {
    if (auto c = a.re <=> b.re; c != 0) return c;
    return a.im <=> b.im;
  }

  [[nodiscard]] std::string str() const {
    if (im.is_zero()) return re.str();
    if (re.is_zero()) return im == Rational(1) ? "i" : im.str() + "*i";
    return "(" + re.str() + (im < Rational(0) ? "-" : "+") + (im < Rational(0) ? (-im).str() : im.str()) + "*i)";
  }
};

}  // namespace aam
