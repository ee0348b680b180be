#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "aam/rational.hpp"

namespace aam {

/// Commuting scalar symbols that may appear in operator coefficients.
enum class Symbol : int { hbar, c, m, a_x, a_y, a_z, g_x, g_y, g_z, mu_a, Phi };

inline constexpr int kSymbolCount = 11;

inline constexpr std::array<std::string_view, kSymbolCount> kSymbolNames = {
    "hbar", "c", "m", "a_x", "a_y", "a_z", "g_x", "g_y", "g_z", "mu_a", "Phi"};

inline std::string_view symbol_name(Symbol s) { return kSymbolNames[static_cast<int>(s)]; }

inline std::optional<Symbol> symbol_from_name(std::string_view name) {
  for (int k = 0; k < kSymbolCount; ++k)
    if (kSymbolNames[k] == name) return static_cast<Symbol>(k);
  return std::nullopt;
}

/// Exponent vector over the scalar symbols (negative exponents allowed, e.g. m^-1).
using SymbolPowers = std::array<int, kSymbolCount>;

/// A Laurent polynomial in the scalar symbols with exact Gaussian-rational
/// coefficients. Terms with zero coefficient are never stored, so the zero
/// scalar is the empty map.
class ScalarCoeff {
 public:
  using Terms = std::map<SymbolPowers, ComplexRational>;

  ScalarCoeff() = default;
  ScalarCoeff(ComplexRational c) { add_term(SymbolPowers{}, c); }  // NOLINT(google-explicit-constructor)
  ScalarCoeff(Rational r) : ScalarCoeff(ComplexRational(r)) {}     // NOLINT(google-explicit-constructor)
  ScalarCoeff(std::int64_t n) : ScalarCoeff(ComplexRational(n)) {}  // NOLINT(google-explicit-constructor)

  static ScalarCoeff symbol(Symbol s, int power = 1) {
    SymbolPowers p{};
    p[static_cast<int>(s)] = power;
    ScalarCoeff r;
    r.add_term(p, ComplexRational(1));
    return r;
  }
  static ScalarCoeff i() { return ScalarCoeff(ComplexRational::i()); }

  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

  /// The coefficient if this scalar carries no symbols.
  [[nodiscard]] std::optional<ComplexRational> as_number() const {
    if (terms_.empty()) return ComplexRational(0);
    if (terms_.size() == 1 && terms_.begin()->first == SymbolPowers{}) return terms_.begin()->second;
    return std::nullopt;
  }

  [[nodiscard]] bool mentions(Symbol s) const {
    for (const auto& [p, c] : terms_)
      if (p[static_cast<int>(s)] != 0) return true;
    return false;
  }

  void add_term(const SymbolPowers& p, const ComplexRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(p, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend ScalarCoeff operator+(ScalarCoeff a, const ScalarCoeff& b) {
    for (const auto& [p, c] : b.terms_) a.add_term(p, c);
    return a;
  }
  friend ScalarCoeff operator-(const ScalarCoeff& a, const ScalarCoeff& b) { return a + (-b); }
  ScalarCoeff operator-() const {
    ScalarCoeff r;
    for (const auto& [p, c] : terms_) r.terms_.emplace(p, -c);
    return r;
  }
  friend ScalarCoeff operator*(const ScalarCoeff& a, const ScalarCoeff& b) {
    ScalarCoeff r;
    for (const auto& [pa, ca] : a.terms_)
      for (const auto& [pb, cb] : b.terms_) {
        SymbolPowers p;
        for (int k = 0; k < kSymbolCount; ++k) p[k] = pa[k] + pb[k];
        r.add_term(p, ca * cb);
      }
    return r;
  }
  ScalarCoeff& operator+=(const ScalarCoeff& o) { return *this = *this + o; }
  ScalarCoeff& operator*=(const ScalarCoeff& o) { return *this = *this * o; }

  /// Complex conjugate; all symbols are real.
  [[nodiscard]] ScalarCoeff conj() const {
    ScalarCoeff r;
    for (const auto& [p, c] : terms_) r.terms_.emplace(p, c.conj());
    return r;
  }

  /// Replaces every occurrence of `s` with `value`. Negative powers require
  /// `value` to be a single term (a monomial is invertible, a sum is not).
  [[nodiscard]] ScalarCoeff substitute(Symbol s, const ScalarCoeff& value) const {
    const int k = static_cast<int>(s);
    ScalarCoeff r;
    for (const auto& [p, c] : terms_) {
      SymbolPowers rest = p;
      const int e = rest[k];
      rest[k] = 0;
      ScalarCoeff term;
      term.add_term(rest, c);
      r += term * value.pow(e);
    }
    return r;
  }

  /// Simultaneous substitution of several symbols.
  [[nodiscard]] ScalarCoeff substitute(const std::map<Symbol, ScalarCoeff>& bindings) const {
    ScalarCoeff r;
    for (const auto& [p, c] : terms_) {
      SymbolPowers rest = p;
      ScalarCoeff term;
      ScalarCoeff factor(1);
      for (const auto& [s, value] : bindings) {
        const int k = static_cast<int>(s);
        if (rest[k] != 0) factor *= value.pow(rest[k]);
        rest[k] = 0;
      }
      term.add_term(rest, c);
      r += term * factor;
    }
    return r;
  }

  /// Integer power. A negative power is defined only for single-term values.
  [[nodiscard]] ScalarCoeff pow(int e) const {
    if (e < 0) {
      if (terms_.size() != 1) {
        if (terms_.empty()) throw DivisionByZero("zero scalar raised to a negative power");
        throw std::invalid_argument("cannot invert a multi-term scalar");
      }
      const auto& [p, c] = *terms_.begin();
      SymbolPowers q;
      for (int j = 0; j < kSymbolCount; ++j) q[j] = -p[j];
      ScalarCoeff inv;
      inv.add_term(q, ComplexRational(1) / c);
      return inv.pow(-e);
    }
    ScalarCoeff r(1);
    for (int j = 0; j < e; ++j) r *= *this;
    return r;
  }

  /// Exact quotient when `b` is a scalar multiple of `a`'s term structure:
  /// returns q with a == q * b for a pure number q, or nullopt.
  [[nodiscard]] static std::optional<ComplexRational> ratio(const ScalarCoeff& a, const ScalarCoeff& b) {
    if (b.is_zero()) throw DivisionByZero("ratio with zero denominator scalar");
    if (a.terms_.size() != b.terms_.size()) return std::nullopt;
    const ComplexRational q = a.terms_.begin()->second / b.terms_.begin()->second;
    for (auto ia = a.terms_.begin(), ib = b.terms_.begin(); ia != a.terms_.end(); ++ia, ++ib) {
      if (ia->first != ib->first || !(ia->second == q * ib->second)) return std::nullopt;
    }
    return q;
  }

  friend bool operator==(const ScalarCoeff&, const ScalarCoeff&) = default;

  /// Text in the expression syntax, e.g. "(1/2 * hbar * m^-1 + ...)" for sums.
  [[nodiscard]] std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [p, c] : terms_) {
      std::string t = term_str(p, c);
      if (first) {
        out = t;
      } else if (t.starts_with("- ")) {
        out += " - " + t.substr(2);
      } else {
        out += " + " + t;
      }
      first = false;
    }
    return terms_.size() > 1 ? "( " + out + " )" : out;
  }

 private:
  static std::string term_str(const SymbolPowers& p, const ComplexRational& c) {
    std::string factors;
    for (int k = 0; k < kSymbolCount; ++k) {
      if (p[k] == 0) continue;
      if (!factors.empty()) factors += " * ";
      factors += std::string(kSymbolNames[k]);
      if (p[k] != 1) factors += " ^ " + std::to_string(p[k]);
    }
    std::string num;
    bool negative = false;
    if (c.im.is_zero()) {
      negative = c.re < Rational(0);
      Rational mag = negative ? -c.re : c.re;
      if (!(mag == Rational(1)) || factors.empty()) num = mag.str();
    } else if (c.re.is_zero()) {
      negative = c.im < Rational(0);
      Rational mag = negative ? -c.im : c.im;
      num = mag == Rational(1) ? "i" : mag.str() + " * i";
    } else {
      const std::string im = c.im < Rational(0) ? " - " + (-c.im).str() : " + " + c.im.str();
      num = "( " + c.re.str() + im + " * i )";
    }
    std::string body = num;
    if (!factors.empty()) body = num.empty() ? factors : num + " * " + factors;
    return negative ? "- " + body : body;
  }

  Terms terms_;
};

}  // namespace aam
