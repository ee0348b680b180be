#pragma once

#include <cctype>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aam/operator_expr.hpp"

namespace aam {

/// Raised for malformed expression text. `token` is the offending token.
struct ParseError : std::invalid_argument {
  ParseError(const std::string& message, std::string tok)
      : std::invalid_argument(message), token(std::move(tok)) {}
  std::string token;
};

/// Unnormalized expression tree, as produced by the parser or built by hand.
struct RawExpr {
  enum class Kind { number, imaginary_unit, symbol, generator, sum, product, power, negate };

  Kind kind = Kind::number;
  Rational number;
  Symbol symbol = Symbol::hbar;
  Generator generator = Generator::beta;
  int exponent = 1;
  std::vector<RawExpr> children;

  static RawExpr num(Rational r) {
    RawExpr e;
    e.number = r;
    return e;
  }
  static RawExpr imag() {
    RawExpr e;
    e.kind = Kind::imaginary_unit;
    return e;
  }
  static RawExpr sym(Symbol s) {
    RawExpr e;
    e.kind = Kind::symbol;
    e.symbol = s;
    return e;
  }
  static RawExpr gen(Generator g) {
    RawExpr e;
    e.kind = Kind::generator;
    e.generator = g;
    return e;
  }
  static RawExpr sum(std::vector<RawExpr> terms) {
    RawExpr e;
    e.kind = Kind::sum;
    e.children = std::move(terms);
    return e;
  }
  static RawExpr product(std::vector<RawExpr> factors) {
    RawExpr e;
    e.kind = Kind::product;
    e.children = std::move(factors);
    return e;
  }
  static RawExpr power(RawExpr base, int exp) {
    RawExpr e;
    e.kind = Kind::power;
    e.exponent = exp;
    e.children.push_back(std::move(base));
    return e;
  }
  static RawExpr negate(RawExpr inner) {
    RawExpr e;
    e.kind = Kind::negate;
    e.children.push_back(std::move(inner));
    return e;
  }
};

/// Rewrites a raw tree into canonical normal form.
inline OperatorExpr normalize(const RawExpr& t) {
  using K = RawExpr::Kind;
  switch (t.kind) {
    case K::number:
      return OperatorExpr(ScalarCoeff(t.number));
    case K::imaginary_unit:
      return OperatorExpr(ScalarCoeff::i());
    case K::symbol:
      return OperatorExpr::symbol(t.symbol);
    case K::generator:
      return OperatorExpr::generator(t.generator);
    case K::sum: {
      OperatorExpr r;
      for (const auto& c : t.children) r += normalize(c);
      return r;
    }
    case K::product: {
      OperatorExpr r(1);
      for (const auto& c : t.children) r = r * normalize(c);
      return r;
    }
    case K::power: {
      OperatorExpr base = normalize(t.children.at(0));
      if (t.exponent >= 0) return base.pow(t.exponent);
      auto scalar = base.as_scalar();
      if (!scalar) throw std::invalid_argument("negative power of a non-scalar operator");
      return OperatorExpr(scalar->pow(t.exponent));
    }
    case K::negate:
      return -normalize(t.children.at(0));
  }
  throw std::logic_error("unreachable raw expression kind");
}

/// A raw tree whose normalization reproduces `e` exactly.
inline RawExpr to_raw(const OperatorExpr& e) {
  std::vector<RawExpr> terms;
  for (const auto& [g, c] : e.terms()) {
    std::vector<RawExpr> coeff_terms;
    for (const auto& [powers, value] : c.terms()) {
      std::vector<RawExpr> f{RawExpr::sum({RawExpr::num(value.re),
                                           RawExpr::product({RawExpr::num(value.im), RawExpr::imag()})})};
      for (int k = 0; k < kSymbolCount; ++k)
        if (powers[k] != 0) f.push_back(RawExpr::power(RawExpr::sym(static_cast<Symbol>(k)), powers[k]));
      coeff_terms.push_back(RawExpr::product(std::move(f)));
    }
    std::vector<RawExpr> factors{RawExpr::sum(std::move(coeff_terms))};
    if (g.beta) factors.push_back(RawExpr::gen(Generator::beta));
    for (int k = 0; k < 3; ++k)
      if (g.x[k]) factors.push_back(RawExpr::power(RawExpr::gen(static_cast<Generator>(k)), g.x[k]));
    for (int k = 0; k < 3; ++k)
      if (g.p[k]) factors.push_back(RawExpr::power(RawExpr::gen(static_cast<Generator>(3 + k)), g.p[k]));
    if (g.has_sigma()) factors.push_back(RawExpr::gen(static_cast<Generator>(5 + static_cast<int>(g.sigma))));
    terms.push_back(RawExpr::product(std::move(factors)));
  }
  return RawExpr::sum(std::move(terms));
}

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) { tokenize(text); }

  RawExpr parse() {
    if (tokens_.empty()) throw ParseError("empty expression", "");
    RawExpr e = parse_sum();
    if (pos_ != tokens_.size()) throw ParseError("unexpected token '" + tokens_[pos_] + "'", tokens_[pos_]);
    return e;
  }

 private:
  void tokenize(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
      const char ch = s[i];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++i;
      } else if (std::string_view("+-*^()").find(ch) != std::string_view::npos) {
        tokens_.emplace_back(1, ch);
        ++i;
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::size_t j = i;
        while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
        tokens_.emplace_back(s.substr(i, j - i));
        i = j;
      } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        tokens_.emplace_back(s.substr(i, j - i));
        i = j;
      } else {
        std::string tok(1, ch);
        throw ParseError("unexpected character '" + tok + "'", tok);
      }
    }
  }

  [[nodiscard]] bool at(std::string_view t) const { return pos_ < tokens_.size() && tokens_[pos_] == t; }

  const std::string& next() {
    if (pos_ >= tokens_.size()) throw ParseError("unexpected end of expression", "");
    return tokens_[pos_++];
  }

  RawExpr parse_sum() {
    std::vector<RawExpr> terms;
    terms.push_back(parse_product());
    while (at("+") || at("-")) {
      const bool minus = next() == "-";
      RawExpr t = parse_product();
      terms.push_back(minus ? RawExpr::negate(std::move(t)) : std::move(t));
    }
    return terms.size() == 1 ? std::move(terms.front()) : RawExpr::sum(std::move(terms));
  }

  RawExpr parse_product() {
    std::vector<RawExpr> factors;
    factors.push_back(parse_unary());
    while (at("*")) {
      next();
      factors.push_back(parse_unary());
    }
    return factors.size() == 1 ? std::move(factors.front()) : RawExpr::product(std::move(factors));
  }

  RawExpr parse_unary() {
    if (at("-")) {
      next();
      return RawExpr::negate(parse_unary());
    }
    if (at("+")) {
      next();
      return parse_unary();
    }
    return parse_power();
  }

  RawExpr parse_power() {
    RawExpr base = parse_atom();
    if (!at("^")) return base;
    next();
    bool negative = false;
    if (at("-")) {
      next();
      negative = true;
    }
    const std::string tok = next();
    if (tok.empty() || !std::isdigit(static_cast<unsigned char>(tok[0])) || tok.find('/') != std::string::npos)
      throw ParseError("exponent must be an integer, got '" + tok + "'", tok);
    const int e = std::stoi(tok);
    return RawExpr::power(std::move(base), negative ? -e : e);
  }

  RawExpr parse_atom() {
    const std::string tok = next();
    if (tok == "(") {
      RawExpr e = parse_sum();
      if (!at(")")) throw ParseError("missing ')'", pos_ < tokens_.size() ? tokens_[pos_] : "");
      next();
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
      try {
        return RawExpr::num(Rational::parse(tok));
      } catch (const std::exception&) {
        throw ParseError("malformed number '" + tok + "'", tok);
      }
    }
    if (tok == "i") return RawExpr::imag();
    if (auto g = generator_from_name(tok)) return RawExpr::gen(*g);
    if (auto s = symbol_from_name(tok)) return RawExpr::sym(*s);
    throw ParseError("unknown symbol '" + tok + "'", tok);
  }

  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the textual syntax into a raw tree without normalizing.
inline RawExpr parse_raw(std::string_view text) { return detail::ExprParser(text).parse(); }

/// Parses and normalizes.
inline OperatorExpr parse_expr(std::string_view text) { return normalize(parse_raw(text)); }

}  // namespace aam
