#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aam/rational.hpp"
#include "aam/scalar_coeff.hpp"

namespace aam {

/// Pauli factor of a monomial; `one` means no spin operator.
enum class Pauli : int { one = 0, x = 1, y = 2, z = 3 };

/// Noncommuting generators of the operator algebra.
enum class Generator : int { x_x, x_y, x_z, p_x, p_y, p_z, s_x, s_y, s_z, beta };

inline constexpr std::array<std::string_view, 10> kGeneratorNames = {
    "x_x", "x_y", "x_z", "p_x", "p_y", "p_z", "s_x", "s_y", "s_z", "beta"};

inline std::optional<Generator> generator_from_name(std::string_view name) {
  for (std::size_t k = 0; k < kGeneratorNames.size(); ++k)
    if (kGeneratorNames[k] == name) return static_cast<Generator>(k);
  return std::nullopt;
}

/// Operator content of a canonical monomial: beta^b x^X p^P sigma, with
/// every position factor ahead of every momentum factor.
struct GeneratorPart {
  int beta = 0;
  std::array<int, 3> x{};
  std::array<int, 3> p{};
  Pauli sigma = Pauli::one;

  friend auto operator<=>(const GeneratorPart&, const GeneratorPart&) = default;

  [[nodiscard]] bool is_identity() const { return *this == GeneratorPart{}; }
  [[nodiscard]] bool has_sigma() const { return sigma != Pauli::one; }

  [[nodiscard]] bool is_canonical() const {
    if (beta != 0 && beta != 1) return false;
    for (int k = 0; k < 3; ++k)
      if (x[k] < 0 || p[k] < 0) return false;
    const int s = static_cast<int>(sigma);
    return s >= 0 && s <= 3;
  }

  [[nodiscard]] std::string str() const {
    std::string out;
    auto push = [&](std::string_view name, int power) {
      if (power == 0) return;
      if (!out.empty()) out += " * ";
      out += name;
      if (power != 1) out += " ^ " + std::to_string(power);
    };
    push("beta", beta);
    for (int k = 0; k < 3; ++k) push(kGeneratorNames[k], x[k]);
    for (int k = 0; k < 3; ++k) push(kGeneratorNames[3 + k], p[k]);
    if (sigma != Pauli::one) push(kGeneratorNames[5 + static_cast<int>(sigma)], 1);
    return out;
  }
};

/// One canonical term: scalar coefficient times a generator part.
struct Monomial {
  ScalarCoeff coeff;
  GeneratorPart gen;
};

/// A finite sum of canonical monomials with merged, nonzero coefficients,
/// kept sorted by generator part. Immutable in spirit: every operation
/// returns a fresh, normalized value.
class OperatorExpr {
 public:
  using Terms = std::map<GeneratorPart, ScalarCoeff>;

  OperatorExpr() = default;
  OperatorExpr(ScalarCoeff s) { add_term(GeneratorPart{}, s); }  // NOLINT(google-explicit-constructor)
  OperatorExpr(std::int64_t n) : OperatorExpr(ScalarCoeff(n)) {}  // NOLINT(google-explicit-constructor)
  OperatorExpr(GeneratorPart g, ScalarCoeff s = ScalarCoeff(1)) { add_term(g, s); }

  static OperatorExpr generator(Generator g) {
    GeneratorPart part;
    const int k = static_cast<int>(g);
    if (k < 3) {
      part.x[k] = 1;
    } else if (k < 6) {
      part.p[k - 3] = 1;
    } else if (k < 9) {
      part.sigma = static_cast<Pauli>(k - 5);
    } else {
      part.beta = 1;
    }
    return OperatorExpr(part);
  }
  static OperatorExpr x(int axis) { return generator(static_cast<Generator>(axis)); }
  static OperatorExpr p(int axis) { return generator(static_cast<Generator>(3 + axis)); }
  static OperatorExpr sigma(int axis) { return generator(static_cast<Generator>(6 + axis)); }
  static OperatorExpr beta() { return generator(Generator::beta); }
  static OperatorExpr symbol(Symbol s, int power = 1) { return OperatorExpr(ScalarCoeff::symbol(s, power)); }

  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

  [[nodiscard]] std::vector<Monomial> monomials() const {
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (const auto& [g, c] : terms_) out.push_back({c, g});
    return out;
  }

  void add_term(const GeneratorPart& g, const ScalarCoeff& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(g, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) {
    for (const auto& [g, c] : b.terms_) a.add_term(g, c);
    return a;
  }
  friend OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b) { return a + (-b); }
  OperatorExpr operator-() const { return scale(ScalarCoeff(-1)); }
  friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);
  friend OperatorExpr operator*(const ScalarCoeff& s, const OperatorExpr& a) { return a.scale(s); }
  OperatorExpr& operator+=(const OperatorExpr& o) { return *this = *this + o; }
  OperatorExpr& operator-=(const OperatorExpr& o) { return *this = *this - o; }

  [[nodiscard]] OperatorExpr scale(const ScalarCoeff& s) const {
    OperatorExpr r;
    for (const auto& [g, c] : terms_) r.add_term(g, s * c);
    return r;
  }

  /// Integer power with a nonnegative exponent.
  [[nodiscard]] OperatorExpr pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative power of an operator expression");
    OperatorExpr r(1);
    for (int k = 0; k < e; ++k) r = r * *this;
    return r;
  }

  /// Hermitian conjugate: reverses generator order, conjugates scalars.
  [[nodiscard]] OperatorExpr adjoint() const;

  [[nodiscard]] bool is_hermitian() const { return adjoint() == *this; }

  /// If this expression is a pure scalar (only the identity part), return it.
  [[nodiscard]] std::optional<ScalarCoeff> as_scalar() const {
    if (terms_.empty()) return ScalarCoeff();
    if (terms_.size() == 1 && terms_.begin()->first.is_identity()) return terms_.begin()->second;
    return std::nullopt;
  }

  friend bool operator==(const OperatorExpr&, const OperatorExpr&) = default;

  /// Text in the expression syntax accepted by parse_expr; "0" when empty.
  [[nodiscard]] std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [g, c] : terms_) {
      std::string coeff = c.str();
      std::string body;
      bool negative = false;
      if (g.is_identity()) {
        body = coeff;
      } else if (coeff == "1") {
        body = g.str();
      } else if (coeff == "- 1") {
        negative = true;
        body = g.str();
      } else {
        body = coeff + " * " + g.str();
      }
      if (!negative && body.starts_with("- ")) {
        negative = true;
        body = body.substr(2);
      }
      if (first) {
        out = negative ? "- " + body : body;
      } else {
        out += (negative ? " - " : " + ") + body;
      }
      first = false;
    }
    return out;
  }

 private:
  Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const OperatorExpr& e) { return os << e.str(); }
inline std::ostream& operator<<(std::ostream& os, const ScalarCoeff& s) { return os << s.str(); }

namespace detail {

inline std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

inline std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int j = 2; j <= n; ++j) r *= j;
  return r;
}

/// sigma_a sigma_b = phase * sigma_c with the right-handed convention
/// sigma_x sigma_y = i sigma_z.
inline std::pair<ComplexRational, Pauli> pauli_product(Pauli a, Pauli b) {
  if (a == Pauli::one) return {ComplexRational(1), b};
  if (b == Pauli::one) return {ComplexRational(1), a};
  if (a == b) return {ComplexRational(1), Pauli::one};
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  const int ic = 6 - ia - ib;
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? ComplexRational::i() : -ComplexRational::i(), static_cast<Pauli>(ic)};
}

/// p^n x^k on a single axis, moved into x-before-p order:
/// sum_j j! C(n,j) C(k,j) (-i hbar)^j x^(k-j) p^(n-j).
struct OrderedTerm {
  int x_power;
  int p_power;
  ScalarCoeff coeff;
};

inline std::vector<OrderedTerm> reorder_p_x(int n, int k) {
  std::vector<OrderedTerm> out;
  const ScalarCoeff minus_i_hbar = ScalarCoeff(ComplexRational(Rational(0), Rational(-1))) * ScalarCoeff::symbol(Symbol::hbar);
  for (int j = 0; j <= std::min(n, k); ++j) {
    const ScalarCoeff c = ScalarCoeff(factorial(j) * binomial(n, j) * binomial(k, j)) * minus_i_hbar.pow(j);
    out.push_back({k - j, n - j, c});
  }
  return out;
}

/// Product of two canonical generator parts as a canonical expression.
inline OperatorExpr multiply_parts(const GeneratorPart& a, const GeneratorPart& b) {
  const auto [phase, sigma] = pauli_product(a.sigma, b.sigma);
  GeneratorPart base;
  base.beta = (a.beta + b.beta) % 2;
  base.sigma = sigma;
  // Axes are independent: collect the reordered expansion per axis and take
  // the outer product.
  struct Partial {
    std::array<int, 3> x;
    std::array<int, 3> p;
    ScalarCoeff coeff;
  };
  std::vector<Partial> partials{{a.x, {0, 0, 0}, ScalarCoeff(phase)}};
  for (int axis = 0; axis < 3; ++axis) {
    const auto ordered = reorder_p_x(a.p[axis], b.x[axis]);
    std::vector<Partial> next;
    next.reserve(partials.size() * ordered.size());
    for (const auto& part : partials)
      for (const auto& t : ordered) {
        Partial q = part;
        q.x[axis] += t.x_power;
        q.p[axis] = t.p_power + b.p[axis];
        q.coeff = q.coeff * t.coeff;
        next.push_back(std::move(q));
      }
    partials = std::move(next);
  }
  OperatorExpr out;
  for (auto& part : partials) {
    GeneratorPart g = base;
    g.x = part.x;
    g.p = part.p;
    out.add_term(g, part.coeff);
  }
  return out;
}

}  // namespace detail

inline OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  OperatorExpr r;
  for (const auto& [ga, ca] : a.terms_)
    for (const auto& [gb, cb] : b.terms_) {
      const ScalarCoeff c = ca * cb;
      const OperatorExpr prod = detail::multiply_parts(ga, gb);
      for (const auto& [g, k] : prod.terms()) r.add_term(g, c * k);
    }
  return r;
}

inline OperatorExpr OperatorExpr::adjoint() const {
  OperatorExpr r;
  for (const auto& [g, c] : terms_) {
    // (c beta X P s)^dagger = c* s P X beta, and beta, s commute with x and p.
    GeneratorPart front;
    front.beta = g.beta;
    front.sigma = g.sigma;
    GeneratorPart momenta;
    momenta.p = g.p;
    GeneratorPart positions;
    positions.x = g.x;
    r += OperatorExpr(front, c.conj()) * (OperatorExpr(momenta) * OperatorExpr(positions));
  }
  return r;
}

inline OperatorExpr add(const OperatorExpr& a, const OperatorExpr& b) { return a + b; }
inline OperatorExpr mul(const OperatorExpr& a, const OperatorExpr& b) { return a * b; }
inline OperatorExpr scale(const ScalarCoeff& s, const OperatorExpr& a) { return a.scale(s); }
inline OperatorExpr adjoint(const OperatorExpr& a) { return a.adjoint(); }

inline OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b) { return a * b - b * a; }

/// Replaces scalar symbols by exact values. Every bound name must be a
/// scalar symbol; binding an operator generator is rejected.
inline OperatorExpr substitute(const OperatorExpr& a, const std::map<std::string, ScalarCoeff>& bindings) {
  std::map<Symbol, ScalarCoeff> resolved;
  for (const auto& [name, value] : bindings) {
    if (generator_from_name(name))
      throw std::invalid_argument("cannot bind operator generator '" + name + "'");
    auto s = symbol_from_name(name);
    if (!s) throw std::invalid_argument("unknown scalar symbol '" + name + "'");
    resolved.emplace(*s, value);
  }
  OperatorExpr r;
  for (const auto& [g, c] : a.terms()) r.add_term(g, c.substitute(resolved));
  return r;
}

inline OperatorExpr substitute(const OperatorExpr& a, const std::map<Symbol, ScalarCoeff>& bindings) {
  OperatorExpr r;
  for (const auto& [g, c] : a.terms()) r.add_term(g, c.substitute(bindings));
  return r;
}

/// Merged coefficient of one canonical generator part; zero when absent.
inline ScalarCoeff coefficient_of(const OperatorExpr& a, const GeneratorPart& pattern) {
  if (!pattern.is_canonical()) throw std::invalid_argument("non-canonical generator pattern");
  auto it = a.terms().find(pattern);
  return it == a.terms().end() ? ScalarCoeff() : it->second;
}

/// Pattern given as an expression: must normalize to a single monomial with
/// unit coefficient (so "p_z * x_z", which carries a -i hbar remainder, is rejected).
inline ScalarCoeff coefficient_of(const OperatorExpr& a, const OperatorExpr& pattern) {
  if (pattern.size() != 1 || !(pattern.terms().begin()->second == ScalarCoeff(1)))
    throw std::invalid_argument("pattern is not a single canonical generator part: " + pattern.str());
  return coefficient_of(a, pattern.terms().begin()->first);
}

/// Keeps only the monomials satisfying `pred`.
template <typename Pred>
OperatorExpr filter_terms(const OperatorExpr& a, Pred pred) {
  OperatorExpr r;
  for (const auto& [g, c] : a.terms())
    if (pred(g, c)) r.add_term(g, c);
  return r;
}

}  // namespace aam
