#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aam/operator_expr.hpp"

namespace aam {

enum class HamiltonianKind { gravitational, accelerational, free };

enum class Term { rest_mass, potential, kinetic, kinetic_redshift, spin, tidal };

inline constexpr std::array<Term, 6> kAllTerms = {Term::rest_mass, Term::potential,        Term::kinetic,
                                                  Term::kinetic_redshift, Term::spin, Term::tidal};

inline std::string term_name(Term t) {
  switch (t) {
    case Term::rest_mass: return "rest_mass";
    case Term::potential: return "potential";
    case Term::kinetic: return "kinetic";
    case Term::kinetic_redshift: return "kinetic_redshift";
    case Term::spin: return "spin";
    case Term::tidal: return "tidal";
  }
  return "?";
}

inline std::optional<Term> term_from_name(std::string_view name) {
  for (Term t : kAllTerms)
    if (term_name(t) == name) return t;
  return std::nullopt;
}

struct TermFlags {
  bool rest_mass = true;
  bool potential = true;
  bool kinetic = true;
  bool kinetic_redshift = true;
  bool spin = true;
  bool tidal = false;

  static TermFlags none() { return {false, false, false, false, false, false}; }
  static TermFlags only(Term t) {
    TermFlags f = none();
    f.set(t, true);
    return f;
  }

  [[nodiscard]] bool get(Term t) const {
    switch (t) {
      case Term::rest_mass: return rest_mass;
      case Term::potential: return potential;
      case Term::kinetic: return kinetic;
      case Term::kinetic_redshift: return kinetic_redshift;
      case Term::spin: return spin;
      case Term::tidal: return tidal;
    }
    return false;
  }
  void set(Term t, bool on) {
    switch (t) {
      case Term::rest_mass: rest_mass = on; break;
      case Term::potential: potential = on; break;
      case Term::kinetic: kinetic = on; break;
      case Term::kinetic_redshift: kinetic_redshift = on; break;
      case Term::spin: spin = on; break;
      case Term::tidal: tidal = on; break;
    }
  }
};

/// Which Hamiltonian to build and which of its terms to keep. The field is
/// always along z: a = a_z z-hat for acceleration, g = g_z z-hat for gravity.
/// `mu_a` is a scalar so it can be an exact number or the symbol mu_a.
struct HamiltonianSpec {
  HamiltonianKind kind = HamiltonianKind::free;
  TermFlags flags;
  std::optional<ScalarCoeff> mu_a;

  static HamiltonianSpec gravitational(TermFlags f = {true, true, true, true, true, true}) {
    return {HamiltonianKind::gravitational, f, std::nullopt};
  }
  static HamiltonianSpec accelerational(ScalarCoeff mu, TermFlags f = {}) {
    return {HamiltonianKind::accelerational, f, std::move(mu)};
  }
  static HamiltonianSpec free_particle() {
    TermFlags f = TermFlags::none();
    f.rest_mass = f.kinetic = true;
    return {HamiltonianKind::free, f, std::nullopt};
  }

  void validate() const {
    if (mu_a.has_value() != (kind == HamiltonianKind::accelerational))
      throw std::invalid_argument("mu_a must be given exactly for the accelerational Hamiltonian");
    if (kind == HamiltonianKind::accelerational && flags.tidal)
      throw std::invalid_argument("the tidal term exists only in the gravitational Hamiltonian");
    if (kind == HamiltonianKind::free &&
        (flags.potential || flags.kinetic_redshift || flags.spin || flags.tidal))
      throw std::invalid_argument("the free Hamiltonian has only rest-mass and kinetic terms");
  }
};

namespace detail {

using Vec3 = std::array<OperatorExpr, 3>;

inline Vec3 position_vec() { return {OperatorExpr::x(0), OperatorExpr::x(1), OperatorExpr::x(2)}; }
inline Vec3 momentum_vec() { return {OperatorExpr::p(0), OperatorExpr::p(1), OperatorExpr::p(2)}; }
inline Vec3 sigma_vec() { return {OperatorExpr::sigma(0), OperatorExpr::sigma(1), OperatorExpr::sigma(2)}; }

/// Field vectors along z only.
inline Vec3 accel_vec() { return {OperatorExpr(), OperatorExpr(), OperatorExpr::symbol(Symbol::a_z)}; }
inline Vec3 gravity_vec() { return {OperatorExpr(), OperatorExpr(), OperatorExpr::symbol(Symbol::g_z)}; }

/// Sum_i u_i v_i with the factors kept in the given order.
inline OperatorExpr dot(const Vec3& u, const Vec3& v) {
  OperatorExpr r;
  for (int k = 0; k < 3; ++k) r += u[k] * v[k];
  return r;
}

/// (u x v)_k = eps_kij u_i v_j, factor order preserved.
inline Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

inline OperatorExpr sym(Symbol s, int power = 1) { return OperatorExpr::symbol(s, power); }
inline OperatorExpr rat(std::int64_t n, std::int64_t d = 1) { return OperatorExpr(ScalarCoeff(Rational(n, d))); }

/// beta / (m c^2)
inline OperatorExpr beta_over_mc2() { return OperatorExpr::beta() * sym(Symbol::m, -1) * sym(Symbol::c, -2); }

}  // namespace detail

/// One term of the chosen Hamiltonian, independent of the flags.
inline OperatorExpr hamiltonian_term(HamiltonianKind kind, Term t, const ScalarCoeff& mu_a = ScalarCoeff()) {
  using namespace detail;
  const OperatorExpr beta = OperatorExpr::beta();
  const Vec3 x = position_vec(), p = momentum_vec(), s = sigma_vec();
  const bool grav = kind == HamiltonianKind::gravitational;
  const Vec3 field = grav ? gravity_vec() : accel_vec();

  if (kind == HamiltonianKind::free && t != Term::rest_mass && t != Term::kinetic) return {};
  if (kind != HamiltonianKind::gravitational && t == Term::tidal) return {};

  switch (t) {
    case Term::rest_mass:
      return beta * sym(Symbol::m) * sym(Symbol::c, 2);
    case Term::potential:
      // -beta m g.x   /   +beta m a.x
      return rat(grav ? -1 : 1) * beta * sym(Symbol::m) * dot(field, x);
    case Term::kinetic:
      return rat(1, 2) * beta * sym(Symbol::m, -1) * dot(p, p);
    case Term::kinetic_redshift: {
      // p.(f.x)p = sum_i p_i (f.x) p_i, ordering as written.
      const OperatorExpr fx = dot(field, x);
      OperatorExpr sandwich;
      for (int k = 0; k < 3; ++k) sandwich += p[k] * fx * p[k];
      return rat(grav ? -1 : 1, 2) * beta_over_mc2() * sandwich;
    }
    case Term::spin: {
      const OperatorExpr s_dot = dot(s, cross(field, p));
      if (grav) return rat(1, 2) * sym(Symbol::hbar) * beta_over_mc2() * s_dot;
      return (OperatorExpr(1) + OperatorExpr(mu_a)) * rat(1, 4) * sym(Symbol::hbar) * beta_over_mc2() * s_dot;
    }
    case Term::tidal:
      // -(beta/mc^2)(p.g)(x.p), ordering as written.
      return rat(-1) * beta_over_mc2() * dot(p, field) * dot(x, p);
  }
  return {};
}

/// The flag-gated Hamiltonian as a canonical expression.
inline OperatorExpr build(const HamiltonianSpec& spec) {
  spec.validate();
  const ScalarCoeff mu = spec.mu_a.value_or(ScalarCoeff());
  OperatorExpr h;
  for (Term t : kAllTerms)
    if (spec.flags.get(t)) h += hamiltonian_term(spec.kind, t, mu);
  return h;
}

/// a -> -g on every field component.
inline OperatorExpr accel_to_gravity(const OperatorExpr& e) {
  return substitute(e, std::map<Symbol, ScalarCoeff>{{Symbol::a_x, -ScalarCoeff::symbol(Symbol::g_x)},
                                                     {Symbol::a_y, -ScalarCoeff::symbol(Symbol::g_y)},
                                                     {Symbol::a_z, -ScalarCoeff::symbol(Symbol::g_z)}});
}

/// build(gravitational) - build(accelerational, mu_a) with a = -g.
inline OperatorExpr equivalence_residual(const ScalarCoeff& mu_a, bool include_tidal) {
  TermFlags grav_flags;
  grav_flags.tidal = include_tidal;
  const OperatorExpr grav = build(HamiltonianSpec::gravitational(grav_flags));
  const OperatorExpr acc = accel_to_gravity(build(HamiltonianSpec::accelerational(mu_a)));
  return grav - acc;
}

/// Exact q with a == q * b, or nullopt if no such number exists.
/// Throws DivisionByZero when b is the zero expression.
inline std::optional<ComplexRational> expression_ratio(const OperatorExpr& a, const OperatorExpr& b) {
  if (b.is_zero()) throw DivisionByZero("ratio against the zero expression");
  if (a.size() != b.size()) return std::nullopt;
  std::optional<ComplexRational> q;
  for (auto ia = a.terms().begin(), ib = b.terms().begin(); ia != a.terms().end(); ++ia, ++ib) {
    if (!(ia->first == ib->first)) return std::nullopt;
    auto r = ScalarCoeff::ratio(ia->second, ib->second);
    if (!r || (q && !(*q == *r))) return std::nullopt;
    q = r;
  }
  return q;
}

inline OperatorExpr spin_part(const OperatorExpr& e) {
  return filter_terms(e, [](const GeneratorPart& g, const ScalarCoeff&) { return g.has_sigma(); });
}

/// Ratio of the spin terms of two full Hamiltonians (the second already
/// expressed through g). Fails if the structures are not proportional.
inline Rational spin_term_ratio(const OperatorExpr& grav, const OperatorExpr& acc_as_gravity) {
  auto q = expression_ratio(spin_part(grav), spin_part(acc_as_gravity));
  if (!q) throw std::runtime_error("spin terms are not proportional");
  if (!q->is_real()) throw std::runtime_error("spin term ratio is not real");
  return q->re;
}

/// Gravitational spin coefficient over the accelerational one at a = -g.
inline Rational spin_term_ratio(const Rational& mu_a = Rational(0)) {
  return spin_term_ratio(build(HamiltonianSpec::gravitational()),
                         accel_to_gravity(build(HamiltonianSpec::accelerational(ScalarCoeff(mu_a)))));
}

/// Checks sigma.(x cross p) == (factor/hbar) L.S with L = x cross p and
/// S = hbar sigma / 2, and the gravitational form with g = -Phi x.
/// `factor` is 2 for the true identity; other values serve as mutation controls.
inline bool spin_orbit_identity_check(const Rational& factor = Rational(2)) {
  using namespace detail;
  const Vec3 x = position_vec(), p = momentum_vec(), s = sigma_vec();
  const Vec3 l = cross(x, p);
  Vec3 spin;
  for (int k = 0; k < 3; ++k) spin[k] = rat(1, 2) * sym(Symbol::hbar) * s[k];
  const OperatorExpr lhs = dot(s, l);
  const OperatorExpr ls = dot(l, spin);
  const OperatorExpr rhs = OperatorExpr(ScalarCoeff(factor)) * sym(Symbol::hbar, -1) * ls;
  if (!(lhs == rhs)) return false;

  // sigma.(g x p) with g = -Phi x, the radial factor absorbed into Phi.
  Vec3 g;
  for (int k = 0; k < 3; ++k) g[k] = rat(-1) * sym(Symbol::Phi) * x[k];
  const OperatorExpr grav_form = dot(s, cross(g, p));
  return grav_form == rat(-1) * sym(Symbol::Phi) * lhs &&
         grav_form == rat(-1) * OperatorExpr(ScalarCoeff(factor)) * sym(Symbol::Phi) * sym(Symbol::hbar, -1) * ls;
}

}  // namespace aam
