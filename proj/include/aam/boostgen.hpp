#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "aam/hamiltonians.hpp"
#include "aam/operator_expr.hpp"

// The full acceleration generator is chi = chi_Gamma0 + chi' + f_chi. Only
// the spin-bearing chi' is materialized here. The other two pieces are known
// only through their contracts: chi_Gamma0 generates the potential term
// beta m a.x from the free Hamiltonian, and f_chi commutes with it.

namespace aam {

/// chi'_k = (1 + mu_a) beta / (4 i c^2) (sigma x x)_k, k = x, y, z.
struct BoostGenerator {
  ScalarCoeff mu_a;
  std::array<OperatorExpr, 3> components;

  /// True when every monomial of every component carries a Pauli factor.
  [[nodiscard]] bool is_spin_only() const {
    for (const auto& c : components)
      for (const auto& [g, coeff] : c.terms())
        if (!g.has_sigma()) return false;
    return true;
  }
};

inline BoostGenerator chi_prime(const ScalarCoeff& mu_a) {
  using namespace detail;
  // 1/(4i) = -i/4
  const OperatorExpr prefactor = (OperatorExpr(1) + OperatorExpr(mu_a)) * OperatorExpr::beta() *
                                 OperatorExpr(ScalarCoeff(ComplexRational(Rational(0), Rational(-1, 4)))) *
                                 sym(Symbol::c, -2);
  const Vec3 sx = cross(sigma_vec(), position_vec());
  BoostGenerator gen{mu_a, {}};
  for (int k = 0; k < 3; ++k) gen.components[k] = prefactor * sx[k];
  return gen;
}

/// How the increment is formed from a.chi' and H0.
///   plain:          [a.chi', H0]
///   times_i:        i [a.chi', H0]
///   reversed:       [H0, a.chi']      (H0 -> U^dagger H0 U with U = exp(a.chi'))
///   reversed_times_i: i [H0, a.chi']
enum class BoostConvention { plain, times_i, reversed, reversed_times_i };

inline std::string convention_name(BoostConvention c) {
  switch (c) {
    case BoostConvention::plain: return "[a.chi', H0]";
    case BoostConvention::times_i: return "i[a.chi', H0]";
    case BoostConvention::reversed: return "[H0, a.chi']";
    case BoostConvention::reversed_times_i: return "i[H0, a.chi']";
  }
  return "?";
}

inline constexpr std::array<BoostConvention, 4> kAllConventions = {
    BoostConvention::plain, BoostConvention::times_i, BoostConvention::reversed,
    BoostConvention::reversed_times_i};

/// Selected by calibrate_convention(); pinned here and re-checked by tests.
inline constexpr BoostConvention kCalibratedConvention = BoostConvention::reversed;

/// a.chi' with the acceleration along z.
inline OperatorExpr accel_dot_generator(const BoostGenerator& gen) {
  return detail::dot(detail::accel_vec(), gen.components);
}

inline OperatorExpr boost_increment(const BoostGenerator& gen, const OperatorExpr& h0,
                                    BoostConvention conv = kCalibratedConvention) {
  if (!h0.is_hermitian()) throw std::invalid_argument("H0 must be Hermitian");
  const OperatorExpr g = accel_dot_generator(gen);
  OperatorExpr inc;
  switch (conv) {
    case BoostConvention::plain:
    case BoostConvention::times_i:
      inc = commutator(g, h0);
      break;
    case BoostConvention::reversed:
    case BoostConvention::reversed_times_i:
      inc = commutator(h0, g);
      break;
  }
  if (conv == BoostConvention::times_i || conv == BoostConvention::reversed_times_i)
    inc = inc.scale(ScalarCoeff::i());
  return inc;
}

/// Restriction to the positive-energy block of the Foldy-Wouthuysen
/// representation, where beta acts as +1.
inline OperatorExpr particle_sector(const OperatorExpr& e) {
  OperatorExpr r;
  for (const auto& [g, c] : e.terms()) {
    GeneratorPart q = g;
    q.beta = 0;
    r.add_term(q, c);
  }
  return r;
}

struct ConventionOutcome {
  BoostConvention convention;
  OperatorExpr increment;
  bool hermitian;
  bool exact_match;            // identical to the accelerational spin term
  bool particle_sector_match;  // identical once beta = +1
};

struct CalibrationReport {
  std::vector<ConventionOutcome> outcomes;
  std::optional<BoostConvention> selected;
};

/// Tries every convention on chi'(mu_a = 0) and the free Hamiltonian and picks
/// the unique one whose increment is Hermitian and reproduces the
/// accelerational spin term. Exact equality is preferred; failing that, the
/// particle-sector comparison decides. The generator carries one beta and H0
/// another, so the commutator is beta-even while the spin term is beta-odd:
/// exact equality never happens and the sector comparison is what decides.
inline CalibrationReport calibrate_convention() {
  const BoostGenerator gen = chi_prime(ScalarCoeff());
  const OperatorExpr h0 = build(HamiltonianSpec::free_particle());
  const OperatorExpr target = hamiltonian_term(HamiltonianKind::accelerational, Term::spin, ScalarCoeff());
  CalibrationReport report;
  for (BoostConvention c : kAllConventions) {
    OperatorExpr inc = boost_increment(gen, h0, c);
    ConventionOutcome o{c, inc, inc.is_hermitian(), inc == target,
                        particle_sector(inc) == particle_sector(target)};
    report.outcomes.push_back(std::move(o));
  }
  auto pick = [&](auto pred) -> std::optional<BoostConvention> {
    std::optional<BoostConvention> found;
    for (const auto& o : report.outcomes)
      if (o.hermitian && pred(o)) {
        if (found) return std::nullopt;
        found = o.convention;
      }
    return found;
  };
  report.selected = pick([](const ConventionOutcome& o) { return o.exact_match; });
  if (!report.selected) report.selected = pick([](const ConventionOutcome& o) { return o.particle_sector_match; });
  return report;
}

/// True iff the increment generated from H0 has no spin-independent
/// monomial, i.e. the generator cannot act as a force on the trajectory.
inline bool trajectory_neutrality_check(const BoostGenerator& gen, const OperatorExpr& h0) {
  const OperatorExpr inc = boost_increment(gen, h0);
  for (const auto& [g, c] : inc.terms())
    if (!g.has_sigma()) return false;
  return true;
}

}  // namespace aam
