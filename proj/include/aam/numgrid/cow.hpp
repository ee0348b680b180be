#pragma once

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "aam/hamiltonians.hpp"
#include "aam/numgrid/realize.hpp"

namespace aam::numgrid {

/// Interferometer arms separated by `height_difference_cm` along the field
/// axis, each traversed in `traversal_time_s`.
struct CowGeometry {
  double height_difference_cm = 0.0;
  double traversal_time_s = 0.0;
};

/// Classical value (beta = +1, transverse positions 0) of a position-only
/// expression at height z, in cgs.
inline double evaluate_at_height(const OperatorExpr& expr, const PhysParams& params, double z_cm) {
  std::array<std::optional<double>, kSymbolCount> values{};
  values[static_cast<int>(Symbol::hbar)] = params.hbar;
  values[static_cast<int>(Symbol::c)] = params.c;
  values[static_cast<int>(Symbol::m)] = params.m;
  values[static_cast<int>(Symbol::a_x)] = 0.0;
  values[static_cast<int>(Symbol::a_y)] = 0.0;
  values[static_cast<int>(Symbol::a_z)] = params.a;
  values[static_cast<int>(Symbol::g_x)] = 0.0;
  values[static_cast<int>(Symbol::g_y)] = 0.0;
  values[static_cast<int>(Symbol::g_z)] = -params.g;
  values[static_cast<int>(Symbol::mu_a)] = params.mu_a;
  if (params.Phi) values[static_cast<int>(Symbol::Phi)] = *params.Phi;

  std::set<std::string> unbound;
  double total = 0.0;
  for (const auto& [g, c] : expr.terms()) {
    if (g.sigma != Pauli::one || g.p != std::array<int, 3>{0, 0, 0})
      throw std::invalid_argument("classical evaluation needs a position-only expression");
    if (g.x[0] > 0 || g.x[1] > 0) continue;
    const cplx v = detail::evaluate(c, values, unbound);
    total += v.real() * std::pow(z_cm, g.x[2]);
  }
  if (!unbound.empty()) throw UnboundSymbols({unbound.begin(), unbound.end()});
  return total;
}

/// Semiclassical phase difference (1/hbar) * [V(upper) - V(lower)] * T between
/// the two arms, from the potential term of the chosen Hamiltonian. For
/// gravity V = -m g.x = m g z; for acceleration V = m a.x = m a z.
inline double cow_phase(HamiltonianKind kind, const CowGeometry& geometry, const PhysParams& params) {
  if (kind == HamiltonianKind::free) throw std::invalid_argument("the free Hamiltonian has no potential term");
  if (geometry.height_difference_cm < 0.0 || geometry.traversal_time_s < 0.0)
    throw std::invalid_argument("COW geometry must be nonnegative");
  params.validate();
  const OperatorExpr potential = hamiltonian_term(kind, Term::potential);
  const double upper = evaluate_at_height(potential, params, geometry.height_difference_cm);
  const double lower = evaluate_at_height(potential, params, 0.0);
  return (upper - lower) * geometry.traversal_time_s / params.hbar;
}

}  // namespace aam::numgrid
