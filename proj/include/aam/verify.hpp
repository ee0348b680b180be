#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "aam/boostgen.hpp"
#include "aam/hamiltonians.hpp"

namespace aam {

struct CheckLine {
  std::string name;
  bool passed = true;
  std::string detail;
  bool info = false;  // informational, never fails the run
};

struct VerifyOptions {
  bool mutate_spin_coefficient = false;  // test hook: perturbs the accelerational spin term
  std::optional<Rational> mu_a;          // extra residual report at this value
};

namespace detail {

inline OperatorExpr accelerational_for_verify(const ScalarCoeff& mu, bool mutate) {
  OperatorExpr h = build(HamiltonianSpec::accelerational(mu));
  if (mutate) h = h + hamiltonian_term(HamiltonianKind::accelerational, Term::spin, mu).scale(ScalarCoeff(Rational(1, 2)));
  return h;
}

}  // namespace detail

/// The full symbolic suite, one line per check.
inline std::vector<CheckLine> run_verify(const VerifyOptions& opts = {}) {
  std::vector<CheckLine> out;
  auto check = [&](std::string name, auto&& fn) {
    CheckLine line{std::move(name), false, "", false};
    try {
      std::tie(line.passed, line.detail) = fn();
    } catch (const std::exception& e) {
      line.passed = false;
      line.detail = e.what();
    }
    out.push_back(std::move(line));
  };
  const bool mutate = opts.mutate_spin_coefficient;

  check("hermiticity", [&] {
    TermFlags no_tidal;
    const bool ok = build(HamiltonianSpec::gravitational(no_tidal)).is_hermitian() &&
                    detail::accelerational_for_verify(ScalarCoeff(), mutate).is_hermitian() &&
                    build(HamiltonianSpec::accelerational(ScalarCoeff::symbol(Symbol::mu_a))).is_hermitian() &&
                    build(HamiltonianSpec::free_particle()).is_hermitian();
    return std::pair{ok, std::string("gravitational (tidal off), accelerational, free")};
  });
  {
    const OperatorExpr tidal = hamiltonian_term(HamiltonianKind::gravitational, Term::tidal);
    out.push_back({"tidal-term", true, "T - T^dagger = " + (tidal - tidal.adjoint()).str(), true});
  }

  check("spin-term-ratio", [&] {
    const Rational r = spin_term_ratio(build(HamiltonianSpec::gravitational()),
                                       accel_to_gravity(detail::accelerational_for_verify(ScalarCoeff(), mutate)));
    return std::pair{r == Rational(-2), "ratio = " + r.str()};
  });

  check("residual-mu-minus-3", [&] {
    const OperatorExpr grav = build(HamiltonianSpec::gravitational(TermFlags{}));
    const OperatorExpr res = grav - accel_to_gravity(detail::accelerational_for_verify(ScalarCoeff(-3), mutate));
    return std::pair{res.is_zero(), "residual = " + res.str()};
  });

  check("residual-sweep", [&] {
    int nonzero = 0, total = 0;
    for (int k = -10; k <= 4; ++k) {
      const Rational mu(k, 2);
      if (mu == Rational(-3)) continue;
      ++total;
      if (!equivalence_residual(ScalarCoeff(mu), false).is_zero()) ++nonzero;
    }
    return std::pair{nonzero == total, std::to_string(nonzero) + "/" + std::to_string(total) +
                                           " nonzero for mu_a in -5..2 step 1/2 excluding -3"};
  });

  {
    const CalibrationReport rep = calibrate_convention();
    std::string detail;
    for (const auto& o : rep.outcomes) {
      if (!detail.empty()) detail += "; ";
      detail += convention_name(o.convention) + (o.hermitian ? " hermitian" : " non-hermitian") +
                (o.exact_match ? " exact" : "") + (o.particle_sector_match ? " sector-match" : "");
    }
    out.push_back({"generator-calibration", true, detail, true});
    check("generator-convention", [&] {
      const bool ok = rep.selected && *rep.selected == kCalibratedConvention;
      return std::pair{ok, "selected " + (rep.selected ? convention_name(*rep.selected) : std::string("none"))};
    });
  }

  check("generator-reproduction", [&] {
    const OperatorExpr h0 = build(HamiltonianSpec::free_particle());
    bool ok = true;
    for (const Rational& mu : {Rational(0), Rational(-3), Rational(1, 2), Rational(2), Rational(-1)}) {
      const OperatorExpr inc = particle_sector(boost_increment(chi_prime(ScalarCoeff(mu)), h0));
      const OperatorExpr target = particle_sector(spin_part(detail::accelerational_for_verify(ScalarCoeff(mu), mutate)));
      ok = ok && inc == target;
    }
    return std::pair{ok, std::string("particle sector, mu_a in {0, -3, 1/2, 2, -1}")};
  });

  check("trajectory-neutrality", [&] {
    const bool ok = trajectory_neutrality_check(chi_prime(ScalarCoeff()), build(HamiltonianSpec::free_particle()));
    return std::pair{ok, std::string("every monomial of the increment carries sigma")};
  });

  check("spin-orbit-identity", [&] {
    return std::pair{spin_orbit_identity_check(), std::string("sigma.(g x p) = -Phi sigma.(x x p) = -(2 Phi/hbar) L.S")};
  });

  if (opts.mu_a) {
    const Rational mu = *opts.mu_a;
    const OperatorExpr res = equivalence_residual(ScalarCoeff(mu), false);
    std::string detail = "mu_a = " + mu.str() + ": residual = " + res.str();
    if (mu == Rational(-1)) detail += "; the accelerational spin term vanishes (1 + mu_a = 0)";
    out.push_back({"residual-report", true, detail, true});
  }
  return out;
}

inline bool all_passed(const std::vector<CheckLine>& lines) {
  for (const auto& l : lines)
    if (!l.info && !l.passed) return false;
  return true;
}

inline void print_checks(std::ostream& os, const std::vector<CheckLine>& lines) {
  for (const auto& l : lines) os << (l.info ? "INFO" : l.passed ? "PASS" : "FAIL") << ' ' << l.name << ": " << l.detail << '\n';
}

}  // namespace aam
