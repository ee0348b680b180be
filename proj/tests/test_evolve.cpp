#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "aam/hamiltonians.hpp"
#include "aam/numgrid/cow.hpp"
#include "aam/numgrid/evolve.hpp"
#include "aam/numgrid/precession.hpp"
#include "aam/numgrid/probe.hpp"
#include "oracles.hpp"

using namespace aam;
using namespace aam::numgrid;

namespace {

RealizationContext make_ctx(int n, double a, double px, double py = 0.0) {
  RealizationContext ctx;
  ctx.grid = {n, 1e-3};
  ctx.params.a = a;
  ctx.params.g = a;
  ctx.p_x = px;
  ctx.p_y = py;
  return ctx;
}

MatrixOp spin_only(const Rational& mu, const RealizationContext& ctx) {
  return realize(build(HamiltonianSpec::accelerational(ScalarCoeff(mu), TermFlags::only(Term::spin))), ctx);
}

Trajectory run_spin(const Rational& mu, double a, double px, double py, int periods = 5, int steps = 1000,
                    EvolutionMethod method = EvolutionMethod::eigen_exponential) {
  const auto ctx = make_ctx(32, a, px, py);
  const double omega = oracle::accel_spin_omega(mu.to_double(), a, px, py);
  const double dt = periods * 2.0 * std::numbers::pi / omega / steps;
  const auto psi = SpinorState::gaussian(ctx.grid, 0.0, 0.0, 5e-5);
  return evolve(spin_only(mu, ctx), psi, dt, steps, method);
}

}  // namespace

TEST(Evolve, ZeroHamiltonianLeavesStateUnchanged) {
  const auto ctx = make_ctx(32, 0.0, 0.0);
  const MatrixOp zero = realize(OperatorExpr(), ctx);
  const auto psi = SpinorState::gaussian(ctx.grid, 1.0, 0.4, 5e-5);
  const Trajectory t = evolve(zero, psi, 1.0, 20);
  for (const auto& p : t.points) {
    EXPECT_NEAR(p.spin.theta, 1.0, 1e-13);
    EXPECT_NEAR(p.spin.phi, 0.4, 1e-13);
  }
}

TEST(Evolve, RestEnergyIsAGlobalPhase) {
  const auto ctx = make_ctx(32, 0.0, 0.0);
  const MatrixOp rest = realize(hamiltonian_term(HamiltonianKind::free, Term::rest_mass), ctx);
  const auto psi = SpinorState::gaussian(ctx.grid, 2.0, -1.0, 5e-5);
  for (auto method : {EvolutionMethod::eigen_exponential, EvolutionMethod::crank_nicolson}) {
    const Trajectory t = evolve(rest, psi, 1e-3, 50, method);
    for (const auto& p : t.points) {
      EXPECT_NEAR(p.spin.sx, t.points[0].spin.sx, 1e-13);
      EXPECT_NEAR(p.spin.sy, t.points[0].spin.sy, 1e-13);
      EXPECT_NEAR(p.spin.sz, t.points[0].spin.sz, 1e-13);
      EXPECT_NEAR(p.z_mean, t.points[0].z_mean, 1e-15);
    }
  }
}

TEST(Evolve, RejectsBadInput) {
  const auto ctx = make_ctx(32, 1e9, 1e-19);
  const auto psi = SpinorState::gaussian(ctx.grid, 1.0, 0.0, 5e-5);
  const MatrixOp tidal = realize(hamiltonian_term(HamiltonianKind::gravitational, Term::tidal), ctx);
  EXPECT_THROW(evolve(tidal, psi, 1.0, 10), std::invalid_argument);
  const MatrixOp h = spin_only(Rational(0), ctx);
  EXPECT_THROW(evolve(h, psi, 0.0, 10), std::invalid_argument);
  EXPECT_THROW(evolve(h, psi, -1.0, 10), std::invalid_argument);
}

TEST(Evolve, SamplesEveryStepIncludingStart) {
  const Trajectory t = run_spin(Rational(0), 981.0, 3.35e-19, 0.0, 1, 40);
  ASSERT_EQ(t.size(), 41u);
  EXPECT_EQ(t.points.front().t, 0.0);
  EXPECT_NEAR(t.points[1].t * 40, t.points.back().t, 1e-9 * t.points.back().t);
}

TEST(Evolve, NormAndEnergyConservedWithKineticTerms) {
  // Spin, kinetic and potential terms on a moving packet.
  auto ctx = make_ctx(64, 981.0, 3e-19, 1e-19);
  TermFlags flags = TermFlags::none();
  flags.set(Term::kinetic, true);
  flags.set(Term::spin, true);
  flags.set(Term::potential, true);
  const MatrixOp h = realize(build(HamiltonianSpec::accelerational(ScalarCoeff(0), flags)), ctx);
  const auto psi = SpinorState::gaussian(ctx.grid, 1.1, 0.2, ctx.grid.length_cm / 20, 0.0,
                                         2 * std::numbers::pi * 4 / ctx.grid.length_cm);
  // The packet moves about a tenth of the box, well clear of the boundary.
  const double dt = 4e-3 * h.units.time_s() / 1000.0;
  const Trajectory e = evolve(h, psi, dt, 1000, EvolutionMethod::eigen_exponential);
  EXPECT_LE(e.max_norm_drift(), 1e-10);
  EXPECT_LE(e.max_relative_energy_drift(), 1e-8);
  const Trajectory cn = evolve(h, psi, dt, 1000, EvolutionMethod::crank_nicolson);
  EXPECT_LE(cn.max_norm_drift(), 1e-8);
  EXPECT_LE(cn.max_relative_energy_drift(), 1e-8);
}

TEST(Evolve, CrankNicolsonConvergesQuadratically) {
  const auto ctx = make_ctx(32, 981.0, 3.35e-19, 1e-19);
  const MatrixOp h = spin_only(Rational(0), ctx);
  const double omega = oracle::accel_spin_omega(0.0, 981.0, 3.35e-19, 1e-19);
  const auto psi = SpinorState::gaussian(ctx.grid, 0.4, 0.0, 5e-5);
  const double t_end = 2.0 * std::numbers::pi / omega;
  auto gap = [&](int steps) {
    const double dt = t_end / steps;
    const auto a = evolve(h, psi, dt, steps, EvolutionMethod::eigen_exponential);
    const auto b = evolve(h, psi, dt, steps, EvolutionMethod::crank_nicolson);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const auto& s = a.points[k].spin;
      const auto& r = b.points[k].spin;
      worst = std::max(worst, std::hypot(s.sx - r.sx, s.sy - r.sy, s.sz - r.sz));
    }
    return worst;
  };
  const double coarse = gap(50), fine = gap(100);
  EXPECT_NEAR(coarse / fine, 4.0, 0.2);
}

TEST(Evolve, CsvFormat) {
  const Trajectory t = run_spin(Rational(0), 981.0, 3.35e-19, 0.0, 1, 4);
  std::ostringstream os;
  write_trajectory_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,sx,sy,sz,theta,phi,norm,z_mean");
  std::getline(is, line);
  // Spin starts at the pole, where phi is indeterminate.
  EXPECT_NE(line.find(",nan,"), std::string::npos);
  int rows = 1;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST(Precession, SyntheticCosine) {
  Trajectory t;
  const double w0 = 3.7;
  for (int k = 0; k <= 600; ++k) {
    const double tt = 0.01 * k;
    TrajectoryPoint p;
    p.t = tt;
    p.spin = bloch_from_components(std::sin(w0 * tt), 0.0, std::cos(w0 * tt));
    t.points.push_back(p);
  }
  const auto est = precession_frequency(t);
  ASSERT_FALSE(est.is_static);
  EXPECT_NEAR(est.omega / w0, 1.0, 1e-4);
}

TEST(Precession, StaticSpin) {
  Trajectory t;
  for (int k = 0; k < 100; ++k) {
    TrajectoryPoint p;
    p.t = k;
    p.spin = bloch_from_components(0.0, 0.0, 1.0);
    t.points.push_back(p);
  }
  EXPECT_TRUE(precession_frequency(t).is_static);
}

TEST(Precession, MatchesClosedFormForSeveralSettings) {
  struct Case {
    Rational mu;
    double a, px, py;
  };
  for (const Case& c : {Case{Rational(0), 981.0, 3.35e-19, 0.0}, Case{Rational(-3), 981.0, 3.35e-19, 0.0},
                        Case{Rational(1, 2), 2.7e4, 1e-19, 2e-19}, Case{Rational(-2, 3), 5e3, 0.0, -6e-19}}) {
    const auto t = run_spin(c.mu, c.a, c.px, c.py);
    const auto est = precession_frequency(t);
    const double expected = oracle::accel_spin_omega(c.mu.to_double(), c.a, c.px, c.py);
    EXPECT_NEAR(est.omega / expected, 1.0, 1e-4) << c.mu.str();
  }
}

TEST(Precession, MuMinusThreeDoublesFrequencyAndReversesSense) {
  const auto t0 = run_spin(Rational(0), 981.0, 3.35e-19, 0.0);
  const auto t3 = run_spin(Rational(-3), 981.0, 3.35e-19, 0.0, 10);
  const double ratio = precession_frequency(t3).omega / precession_frequency(t0).omega;
  EXPECT_NEAR(ratio, 2.0, 1e-3);
  // The precession axis is a x p, along +y here.
  const std::array<double, 3> axis{0.0, 1.0, 0.0};
  EXPECT_EQ(rotation_sense(t0, axis), -rotation_sense(t3, axis));
  EXPECT_NE(rotation_sense(t0, axis), 0);
}

TEST(Precession, GravitationalIsTwiceAccelerational) {
  const double g = 981.0, px = 3.35e-19;
  const auto ctx = make_ctx(32, g, px);
  const MatrixOp hg =
      realize(build(HamiltonianSpec::gravitational(TermFlags::only(Term::spin))), ctx);
  const double omega_g = oracle::grav_spin_omega(g, px, 0.0);
  const double dt = 5 * 2.0 * std::numbers::pi / omega_g / 1000;
  const auto psi = SpinorState::gaussian(ctx.grid, 0.0, 0.0, 5e-5);
  const auto tg = evolve(hg, psi, dt, 1000);
  const auto ta = run_spin(Rational(0), g, px, 0.0, 5, 1000);
  EXPECT_NEAR(precession_frequency(tg).omega / omega_g, 1.0, 1e-4);
  EXPECT_NEAR(precession_frequency(tg).omega / precession_frequency(ta).omega, 2.0, 1e-3);
}

TEST(Precession, AffineInMuVanishingAtMinusOne) {
  std::vector<double> mus, omegas;
  for (const Rational& mu : {Rational(0), Rational(1, 2), Rational(1), Rational(2)}) {
    mus.push_back(mu.to_double());
    // Signed frequency: sense about a x p times magnitude.
    const auto t = run_spin(mu, 981.0, 3.35e-19, 0.0);
    omegas.push_back(precession_frequency(t).omega * -rotation_sense(t, {0.0, 1.0, 0.0}));
  }
  // Least-squares line through the points.
  const double n = static_cast<double>(mus.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < mus.size(); ++k) {
    sx += mus[k];
    sy += omegas[k];
    sxx += mus[k] * mus[k];
    sxy += mus[k] * omegas[k];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  for (std::size_t k = 0; k < mus.size(); ++k)
    EXPECT_NEAR((icpt + slope * mus[k]) / omegas[k], 1.0, 1e-6);
  EXPECT_NEAR(-icpt / slope, -1.0, 1e-6);
  // mu = -1 switches the term off entirely.
  const auto ctx = make_ctx(32, 981.0, 3.35e-19);
  const auto psi = SpinorState::gaussian(ctx.grid, 0.0, 0.0, 5e-5);
  EXPECT_TRUE(precession_frequency(evolve(spin_only(Rational(-1), ctx), psi, 1e10, 100)).is_static);
}

TEST(Cow, ZeroHeightGivesZero) {
  PhysParams p;
  p.g = 981.0;
  p.a = 981.0;
  EXPECT_EQ(cow_phase(HamiltonianKind::gravitational, {0.0, 1e-4}, p), 0.0);
  EXPECT_EQ(cow_phase(HamiltonianKind::accelerational, {0.0, 1e-4}, p), 0.0);
}

TEST(Cow, MatchesClosedFormAndIsLinearInTime) {
  PhysParams p;
  p.g = 980.665;
  const CowGeometry geo{3.0, 2.5e-4};
  const double phi = cow_phase(HamiltonianKind::gravitational, geo, p);
  EXPECT_NEAR(phi / oracle::cow_phase(p.m, p.g, 3.0, 2.5e-4), 1.0, 1e-13);
  EXPECT_NEAR(cow_phase(HamiltonianKind::gravitational, {3.0, 5e-4}, p) / phi, 2.0, 1e-14);
}

TEST(Cow, GravityAndAccelerationAgree) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> h(0.1, 10.0), t(1e-5, 1e-3), g(100.0, 3e4);
  for (int k = 0; k < 10; ++k) {
    PhysParams p;
    p.g = g(rng);
    p.a = p.g;  // a = -g with g = -g z-hat
    const CowGeometry geo{h(rng), t(rng)};
    const double pg = cow_phase(HamiltonianKind::gravitational, geo, p);
    const double pa = cow_phase(HamiltonianKind::accelerational, geo, p);
    EXPECT_NEAR(pg / pa, 1.0, 1e-12);
  }
}

TEST(Cow, Rejections) {
  PhysParams p;
  EXPECT_THROW(cow_phase(HamiltonianKind::free, {1.0, 1.0}, p), std::invalid_argument);
  EXPECT_THROW(cow_phase(HamiltonianKind::gravitational, {-1.0, 1.0}, p), std::invalid_argument);
}

TEST(Probe, MirrorAndReversalHold) {
  const auto ctx = make_ctx(32, 981.0, 3.35e-19);
  const std::vector<double> thetas{std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3,
                                   std::numbers::pi / 2};
  const ProbeReport r = symmetry_probe(Rational(0), thetas, ctx, 32, 11, 0.3);
  ASSERT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.mirror_holds) << row.theta0;
    EXPECT_TRUE(row.sign_reversed) << row.theta0;
    EXPECT_LT(row.member_mirror_defect, 1e-6 * row.rate_scale);
    EXPECT_LT(row.member_reversal_defect, 1e-6 * row.rate_scale);
  }
  EXPECT_TRUE(r.all_hold());
}

TEST(Probe, MemberRatesMatchClosedForm) {
  // One member: dtheta/dt = omega cos(phi - alpha) with alpha the azimuth of
  // p_perp (worked out from the precession about a x p).
  const double a = 981.0, pp = 3.35e-19;
  const auto ctx = make_ctx(32, a, pp);
  const double omega = oracle::accel_spin_omega(0.0, a, pp, 0.0);
  const MatrixOp h = spin_only(Rational(0), ctx);
  for (double phi : {0.0, 0.9, 2.5}) {
    const auto psi = SpinorState::gaussian(ctx.grid, 1.0, phi, 5e-5).amplitudes;
    const SpinRates r = spin_rates(h, psi);
    EXPECT_NEAR(r.dtheta_dt / (omega * std::cos(phi)), 1.0, 1e-9) << phi;
  }
}

TEST(Probe, PerMemberPhiDriftIsNonzero) {
  const auto ctx = make_ctx(32, 981.0, 3.35e-19);
  const ProbeReport r = symmetry_probe(Rational(0), {std::numbers::pi / 4}, ctx, 16, 3);
  EXPECT_GT(r.rows[0].phi_drift_std, 0.0);
}

TEST(Probe, RejectsPolesAndIsDeterministic) {
  const auto ctx = make_ctx(32, 981.0, 3.35e-19);
  EXPECT_THROW(symmetry_probe(Rational(0), {0.0}, ctx, 4, 1), std::invalid_argument);
  EXPECT_THROW(symmetry_probe(Rational(0), {std::numbers::pi}, ctx, 4, 1), std::invalid_argument);
  const auto a = probe_to_json(symmetry_probe(Rational(0), {0.5}, ctx, 8, 42)).dump();
  const auto b = probe_to_json(symmetry_probe(Rational(0), {0.5}, ctx, 8, 42)).dump();
  const auto c = probe_to_json(symmetry_probe(Rational(0), {0.5}, ctx, 8, 43)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_NE(a.find("\"0.5\""), std::string::npos);
}
