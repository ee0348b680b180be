#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aam/hamiltonians.hpp"
#include "aam/numgrid/realize.hpp"
#include "aam/numgrid/state.hpp"

namespace aam::numgrid {

struct SpinRates {
  double dtheta_dt = 0.0;  // rad/s
  double dphi_dt = 0.0;    // rad/s
};

struct ProbeRow {
  double theta0 = 0.0;
  double dtheta_dt_plus = 0.0;    // ensemble mean under +a
  double dtheta_dt_minus = 0.0;   // ensemble mean under -a
  double dtheta_dt_mirror = 0.0;  // ensemble mean at pi - theta0, +a
  double phi_drift_mean = 0.0;    // ensemble mean of dphi/dt under +a
  double phi_drift_std = 0.0;     // population standard deviation of the same
  double rate_scale = 0.0;        // rms per-member |dtheta/dt|, sets the comparison floor
  double member_mirror_defect = 0.0;    // max over members of |rate(theta0) - rate(pi - theta0)|
  double member_reversal_defect = 0.0;  // max over members of |rate(+a) + rate(-a)|
  bool mirror_holds = false;
  bool sign_reversed = false;
};

struct ProbeReport {
  double mu_a = 0.0;
  double p_perp_gcms = 0.0;
  std::uint64_t seed = 0;
  int ensemble_size = 0;
  std::vector<ProbeRow> rows;

  [[nodiscard]] bool all_hold() const {
    for (const auto& r : rows)
      if (!r.mirror_holds || !r.sign_reversed) return false;
    return true;
  }
};

inline constexpr double kProbeRelativeTolerance = 0.01;
// Ensemble means below this fraction of the per-member rate are treated as zero.
inline constexpr double kProbeZeroFloor = 1e-9;

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool rates_agree(double a, double b, double scale) {
  const double floor = kProbeZeroFloor * scale;
  return std::abs(a - b) <= kProbeRelativeTolerance * std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace detail

/// Instantaneous Bloch-angle rates from Ehrenfest's theorem,
/// d<sigma_k>/dt = i <[H, sigma_k]> / hbar, with H realized on the grid.
inline SpinRates spin_rates(const MatrixOp& h, const Eigen::VectorXcd& psi) {
  const int n = h.n_points;
  const Eigen::MatrixXcd hm = h.matrix;
  std::array<double, 3> s{}, ds{};
  const double total = psi.squaredNorm();
  const std::array<Pauli, 3> axes{Pauli::x, Pauli::y, Pauli::z};
  for (int k = 0; k < 3; ++k) {
    const Eigen::MatrixXcd sig = spin_matrix(n, axes[k]);
    const Eigen::MatrixXcd comm = hm * sig - sig * hm;
    s[k] = psi.dot(sig * psi).real() / total;
    ds[k] = (cplx(0.0, 1.0) * psi.dot(comm * psi)).real() / total / h.units.time_s();
  }
  const double len2 = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
  const double len = std::sqrt(len2);
  const double rho2 = s[0] * s[0] + s[1] * s[1];
  if (len < kIndeterminateThreshold || std::sqrt(rho2) / len < kIndeterminateThreshold)
    throw std::invalid_argument("spin rates are undefined at a pole");
  const double s_dot_ds = s[0] * ds[0] + s[1] * ds[1] + s[2] * ds[2];
  // theta = acos(s_z / |s|)
  const double dcos = (ds[2] * len2 - s[2] * s_dot_ds) / (len2 * len);
  const double sin_theta = std::sqrt(rho2) / len;
  return {-dcos / sin_theta, (s[0] * ds[1] - s[1] * ds[0]) / rho2};
}

/// Bloch-angle rates of the spin term of the accelerational Hamiltonian,
/// averaged over transverse momenta of magnitude |(ctx.p_x, ctx.p_y)| with
/// azimuths drawn uniformly from a seeded generator. The same
/// azimuth sample is reused for +a, -a and the mirror angle.
inline ProbeReport symmetry_probe(const Rational& mu_a, const std::vector<double>& thetas, const RealizationContext& ctx,
                                  int ensemble_size, std::uint64_t seed, double phi0 = 0.0) {
  ctx.validate();
  if (ensemble_size < 1) throw std::invalid_argument("ensemble size must be positive");
  for (double t : thetas)
    if (!(t > 0.0 && t < std::numbers::pi) || std::sin(t) < kIndeterminateThreshold)
      throw std::invalid_argument("probe angles must lie strictly between the poles");

  const OperatorExpr h_spin =
      build(HamiltonianSpec::accelerational(ScalarCoeff(mu_a), TermFlags::only(Term::spin)));
  const double p_perp = std::hypot(ctx.p_x, ctx.p_y);

  std::mt19937_64 rng(seed);
  std::vector<double> azimuths(static_cast<std::size_t>(ensemble_size));
  for (auto& a : azimuths) a = 2.0 * std::numbers::pi * detail::unit_uniform(rng);

  std::vector<MatrixOp> plus, minus;
  for (double alpha : azimuths) {
    RealizationContext member = ctx;
    member.p_x = p_perp * std::cos(alpha);
    member.p_y = p_perp * std::sin(alpha);
    member.params.mu_a = mu_a.to_double();
    plus.push_back(realize(h_spin, member));
    member.params.a = -ctx.params.a;
    minus.push_back(realize(h_spin, member));
  }

  ProbeReport report;
  report.mu_a = mu_a.to_double();
  report.p_perp_gcms = p_perp;
  report.seed = seed;
  report.ensemble_size = ensemble_size;
  const double width = ctx.grid.length_cm / 16.0;
  const double inv = 1.0 / ensemble_size;
  for (double theta0 : thetas) {
    const auto psi = SpinorState::gaussian(ctx.grid, theta0, phi0, width).amplitudes;
    const auto psi_mirror = SpinorState::gaussian(ctx.grid, std::numbers::pi - theta0, phi0, width).amplitudes;
    ProbeRow row;
    row.theta0 = theta0;
    double phi_sq = 0.0, rate_sq = 0.0;
    for (int k = 0; k < ensemble_size; ++k) {
      const SpinRates rp = spin_rates(plus[k], psi);
      const SpinRates rm = spin_rates(minus[k], psi);
      const SpinRates rr = spin_rates(plus[k], psi_mirror);
      row.dtheta_dt_plus += rp.dtheta_dt * inv;
      row.dtheta_dt_minus += rm.dtheta_dt * inv;
      row.dtheta_dt_mirror += rr.dtheta_dt * inv;
      row.phi_drift_mean += rp.dphi_dt * inv;
      phi_sq += rp.dphi_dt * rp.dphi_dt * inv;
      rate_sq += rp.dtheta_dt * rp.dtheta_dt * inv;
      row.member_mirror_defect = std::max(row.member_mirror_defect, std::abs(rp.dtheta_dt - rr.dtheta_dt));
      row.member_reversal_defect = std::max(row.member_reversal_defect, std::abs(rp.dtheta_dt + rm.dtheta_dt));
    }
    row.phi_drift_std = std::sqrt(std::max(0.0, phi_sq - row.phi_drift_mean * row.phi_drift_mean));
    row.rate_scale = std::sqrt(rate_sq);
    row.mirror_holds = detail::rates_agree(row.dtheta_dt_plus, row.dtheta_dt_mirror, row.rate_scale);
    row.sign_reversed = detail::rates_agree(row.dtheta_dt_plus, -row.dtheta_dt_minus, row.rate_scale);
    report.rows.push_back(row);
  }
  return report;
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON object keyed by theta0 (17 significant digits).
inline nlohmann::ordered_json probe_to_json(const ProbeReport& report) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["dtheta_dt_plus"] = r.dtheta_dt_plus;
    row["dtheta_dt_minus"] = r.dtheta_dt_minus;
    row["dtheta_dt_mirror"] = r.dtheta_dt_mirror;
    row["phi_drift_mean"] = r.phi_drift_mean;
    row["phi_drift_std"] = r.phi_drift_std;
    row["rate_scale"] = r.rate_scale;
    row["member_mirror_defect"] = r.member_mirror_defect;
    row["member_reversal_defect"] = r.member_reversal_defect;
    row["mirror_holds"] = r.mirror_holds;
    row["sign_reversed"] = r.sign_reversed;
    out[format_g17(r.theta0)] = std::move(row);
  }
  return out;
}

}  // namespace aam::numgrid
