#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "aam/numgrid/evolve.hpp"

namespace aam::numgrid {

struct PrecessionEstimate {
  bool is_static = false;  // no oscillation in any spin component
  double omega = 0.0;      // rad/s
  int component = -1;      // 0, 1, 2 for sigma_x, sigma_y, sigma_z
};

namespace detail {

/// Sum of squared residuals after the best fit A cos(wt) + B sin(wt) + C.
inline double sinusoid_residual(std::span<const double> t, std::span<const double> y, double omega) {
  const Eigen::Index n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd basis(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    basis(k, 0) = std::cos(omega * t[k]);
    basis(k, 1) = std::sin(omega * t[k]);
    basis(k, 2) = 1.0;
    rhs(k) = y[k];
  }
  const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(rhs);
  return (basis * coef - rhs).squaredNorm();
}

/// Angular frequency of the DFT peak of a uniformly sampled series, refined
/// by quadratic interpolation of the peak magnitude over its neighbours.
inline double dft_peak(std::span<const double> y, double dt) {
  const std::size_t n = y.size();
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  // Zero-pad 4x for a finer bin grid.
  const std::size_t padded = 4 * n;
  std::vector<double> mag(padded / 2 + 1);
  for (std::size_t k = 1; k < mag.size(); ++k) {
    std::complex<double> acc{0.0, 0.0};
    const double w = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(padded);
    for (std::size_t j = 0; j < n; ++j) acc += (y[j] - mean) * std::polar(1.0, w * static_cast<double>(j));
    mag[k] = std::abs(acc);
  }
  std::size_t peak = 1;
  for (std::size_t k = 2; k < mag.size(); ++k)
    if (mag[k] > mag[peak]) peak = k;
  double shift = 0.0;
  if (peak > 1 && peak + 1 < mag.size()) {
    const double a = mag[peak - 1], b = mag[peak], c = mag[peak + 1];
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) shift = 0.5 * (a - c) / denom;
  }
  return 2.0 * std::numbers::pi * (static_cast<double>(peak) + shift) / (static_cast<double>(padded) * dt);
}

}  // namespace detail

/// Dominant angular frequency of the spin oscillation. The DFT peak of the
/// component with the largest variance seeds a golden-section search on the
/// least-squares sinusoid fit, which removes the leakage bias of the bare
/// spectral estimate.
inline PrecessionEstimate precession_frequency(const Trajectory& traj) {
  const std::size_t n = traj.points.size();
  if (n < 8) throw std::invalid_argument("trajectory too short for frequency analysis");
  std::vector<double> t(n);
  std::array<std::vector<double>, 3> series;
  for (auto& s : series) s.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = traj.points[k];
    t[k] = p.t - traj.points.front().t;
    series[0][k] = p.spin.sx;
    series[1][k] = p.spin.sy;
    series[2][k] = p.spin.sz;
  }
  int best = 0;
  double best_var = -1.0;
  for (int c = 0; c < 3; ++c) {
    double mean = 0.0, var = 0.0;
    for (double v : series[c]) mean += v;
    mean /= static_cast<double>(n);
    for (double v : series[c]) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (var > best_var) {
      best_var = var;
      best = c;
    }
  }
  if (best_var < 1e-18) return {true, 0.0, -1};

  const double dt = t[1] - t[0];
  const double span_t = t.back();
  const double seed = detail::dft_peak(series[best], dt);
  if (seed * span_t < 2.0 * 2.0 * std::numbers::pi)
    throw std::invalid_argument("fewer than two oscillations in the trajectory");

  // Golden-section search within one Rayleigh bin of the seed.
  const double bin = 2.0 * std::numbers::pi / span_t;
  double lo = seed - bin, hi = seed + bin;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = detail::sinusoid_residual(t, series[best], x1);
  double f2 = detail::sinusoid_residual(t, series[best], x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * seed; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = detail::sinusoid_residual(t, series[best], x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = detail::sinusoid_residual(t, series[best], x2);
    }
  }
  return {false, 0.5 * (lo + hi), best};
}

/// +1 or -1: the sense of rotation of the Bloch vector about `axis`, from the
/// average of axis . (s x ds/dt). Returns 0 for a static spin.
inline int rotation_sense(const Trajectory& traj, const std::array<double, 3>& axis) {
  double acc = 0.0;
  for (std::size_t k = 1; k < traj.points.size(); ++k) {
    const auto& a = traj.points[k - 1].spin;
    const auto& b = traj.points[k].spin;
    const std::array<double, 3> s{a.sx, a.sy, a.sz};
    const std::array<double, 3> ds{b.sx - a.sx, b.sy - a.sy, b.sz - a.sz};
    const std::array<double, 3> cross{s[1] * ds[2] - s[2] * ds[1], s[2] * ds[0] - s[0] * ds[2],
                                      s[0] * ds[1] - s[1] * ds[0]};
    acc += axis[0] * cross[0] + axis[1] * cross[1] + axis[2] * cross[2];
  }
  if (std::abs(acc) < 1e-15) return 0;
  return acc > 0.0 ? 1 : -1;
}

}  // namespace aam::numgrid
