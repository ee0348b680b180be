#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "aam/numgrid/realize.hpp"
#include "aam/numgrid/units.hpp"

namespace aam::numgrid {

/// Two-component wavefunction on the grid, amplitudes indexed spin * N + j,
/// normalized so that sum |psi|^2 dz = 1 with dz in cm.
struct SpinorState {
  Grid1D grid;
  Eigen::VectorXcd amplitudes;

  [[nodiscard]] double norm() const { return amplitudes.squaredNorm() * grid.spacing(); }

  /// Spin direction (theta, phi) times a Gaussian packet of the given width,
  /// centered at `center_cm` with mean wavenumber `k0_per_cm`.
  static SpinorState gaussian(const Grid1D& grid, double theta, double phi, double width_cm,
                              double center_cm = 0.0, double k0_per_cm = 0.0) {
    grid.validate();
    if (!(width_cm > 0.0)) throw std::invalid_argument("packet width must be positive");
    const int n = grid.n_points;
    SpinorState s{grid, Eigen::VectorXcd(2 * n)};
    const cplx up = std::cos(theta / 2.0);
    const cplx down = std::polar(std::sin(theta / 2.0), phi);
    for (int j = 0; j < n; ++j) {
      const double z = grid.coordinate(j) - center_cm;
      const cplx envelope = std::exp(-z * z / (4.0 * width_cm * width_cm)) * std::polar(1.0, k0_per_cm * z);
      s.amplitudes(j) = up * envelope;
      s.amplitudes(n + j) = down * envelope;
    }
    s.amplitudes /= std::sqrt(s.norm());
    return s;
  }
};

/// Bloch vector and angles. `phi_indeterminate` is set when the vector is
/// (numerically) zero or points at a pole, where phi has no meaning.
struct BlochVector {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  bool phi_indeterminate = false;

  [[nodiscard]] double length() const { return std::sqrt(sx * sx + sy * sy + sz * sz); }
};

inline constexpr double kIndeterminateThreshold = 1e-9;

inline BlochVector bloch_from_components(double sx, double sy, double sz) {
  BlochVector b{sx, sy, sz, 0.0, 0.0, false};
  const double len = b.length();
  if (len < kIndeterminateThreshold) {
    b.phi_indeterminate = true;
    return b;
  }
  b.theta = std::acos(std::clamp(sz / len, -1.0, 1.0));
  if (std::sin(b.theta) < kIndeterminateThreshold) {
    b.phi_indeterminate = true;
    return b;
  }
  b.phi = std::atan2(sy, sx);
  if (b.phi <= -std::numbers::pi) b.phi = std::numbers::pi;
  return b;
}

/// Expectation values of sigma_x, sigma_y, sigma_z and the Bloch angles.
inline BlochVector spin_expect(const Eigen::VectorXcd& psi) {
  const Eigen::Index n = psi.size() / 2;
  const double total = psi.squaredNorm();
  if (!(total > 0.0)) throw std::invalid_argument("spin_expect on a zero-norm state");
  const cplx cross = psi.head(n).dot(psi.tail(n));  // sum conj(up) * down
  const double sx = 2.0 * cross.real() / total;
  const double sy = 2.0 * cross.imag() / total;
  const double sz = (psi.head(n).squaredNorm() - psi.tail(n).squaredNorm()) / total;
  return bloch_from_components(sx, sy, sz);
}

inline BlochVector spin_expect(const SpinorState& s) { return spin_expect(s.amplitudes); }

/// <z> in cm.
inline double mean_position(const Eigen::VectorXcd& psi, const Grid1D& grid) {
  const int n = grid.n_points;
  double num = 0.0, den = 0.0;
  for (int j = 0; j < n; ++j) {
    const double w = std::norm(psi(j)) + std::norm(psi(n + j));
    num += w * grid.coordinate(j);
    den += w;
  }
  return num / den;
}

}  // namespace aam::numgrid
