#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace aam::numgrid {

/// Numeric cgs values for the symbols of the Hamiltonians. The field is along
/// z: `a` is the z component of the acceleration (a = a z-hat) and `g` the
/// magnitude of gravity pointing down (g = -g z-hat, so g_z = -g). The
/// equivalence setting a = -g is therefore a == g.
struct PhysParams {
  double m = 1.6749e-24;        // g
  double c = 2.99792458e10;     // cm/s
  double hbar = 1.0546e-27;     // erg s
  double G = 6.674e-8;          // cm^3/(g s^2)
  double a = 0.0;               // cm/s^2
  double g = 0.0;               // cm/s^2
  double mu_a = 0.0;
  std::optional<double> Phi;    // dimensionless potential, unbound unless set

  void validate() const {
    for (double v : {m, c, hbar, G, a, g, mu_a})
      if (!std::isfinite(v)) throw std::invalid_argument("physical parameters must be finite");
    if (!(m > 0.0)) throw std::invalid_argument("mass must be positive");
    if (!(c > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("c and hbar must be positive");
  }
};

/// Periodic 1-D grid of `n_points` nodes over `length_cm`, centered at 0.
struct Grid1D {
  int n_points = 64;
  double length_cm = 1e-3;

  void validate() const {
    if (n_points < 32 || (n_points & (n_points - 1)) != 0)
      throw std::invalid_argument("grid n_points must be a power of two >= 32");
    if (!(length_cm > 0.0) || !std::isfinite(length_cm)) throw std::invalid_argument("grid length must be positive");
  }
  [[nodiscard]] double spacing() const { return length_cm / n_points; }
  [[nodiscard]] double coordinate(int j) const { return (j - n_points / 2) * spacing(); }
  /// Central half of the grid, where position-operator checks are trusted.
  [[nodiscard]] bool is_interior(int j) const { return std::abs(coordinate(j)) <= 0.25 * length_cm; }
};

/// Scaled units with hbar = m = 1 and the grid length as the unit of length.
/// Everything else follows: time = m L^2 / hbar, energy = hbar / time, ...
struct Units {
  double length_cm;
  double mass_g;
  double hbar;

  Units(double length, double mass, double h) : length_cm(length), mass_g(mass), hbar(h) {}
  static Units for_grid(const Grid1D& grid, const PhysParams& p) { return {grid.length_cm, p.m, p.hbar}; }

  [[nodiscard]] double time_s() const { return mass_g * length_cm * length_cm / hbar; }
  [[nodiscard]] double energy_erg() const { return hbar / time_s(); }
  [[nodiscard]] double momentum_gcms() const { return hbar / length_cm; }
  [[nodiscard]] double velocity_cms() const { return length_cm / time_s(); }
  [[nodiscard]] double acceleration_cms2() const { return length_cm / (time_s() * time_s()); }
};

}  // namespace aam::numgrid
