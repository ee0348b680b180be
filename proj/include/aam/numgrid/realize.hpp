#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "aam/numgrid/units.hpp"
#include "aam/operator_expr.hpp"

namespace aam::numgrid {

using cplx = std::complex<double>;

/// Everything needed to turn symbols into numbers on a 1-D grid. The grid
/// runs along `axis` (2 = z by default). Positions along the other two axes
/// are pinned to 0; their momenta are the c-numbers given here in g cm/s.
struct RealizationContext {
  Grid1D grid;
  PhysParams params;
  double p_x = 0.0;
  double p_y = 0.0;
  double p_z = 0.0;
  int axis = 2;

  void validate() const {
    grid.validate();
    params.validate();
    for (double v : {p_x, p_y, p_z})
      if (!std::isfinite(v)) throw std::invalid_argument("transverse momenta must be finite");
    if (axis < 0 || axis > 2) throw std::invalid_argument("grid axis must be 0, 1 or 2");
  }
  [[nodiscard]] Units units() const { return Units::for_grid(grid, params); }
  [[nodiscard]] double momentum(int k) const { return k == 0 ? p_x : k == 1 ? p_y : p_z; }
};

/// Raised when an expression mentions symbols the context cannot supply.
struct UnboundSymbols : std::invalid_argument {
  explicit UnboundSymbols(std::vector<std::string> names)
      : std::invalid_argument(make_message(names)), symbols(std::move(names)) {}
  std::vector<std::string> symbols;

 private:
  static std::string make_message(const std::vector<std::string>& names) {
    std::string s = "unbound symbols:";
    for (const auto& n : names) s += " " + n;
    return s;
  }
};

/// Dense realization on spin (x) grid, index = spin * N + j, in scaled units.
/// Identity-proportional parts are kept apart in `offset` so that a large
/// rest energy does not swamp the spectrum of `matrix`.
struct MatrixOp {
  Eigen::MatrixXcd matrix;
  cplx offset{0.0, 0.0};
  bool hermitian = false;
  Units units{1.0, 1.0, 1.0};
  int n_points = 0;
  std::vector<std::string> warnings;

  [[nodiscard]] Eigen::Index dim() const { return matrix.rows(); }

  /// max|M - M^dagger| / max|M| (0 for the zero matrix).
  [[nodiscard]] double hermiticity_defect() const {
    const double scale = matrix.cwiseAbs().maxCoeff();
    const double defect = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    const double total = std::max(scale, std::abs(offset));
    if (total == 0.0) return 0.0;
    return std::max(defect, 2.0 * std::abs(offset.imag())) / total;
  }

  /// The full operator including the identity offset.
  [[nodiscard]] Eigen::MatrixXcd full() const {
    return matrix + offset * Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
  }
};

inline constexpr double kHermitianTolerance = 1e-10;

namespace detail {

inline Eigen::Matrix2cd pauli(Pauli s) {
  Eigen::Matrix2cd m;
  switch (s) {
    case Pauli::one: m << 1, 0, 0, 1; break;
    case Pauli::x: m << 0, 1, 1, 0; break;
    case Pauli::y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case Pauli::z: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Spectral first derivative times -i (hbar = 1): P = F^-1 diag(k) F with
/// the Nyquist mode dropped, on a grid of unit length.
inline Eigen::MatrixXcd spectral_momentum(int n) {
  // P_{jl} depends only on j - l.
  std::vector<cplx> row(n);
  for (int d = 0; d < n; ++d) {
    cplx sum{0.0, 0.0};
    for (int q = -n / 2 + 1; q < n / 2; ++q) {
      const double k = 2.0 * std::numbers::pi * q;
      sum += k * std::exp(cplx(0.0, k * d / static_cast<double>(n)));
    }
    row[d] = sum / static_cast<double>(n);
  }
  Eigen::MatrixXcd p(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) p(j, l) = row[((j - l) % n + n) % n];
  return p;
}

/// Scaled numeric value of each scalar symbol, or nullopt if unbound.
inline std::array<std::optional<double>, kSymbolCount> symbol_values(const RealizationContext& ctx) {
  const Units u = ctx.units();
  const PhysParams& p = ctx.params;
  std::array<std::optional<double>, kSymbolCount> v;
  v[static_cast<int>(Symbol::hbar)] = p.hbar / u.hbar;
  v[static_cast<int>(Symbol::c)] = p.c / u.velocity_cms();
  v[static_cast<int>(Symbol::m)] = p.m / u.mass_g;
  v[static_cast<int>(Symbol::a_x)] = 0.0;
  v[static_cast<int>(Symbol::a_y)] = 0.0;
  v[static_cast<int>(Symbol::a_z)] = p.a / u.acceleration_cms2();
  v[static_cast<int>(Symbol::g_x)] = 0.0;
  v[static_cast<int>(Symbol::g_y)] = 0.0;
  v[static_cast<int>(Symbol::g_z)] = -p.g / u.acceleration_cms2();
  v[static_cast<int>(Symbol::mu_a)] = p.mu_a;
  if (p.Phi) v[static_cast<int>(Symbol::Phi)] = *p.Phi;
  return v;
}

inline cplx evaluate(const ScalarCoeff& s, const std::array<std::optional<double>, kSymbolCount>& values,
                     std::set<std::string>& unbound) {
  cplx total{0.0, 0.0};
  for (const auto& [powers, c] : s.terms()) {
    cplx term(c.re.to_double(), c.im.to_double());
    for (int k = 0; k < kSymbolCount; ++k) {
      if (powers[k] == 0) continue;
      if (!values[k]) {
        unbound.insert(std::string(kSymbolNames[k]));
        continue;
      }
      term *= std::pow(*values[k], powers[k]);
    }
    total += term;
  }
  return total;
}

struct RawRealization {
  Eigen::MatrixXcd matrix;
  cplx offset{0.0, 0.0};
};

/// Direct realization, each monomial as the product of its factors in
/// canonical order.
inline RawRealization realize_direct(const OperatorExpr& expr, const RealizationContext& ctx,
                                     std::vector<std::string>& warnings, std::set<std::string>& unbound) {
  const int n = ctx.grid.n_points;
  const int axis = ctx.axis;
  const auto values = symbol_values(ctx);
  const Units u = ctx.units();

  Eigen::VectorXd z(n);
  for (int j = 0; j < n; ++j) z(j) = ctx.grid.coordinate(j) / u.length_cm;
  std::vector<Eigen::MatrixXcd> p_powers{Eigen::MatrixXcd::Identity(n, n)};

  RawRealization out{Eigen::MatrixXcd::Zero(2 * n, 2 * n), {0.0, 0.0}};
  for (const auto& [g, coeff] : expr.terms()) {
    bool pinned = false;
    for (int k = 0; k < 3; ++k)
      if (k != axis && g.x[k] > 0) pinned = true;
    if (pinned) {
      warnings.push_back("dropped monomial with transverse position (pinned to 0): " + g.str());
      continue;
    }
    cplx value = evaluate(coeff, values, unbound);
    for (int k = 0; k < 3; ++k)
      if (k != axis && g.p[k] > 0) value *= std::pow(ctx.momentum(k) / u.momentum_gcms(), g.p[k]);
    if (g.x[axis] == 0 && g.p[axis] == 0 && g.sigma == Pauli::one) {
      out.offset += value;
      continue;
    }
    const int pn = g.p[axis];
    if (pn > 0 && p_powers.size() == 1) p_powers.push_back(spectral_momentum(n));
    while (static_cast<int>(p_powers.size()) <= pn) p_powers.push_back(p_powers.back() * p_powers[1]);
    // X^k P^n: scale the rows of P^n by z^k.
    Eigen::MatrixXcd spatial = p_powers[pn];
    if (g.x[axis] > 0)
      for (int j = 0; j < n; ++j) spatial.row(j) *= std::pow(z(j), g.x[axis]);
    const Eigen::Matrix2cd s = pauli(g.sigma);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if (s(a, b) != cplx(0.0, 0.0)) out.matrix.block(a * n, b * n, n, n) += (value * s(a, b)) * spatial;
  }
  return out;
}

}  // namespace detail

/// Realizes an operator expression on spin (x) grid. x along the grid axis is
/// diagonal, p along it is the spectral derivative, beta is +1 (particle
/// sector). The Hermitian part A_h = (A + A^dagger)/2 is realized as the
/// Hermitian part of its matrix and the anti-Hermitian part likewise, so a
/// symbolically Hermitian expression always yields a Hermitian matrix even
/// though the grid does not satisfy the canonical commutator exactly.
inline MatrixOp realize(const OperatorExpr& expr, const RealizationContext& ctx) {
  ctx.validate();
  const OperatorExpr adj = expr.adjoint();
  const OperatorExpr herm = (expr + adj).scale(ScalarCoeff(Rational(1, 2)));
  const OperatorExpr anti = (expr - adj).scale(ScalarCoeff(Rational(1, 2)));

  MatrixOp op;
  op.units = ctx.units();
  op.n_points = ctx.grid.n_points;
  std::set<std::string> unbound;
  std::vector<std::string> warnings;
  auto h = detail::realize_direct(herm, ctx, warnings, unbound);
  auto k = detail::realize_direct(anti, ctx, warnings, unbound);
  if (!unbound.empty()) throw UnboundSymbols({unbound.begin(), unbound.end()});

  op.matrix = 0.5 * (h.matrix + h.matrix.adjoint()) + 0.5 * (k.matrix - k.matrix.adjoint());
  op.offset = cplx(h.offset.real(), 0.0) + cplx(0.0, k.offset.imag());
  op.hermitian = anti.is_zero() || (op.hermiticity_defect() <= kHermitianTolerance);
  // Warnings are generated once per half; keep them unique.
  std::set<std::string> seen;
  for (auto& w : warnings)
    if (seen.insert(w).second) op.warnings.push_back(std::move(w));
  return op;
}

/// Spin operator sigma_k (x) 1 on the grid.
inline Eigen::MatrixXcd spin_matrix(int n, Pauli s) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const Eigen::Matrix2cd p = detail::pauli(s);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      if (p(a, b) != cplx(0.0, 0.0)) m.block(a * n, b * n, n, n) = p(a, b) * Eigen::MatrixXcd::Identity(n, n);
  return m;
}

}  // namespace aam::numgrid
