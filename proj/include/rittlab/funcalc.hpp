#pragma once

// Fractional powers (I-T)^alpha by three independent routes:
//   1. Dunford-Riesz integral over the Stolz boundary, principal branch of
//      (1-lambda)^alpha (valid: 1 - boundary avoids the negative reals),
//   2. binomial series sum_k C(alpha,k) (-T)^k,
//   3. eigendecomposition with scalar principal powers.
// Plus polynomial calculus, the bounded-family scan n^a ||(rT)^{n-1}(I-rT)^a||,
// and the quadrature/cap comparison for its proof-level integrals.
//
// The contour solves use the shifted assembly (I-T) - wI with w = 1-lambda
// carried exactly from the parametrization, so nodes clustering toward the
// vertex keep full precision even when 1 is an eigenvalue.

#include "rittlab/core.hpp"
#include "rittlab/lpcore.hpp"
#include "rittlab/quadrature.hpp"
#include "rittlab/ritt.hpp"

#include <functional>

namespace rittlab {

struct ContourSpec {
  double gamma = 0.0;          // <= 0 means: use contour_gamma(T)
  int q_panel = 10;            // Gauss-Legendre points per panel
  int min_nodes_segment = 200; // floor on the per-segment node budget
  int nodes_arc = 400;         // total nodes on the circular arc
  double tail_digits = 14.0;   // grade segments until w^alpha ~ 10^-tail_digits
};

using ScalarFn = std::function<Complex(Complex)>;

// (1/2πi) ∮ phi(lambda) (1-lambda)^alpha R(lambda,T) dlambda over the
// boundary of B_gamma, traversed counterclockwise. Equals phi(T)(I-T)^alpha.
inline Matrix contour_phi_fracpow(const Matrix& t, const ScalarFn& phi,
                                  double alpha, ContourSpec spec = {}) {
  if (t.rows() != t.cols())
    throw InputError("contour_phi_fracpow: square matrix required");
  if (!(alpha > 0.0))
    throw InputError("contour_phi_fracpow: alpha must be positive");
  require_finite(t, "contour_phi_fracpow");
  const double gamma = spec.gamma > 0.0 ? spec.gamma : contour_gamma(t);
  if (!(gamma > 0.0) || !(gamma < std::numbers::pi / 2))
    throw InputError("contour_phi_fracpow: gamma must lie in (0, pi/2)");
  StolzDomain domain(gamma);
  for (const Complex& ev : spectrum(t)) {
    if (std::abs(ev - 1.0) <= 1e-9) continue;  // vertex point is allowed
    if (domain.margin(ev) <= 1e-12)
      throw InputError("contour_phi_fracpow: eigenvalue (" +
                       std::to_string(ev.real()) + "," +
                       std::to_string(ev.imag()) +
                       ") not strictly inside B_gamma, gamma = " +
                       std::to_string(gamma));
  }

  const Eigen::Index n = t.rows();
  const Matrix i_minus_t = Matrix::Identity(n, n) - t;
  const Matrix eye = Matrix::Identity(n, n);
  const double s = std::sin(gamma), c = std::cos(gamma);
  const Complex two_pi_i(0.0, 2.0 * std::numbers::pi);

  // Resolvent at lambda = 1 - w via the shifted LU problem.
  auto resolvent_shifted = [&](Complex w) -> Matrix {
    Matrix m = i_minus_t;
    m.diagonal().array() -= w;
    return m.partialPivLu().solve(eye);
  };

  // Straight edges: lambda = 1 - t e^{∓iγ}, t in (0, cos γ], dyadic panels
  // toward the vertex. Reach t^alpha ~ 10^-tail_digits.
  int levels = static_cast<int>(
      std::ceil(spec.tail_digits * std::log2(10.0) / std::max(alpha, 1e-3)));
  levels = std::clamp(levels, 16, 4000);
  const int q = std::max(2, spec.q_panel);
  if (q * (levels + 1) < spec.min_nodes_segment)
    levels = spec.min_nodes_segment / q;

  auto edge = [&](double sign_gamma) -> Matrix {
    // sign_gamma = -1 for the upper edge (e^{-iγ}), +1 for the lower.
    const Complex dir = Complex(std::cos(gamma), sign_gamma * std::sin(gamma));
    auto f = [&](double tt) -> Matrix {
      const Complex w = tt * dir;
      const Complex frac = std::pow(tt, alpha) *
                           std::exp(Complex(0.0, sign_gamma * alpha * gamma));
      const Complex lam = Complex(1.0, 0.0) - w;
      const Complex coef = phi(lam) * frac;
      return (coef * resolvent_shifted(w)).eval();
    };
    return integrate_graded(f, 0.0, c, levels, q, Matrix(Matrix::Zero(n, n)));
  };

  // Upper edge traversed 1 -> tangency: dlambda = -e^{-iγ} dt.
  const Matrix upper = edge(-1.0) * (-Complex(std::cos(gamma), -std::sin(gamma)));
  // Lower edge traversed tangency -> 1: net +e^{+iγ} dt on [0, cos γ].
  const Matrix lower = edge(+1.0) * Complex(std::cos(gamma), std::sin(gamma));

  // Arc lambda = s e^{iθ}, θ from π/2-γ to 3π/2+γ: dlambda = i s e^{iθ} dθ.
  const double th0 = std::numbers::pi / 2 - gamma;
  const double th1 = 3 * std::numbers::pi / 2 + gamma;
  const int arc_panels = std::max(8, spec.nodes_arc / q);
  auto arc_f = [&](double th) -> Matrix {
    const Complex lam = s * Complex(std::cos(th), std::sin(th));
    const Complex w = Complex(1.0, 0.0) - lam;
    const Complex coef = phi(lam) * std::pow(w, Complex(alpha)) *
                         Complex(0.0, 1.0) * s *
                         Complex(std::cos(th), std::sin(th));
    return (coef * resolvent_shifted(w)).eval();
  };
  const Matrix arc =
      integrate_panels(arc_f, th0, th1, arc_panels, q, Matrix(Matrix::Zero(n, n)));

  Matrix total = upper + arc + lower;
  return total / two_pi_i;
}

inline Matrix contour_fracpow(const Matrix& t, double alpha, ContourSpec spec = {}) {
  return contour_phi_fracpow(t, [](Complex) { return Complex(1.0); }, alpha, spec);
}

struct SeriesResult {
  Matrix value;
  int terms = 0;
  double last_increment = 0.0;
  bool converged = false;
};

// (I-T)^alpha = sum_k C(alpha,k)(-T)^k. The running coefficient obeys
// c_0 = 1, c_k = c_{k-1} (k-1-alpha)/k; for integer alpha the series
// terminates exactly at k = alpha.
inline SeriesResult frac_power_series(const Matrix& t, double alpha,
                                      double tol = 1e-13, int k_max = 20000) {
  if (t.rows() != t.cols())
    throw InputError("frac_power_series: square matrix required");
  if (!(alpha > 0.0)) throw InputError("frac_power_series: alpha must be positive");
  require_finite(t, "frac_power_series");
  const Eigen::Index n = t.rows();
  SeriesResult out;
  out.value = Matrix::Identity(n, n);
  Matrix power = Matrix::Identity(n, n);
  double coef = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    coef *= (static_cast<double>(k) - 1.0 - alpha) / static_cast<double>(k);
    power = t * power;
    if (coef == 0.0) {  // integer alpha: series terminated exactly
      out.terms = k;
      out.last_increment = 0.0;
      out.converged = true;
      return out;
    }
    const Matrix term = coef * power;
    out.value += term;
    out.terms = k;
    out.last_increment = term.norm();
    if (out.last_increment < tol && k >= 2) {
      out.converged = true;
      return out;
    }
  }
  return out;  // converged stays false
}

// Eigendecomposition route; refuses when the eigenvector matrix is too
// ill-conditioned to trust (defective or near-defective input).
inline Matrix frac_power_eig(const Matrix& t, double alpha,
                             double cond_cap = 1e8) {
  if (t.rows() != t.cols())
    throw InputError("frac_power_eig: square matrix required");
  if (!(alpha > 0.0)) throw InputError("frac_power_eig: alpha must be positive");
  require_finite(t, "frac_power_eig");
  const Eigen::Index n = t.rows();
  Eigen::ComplexEigenSolver<Matrix> es(t, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("frac_power_eig: eigensolver failed");
  const Matrix v = es.eigenvectors();
  Eigen::JacobiSVD<Matrix> svd(v);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0.0) || smax / smin > cond_cap)
    throw ConvergenceError(
        "frac_power_eig: eigenvector condition " +
        std::to_string(smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity()) +
        " exceeds cap; defer to series or contour");
  Vector f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex one_minus = Complex(1.0, 0.0) - es.eigenvalues()[i];
    f[i] = (one_minus == Complex(0.0)) ? Complex(0.0)
                                       : std::pow(one_minus, Complex(alpha));
  }
  return v * f.asDiagonal() * v.partialPivLu().inverse();
}

// Route policy used by downstream modules: eigendecomposition when the basis
// is well-conditioned (exact on kernels), otherwise the series.
inline Matrix frac_power(const Matrix& t, double alpha) {
  try {
    return frac_power_eig(t, alpha);
  } catch (const ConvergenceError&) {
  }
  SeriesResult s = frac_power_series(t, alpha);
  if (!s.converged)
    throw ConvergenceError("frac_power: series did not converge and the "
                           "eigenvector basis is ill-conditioned");
  return s.value;
}

// Horner evaluation of sum_k coeffs[k] T^k.
inline Matrix poly_apply(const Matrix& t, const std::vector<Complex>& coeffs) {
  if (t.rows() != t.cols()) throw InputError("poly_apply: square matrix required");
  const Eigen::Index n = t.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = (t * acc + *it * Matrix::Identity(n, n)).eval();
  return acc;
}

struct VitseScan {
  double sup = 0.0;
  int argmax_n = 0;
  double argmax_r = 0.0;
  bool stabilized = false;  // sup not attained in the last quarter of n-range
};

// sup over n <= n_max, r in r_grid of n^alpha ||(rT)^{n-1}(I-rT)^alpha||_p.
// Fractional powers by the series route (spectral radius of rT < 1 keeps it
// honest for every grid point when T itself is Ritt with no unit eigenvalue;
// r = 1 with a kernel falls back to the eig route inside frac_power).
inline VitseScan vitse_scan(const Matrix& t, double alpha, int n_max,
                            const std::vector<double>& r_grid, double p,
                            const PnormBudget& budget = {4, 24},
                            std::uint64_t seed = 1) {
  if (n_max < 1) throw InputError("vitse_scan: n_max >= 1 required");
  if (r_grid.empty()) throw InputError("vitse_scan: empty r grid");
  for (double r : r_grid)
    if (!(r > 0.0) || r > 1.0)
      throw InputError("vitse_scan: r grid must lie in (0, 1]");
  VitseScan out;
  double sup_last_quarter = 0.0;
  const int cut = n_max - n_max / 4;
  for (std::size_t ri = 0; ri < r_grid.size(); ++ri) {
    const double r = r_grid[ri];
    const Matrix rt = r * t;
    Matrix m = frac_power(rt, alpha);
    for (int k = 1; k <= n_max; ++k) {
      const double v = std::pow(static_cast<double>(k), alpha) *
                       op_pnorm(m, p, budget, seed + 31 * ri + k).value;
      if (v > out.sup) {
        out.sup = v;
        out.argmax_n = k;
        out.argmax_r = r;
      }
      if (k > cut) sup_last_quarter = std::max(sup_last_quarter, v);
      if (k < n_max) m = (rt * m).eval();
    }
  }
  out.stabilized = sup_last_quarter < out.sup;
  return out;
}

struct Prop28Bounds {
  double cap_edge = 0.0;      // 2^alpha cos(gamma)^-alpha Gamma(alpha)
  double arc_base = 0.0;      // ∫_arc |1-lambda|^{alpha-1} |dlambda|
  double arc_base_cap = 0.0;  // (pi+2 gamma) sin(gamma) * max(2, cos)^{alpha-1}
  struct Row {
    int n = 0;
    double i_edge = 0.0;  // one straight edge (the two are equal by symmetry)
    double i_arc = 0.0;
    double i_total = 0.0;  // arc + 2 * edge
  };
  std::vector<Row> rows;
  double sup_total = 0.0;
  bool within_caps = true;  // every quadrature value under its cap (1% slack)
};

// Quadrature of I_n = n^alpha ∮ |lambda|^n |1-lambda|^{alpha-1} |dlambda|
// piecewise, against the closed-form caps used in the boundedness proof.
inline Prop28Bounds prop28_integral_bounds(double gamma, double alpha,
                                           const std::vector<int>& ns) {
  if (!(gamma > 0.0) || !(gamma < std::numbers::pi / 2))
    throw InputError("prop28_integral_bounds: gamma in (0, pi/2) required");
  if (!(alpha > 0.0)) throw InputError("prop28_integral_bounds: alpha > 0 required");
  const double s = std::sin(gamma), c = std::cos(gamma);
  Prop28Bounds out;
  out.cap_edge = std::pow(2.0, alpha) * std::pow(c, -alpha) * std::tgamma(alpha);
  const double th0 = std::numbers::pi / 2 - gamma;
  const double th1 = 3 * std::numbers::pi / 2 + gamma;
  out.arc_base = integrate_panels(
      [&](double th) {
        const Complex lam = s * Complex(std::cos(th), std::sin(th));
        return std::pow(std::abs(Complex(1.0, 0.0) - lam), alpha - 1.0) * s;
      },
      th0, th1, 64, 10, 0.0);
  out.arc_base_cap = (std::numbers::pi + 2 * gamma) * s *
                     (alpha >= 1.0 ? std::pow(2.0, alpha - 1.0)
                                   : std::pow(c, alpha - 1.0));
  if (out.arc_base > out.arc_base_cap * 1.01) out.within_caps = false;

  const int levels = std::clamp(
      static_cast<int>(std::ceil(16.0 * std::log2(10.0) / std::max(alpha, 1e-3))),
      24, 4000);
  for (int n : ns) {
    if (n < 1) throw InputError("prop28_integral_bounds: n >= 1 required");
    Prop28Bounds::Row row;
    row.n = n;
    const double na = std::pow(static_cast<double>(n), alpha);
    row.i_edge = na * integrate_graded(
                          [&](double tt) {
                            const double mod2 = 1.0 - 2.0 * tt * c + tt * tt;
                            return std::pow(mod2, 0.5 * n) *
                                   std::pow(tt, alpha - 1.0);
                          },
                          0.0, c, levels, 10, 0.0);
    row.i_arc = na * std::pow(s, n) * out.arc_base;
    row.i_total = row.i_arc + 2.0 * row.i_edge;
    if (row.i_edge > out.cap_edge * 1.01) out.within_caps = false;
    const double arc_cap_n = na * std::pow(s, n) * out.arc_base_cap;
    if (row.i_arc > arc_cap_n * 1.01) out.within_caps = false;
    out.sup_total = std::max(out.sup_total, row.i_total);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace rittlab
