#pragma once

// Regular (absolute-value) operator norms, Schur-test certification of
// entrywise factorizations c = a .* b, the explicit Hilbert-type kernel
// i^{b-1/2} j^{g-1/2} / (i+j)^{b+g} with its Beta-function caps, entrywise
// domination of nonnegative matrices, and the paired Gaussian-average
// inequality for matrices of operators.

#include "rittlab/core.hpp"
#include "rittlab/lpcore.hpp"
#include "rittlab/quadrature.hpp"
#include "rittlab/randseq.hpp"

namespace rittlab {

// Spectral norm of [|c_ij|]. Power iteration on the Gram form (cheap for the
// large finite sections used in the monotonicity studies); dense eigensolver
// as the fallback when the iteration stalls.
inline double regular_norm(const Matrix& c) {
  require_finite(c, "regular_norm");
  if (c.rows() == 0 || c.cols() == 0) return 0.0;
  const RealMatrix a = c.cwiseAbs();
  if (std::max(a.rows(), a.cols()) <= 256) {
    return spectral_norm(a.cast<Complex>());
  }
  RealVector v = RealVector::Ones(a.cols());
  v /= v.norm();
  double sigma = 0.0;
  for (int it = 0; it < 20000; ++it) {
    RealVector w = a * v;
    RealVector u = a.transpose() * w;
    const double lam = u.norm();
    if (lam == 0.0) return 0.0;
    u /= lam;
    const double next = std::sqrt(lam);
    const bool settled = it > 4 && std::abs(next - sigma) <= 1e-13 * next;
    sigma = next;
    v = u;
    if (settled) {
      const double resid = (a.transpose() * (a * v) - lam * v).norm();
      if (resid <= 1e-9 * lam) return sigma;
    }
  }
  return spectral_norm(a.cast<Complex>());
}

struct FactoredMatrix {
  Matrix c;
  Matrix a;
  Matrix b;
  double row_sup = 0.0;  // sup_i sum_j |a_ij|^2
  double col_sup = 0.0;  // sup_j sum_i |b_ij|^2
};

inline double factored_row_sup(const Matrix& a) {
  return a.cwiseAbs2().rowwise().sum().maxCoeff();
}
inline double factored_col_sup(const Matrix& b) {
  return b.cwiseAbs2().colwise().sum().maxCoeff();
}

// Schur-test certificate: sqrt(row_sup * col_sup) dominates the regular norm
// of c whenever c = a .* b entrywise. Rejects inputs that are not actually
// factorizations.
inline double peller_certify(const FactoredMatrix& f) {
  if (f.a.rows() != f.c.rows() || f.a.cols() != f.c.cols() ||
      f.b.rows() != f.c.rows() || f.b.cols() != f.c.cols())
    throw InputError("peller_certify: factor shapes differ from c");
  require_finite(f.c, "peller_certify");
  const double mismatch =
      (f.c - f.a.cwiseProduct(f.b)).cwiseAbs().maxCoeff();
  if (!(mismatch <= 1e-12))
    throw InputError("peller_certify: c != a .* b (max deviation " +
                     std::to_string(mismatch) + ")");
  const double bound =
      std::sqrt(factored_row_sup(f.a) * factored_col_sup(f.b));
  const double reg = regular_norm(f.c);
  if (reg > bound + 1e-9)
    throw ConvergenceError("peller_certify: Schur bound violated numerically");
  return bound;
}

struct HilbertTypeReport {
  FactoredMatrix factored;
  double cap_row = 0.0;              // 1 + 2 B(gamma, beta)
  double cap_col = 0.0;              // 1 + 2 B(beta, gamma)
  double beta_gamma_route = 0.0;     // B via the Gamma identity
  double beta_quadrature_route = 0.0;
  bool caps_hold = false;
  bool beta_consistent = false;
};

namespace detail {

// B(gamma, beta) = ∫_0^∞ t^{g-1}(1+t)^{-(b+g)} dt, folded onto [0,1]:
// the tail substitutes t -> 1/t and becomes the same kernel with the roles
// of beta and gamma exchanged.
inline double beta_by_quadrature(double g, double b) {
  auto piece = [&](double expo) {
    return integrate_graded(
        [&](double t) {
          return std::pow(t, expo - 1.0) * std::pow(1.0 + t, -(b + g));
        },
        0.0, 1.0, 64, 12, 0.0);
  };
  return piece(g) + piece(b);
}

}  // namespace detail

// The kernel c_ij = i^{beta-1/2} j^{gamma-1/2} / (i+j)^{beta+gamma} for
// 1 <= i, j <= n, with the proof's factorization a = sqrt(c)(i/j)^{1/4},
// b = sqrt(c)(j/i)^{1/4} and the Beta caps on the Schur row/column sums.
inline HilbertTypeReport hilbert_type(double beta, double gamma, int n) {
  if (!(beta > 0.0) || !(gamma > 0.0))
    throw InputError("hilbert_type: beta, gamma must be positive");
  if (n < 1) throw InputError("hilbert_type: n >= 1 required");
  HilbertTypeReport out;
  Matrix c(n, n), a(n, n), b(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const double di = i, dj = j;
      const double cij = std::pow(di, beta - 0.5) * std::pow(dj, gamma - 0.5) /
                         std::pow(di + dj, beta + gamma);
      const double twist = std::pow(di / dj, 0.25);
      c(i - 1, j - 1) = cij;
      a(i - 1, j - 1) = std::sqrt(cij) * twist;
      b(i - 1, j - 1) = std::sqrt(cij) / twist;
    }
  }
  out.factored.c = std::move(c);
  out.factored.a = std::move(a);
  out.factored.b = std::move(b);
  out.factored.row_sup = factored_row_sup(out.factored.a);
  out.factored.col_sup = factored_col_sup(out.factored.b);

  const double beta_fn =
      std::tgamma(gamma) * std::tgamma(beta) / std::tgamma(beta + gamma);
  out.beta_gamma_route = beta_fn;
  out.beta_quadrature_route = detail::beta_by_quadrature(gamma, beta);
  out.beta_consistent =
      std::abs(out.beta_gamma_route - out.beta_quadrature_route) <=
      1e-8 * std::max(1.0, beta_fn);
  out.cap_row = 1.0 + 2.0 * beta_fn;  // B is symmetric; both caps coincide
  out.cap_col = 1.0 + 2.0 * beta_fn;
  out.caps_hold = out.factored.row_sup <= out.cap_row + 1e-9 &&
                  out.factored.col_sup <= out.cap_col + 1e-9;
  return out;
}

struct DominationReport {
  double norm_c = 0.0;
  double norm_d = 0.0;
  bool holds = false;
};

// 0 <= c <= d entrywise forces ||c|| <= ||d|| for the spectral norm.
inline DominationReport domination_check(const RealMatrix& c,
                                         const RealMatrix& d) {
  if (c.rows() != d.rows() || c.cols() != d.cols())
    throw InputError("domination_check: shape mismatch");
  require_finite(c.cast<Complex>(), "domination_check");
  require_finite(d.cast<Complex>(), "domination_check");
  if ((c.array() < 0.0).any())
    throw InputError("domination_check: c has negative entries");
  if ((c.array() > d.array()).any())
    throw InputError("domination_check: c exceeds d entrywise");
  DominationReport out;
  out.norm_c = regular_norm(c.cast<Complex>());
  out.norm_d = regular_norm(d.cast<Complex>());
  out.holds = out.norm_c <= out.norm_d + 1e-10;
  return out;
}

struct GaussIneqReport {
  double lhs = 0.0;
  double lhs_se = 0.0;
  double rhs_gauss = 0.0;
  double rhs_se = 0.0;
  double gamma_bound = 0.0;
  double regular = 0.0;
  bool holds_within_3se = false;
  int samples = 0;
};

// Paired Gaussian-average comparison: || sum_i g_i (sum_j c_ij T_ij x_j) ||
// against gamma(F) * regular_norm(c) * || sum_j g_j x_j ||, on shared draws.
// gamma_bound must be a caller-supplied upper bound for the family.
inline GaussIneqReport prop26_inequality(
    const std::vector<std::vector<Matrix>>& t_grid, const Matrix& c,
    const std::vector<Vector>& xs, double p, int samples, double gamma_bound,
    std::uint64_t seed = 11) {
  const std::size_t n = xs.size();
  if (n == 0) throw InputError("prop26_inequality: empty vector list");
  if (t_grid.size() != n || static_cast<std::size_t>(c.rows()) != n ||
      static_cast<std::size_t>(c.cols()) != n)
    throw InputError("prop26_inequality: grid and c must be n x n");
  if (!(gamma_bound > 0.0))
    throw InputError("prop26_inequality: positive gamma bound required");
  const Eigen::Index d = xs[0].size();
  for (const auto& row : t_grid) {
    if (row.size() != n) throw InputError("prop26_inequality: ragged grid");
    for (const auto& m : row)
      if (m.rows() != d || m.cols() != d)
        throw InputError("prop26_inequality: operator dimension mismatch");
  }
  std::vector<Vector> vs(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector v = Vector::Zero(d);
    for (std::size_t j = 0; j < n; ++j)
      v += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
           (t_grid[i][j] * xs[j]);
    vs[i] = std::move(v);
  }
  const auto [left, right] = gauss_norm_paired(vs, xs, p, samples, seed);
  GaussIneqReport out;
  out.lhs = left.value;
  out.lhs_se = left.stderr_;
  out.rhs_gauss = right.value;
  out.rhs_se = right.stderr_;
  out.gamma_bound = gamma_bound;
  out.regular = regular_norm(c);
  out.samples = samples;
  const double scale = out.gamma_bound * out.regular;
  out.holds_within_3se =
      out.lhs <= scale * out.rhs_gauss + 3.0 * (out.lhs_se + scale * out.rhs_se);
  return out;
}

// Scalar family T_ij = a_ij I: the exact gamma bound is max |a_ij|.
inline GaussIneqReport prop26_scalar(const Matrix& a, const Matrix& c,
                                     const std::vector<Vector>& xs, double p,
                                     int samples, std::uint64_t seed = 11) {
  const std::size_t n = xs.size();
  if (static_cast<std::size_t>(a.rows()) != n ||
      static_cast<std::size_t>(a.cols()) != n)
    throw InputError("prop26_scalar: a must be n x n");
  const Eigen::Index d = n == 0 ? 0 : xs[0].size();
  std::vector<std::vector<Matrix>> grid(n, std::vector<Matrix>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      grid[i][j] = a(static_cast<Eigen::Index>(i),
                     static_cast<Eigen::Index>(j)) *
                   Matrix::Identity(d, d);
  const double gamma_bound = a.cwiseAbs().maxCoeff();
  return prop26_inequality(grid, c, xs, p, samples,
                           gamma_bound > 0.0 ? gamma_bound : 1.0, seed);
}

}  // namespace rittlab
