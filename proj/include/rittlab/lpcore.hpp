#pragma once

// Operator p-norm machinery. p = 2 is exact through the Gram eigenproblem;
// p != 2 returns certified lower bounds with a witness, found by dual-gradient
// (Boyd) ascent from a deterministic candidate set plus seeded restarts.
//
// op_pnorm searches the primal problem (A, p) and the transposed dual problem
// (A^H, p') jointly. The true norms coincide, each evaluated ratio is a valid
// lower bound for both, and the candidate streams are keyed to the side with
// the smaller exponent, so op_pnorm(A, p) and op_pnorm(A^H, p') enumerate the
// same set of numbers and return the same value.

#include "rittlab/core.hpp"

#include <algorithm>
#include <optional>

namespace rittlab {

struct PnormBudget {
  int restarts = 12;    // seeded random starting points per side
  int iterations = 48;  // ascent steps per starting point
};

struct OpNormEstimate {
  double value = 0.0;
  Vector witness;      // p-normalized input achieving value (up to roundoff)
  bool exact = false;  // true on the p = 2 path
  bool zero = false;   // true when A is identically zero
};

// Exact spectral norm via the Hermitian eigenproblem on the smaller Gram side.
inline double spectral_norm(const Matrix& a) {
  require_finite(a, "spectral_norm");
  if (a.size() == 0) return 0.0;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const Matrix b = a / scale;
  Matrix gram;
  if (a.cols() <= a.rows())
    gram = b.adjoint() * b;
  else
    gram = b * b.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("spectral_norm: Gram eigensolver failed");
  return scale * std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// Unit-2-norm right singular vector for the top singular value.
inline Vector top_right_singular_vector(const Matrix& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  Matrix gram = (a / scale).adjoint() * (a / scale);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("top_right_singular_vector: eigensolver failed");
  Eigen::Index which = 0;
  es.eigenvalues().maxCoeff(&which);
  return es.eigenvectors().col(which);
}

// Norming map for l^p, up to positive scale: y -> |y|^(p-1) * phase(y),
// rescaled by the largest modulus so that pow never overflows at large p.
// Every caller renormalizes, so only the direction matters.
inline Vector dual_sign(const Vector& y, double p) {
  Vector out = Vector::Zero(y.size());
  const double mmax = y.size() > 0 ? y.cwiseAbs().maxCoeff() : 0.0;
  if (mmax == 0.0) return out;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double m = std::abs(y[i]);
    if (m > 0.0) out[i] = std::pow(m / mmax, p - 1.0) * (y[i] / m);
  }
  return out;
}

namespace detail {

struct SideBest {
  double value = 0.0;
  Vector witness;  // on that side's input space
};

inline double ratio_p(const Matrix& a, const Vector& x, double p) {
  const double nx = vec_p_norm(x, p);
  if (nx == 0.0) return 0.0;
  return vec_p_norm(a * x, p) / nx;
}

// Ascent from one starting vector; returns the best ratio seen on the path.
inline void boyd_ascend(const Matrix& a, double p, Vector x, int iterations,
                        SideBest& best) {
  const double q = p / (p - 1.0);
  for (int it = 0; it < iterations; ++it) {
    const double nx = vec_p_norm(x, p);
    if (nx == 0.0) return;
    x /= nx;
    const double val = vec_p_norm(a * x, p);
    if (val > best.value) {
      best.value = val;
      best.witness = x;
    }
    const Vector z = dual_sign(a * x, p);
    const Vector w = a.adjoint() * z;
    if (w.cwiseAbs().maxCoeff() == 0.0) return;
    x = dual_sign(w, q);
  }
}

inline SideBest search_side(const Matrix& a, double p, const PnormBudget& budget,
                            std::uint64_t seed, std::uint64_t stream_base) {
  SideBest best;
  const Eigen::Index n = a.cols();
  // Column ratios: exact on diagonal-type operators, cheap everywhere.
  Eigen::Index best_col = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = vec_p_norm(a.col(j), p);
    if (v > best.value) {
      best.value = v;
      best.witness = Vector::Unit(n, j);
      best_col = j;
    }
  }
  boyd_ascend(a, p, Vector::Unit(n, best_col), budget.iterations, best);
  boyd_ascend(a, p, Vector::Constant(n, Complex(1.0)), budget.iterations, best);
  boyd_ascend(a, p, top_right_singular_vector(a), budget.iterations, best);
  for (int r = 0; r < budget.restarts; ++r) {
    Rng rng = Rng::derived(seed, stream_base + static_cast<std::uint64_t>(r));
    boyd_ascend(a, p, rng.cgauss_vec(n), budget.iterations, best);
  }
  return best;
}

}  // namespace detail

inline OpNormEstimate op_pnorm(const Matrix& a, double p,
                               const PnormBudget& budget = {},
                               std::uint64_t seed = 1) {
  require_exponent(p);
  require_finite(a, "op_pnorm");
  if (a.size() == 0) return {0.0, Vector(), true, true};
  if (a.cwiseAbs().maxCoeff() == 0.0) {
    OpNormEstimate z;
    z.value = 0.0;
    z.witness = Vector::Unit(a.cols(), 0);
    z.exact = true;
    z.zero = true;
    return z;
  }
  if (std::abs(p - 2.0) <= 1e-12) {
    OpNormEstimate e;
    e.value = spectral_norm(a);
    e.witness = top_right_singular_vector(a);
    e.exact = true;
    return e;
  }

  const double q = holder_conjugate(p);
  const Matrix ah = a.adjoint();
  // Streams are keyed to the smaller exponent so (A, p) and (A^H, p') calls
  // enumerate identical candidates.
  const bool primal_low = p < q;
  const std::uint64_t low_base = 0x100000, high_base = 0x200000;
  detail::SideBest primal = detail::search_side(
      a, p, budget, seed, primal_low ? low_base : high_base);
  detail::SideBest dual = detail::search_side(
      ah, q, budget, seed, primal_low ? high_base : low_base);

  // Witness transfer in both directions keeps the value symmetric in p <-> p'.
  double t_to_primal = 0.0, t_to_dual = 0.0;
  std::optional<Vector> transferred;
  if (dual.witness.size() > 0) {
    Vector xh = dual_sign(ah * dual.witness, q);
    const double nx = vec_p_norm(xh, p);
    if (nx > 0.0) {
      xh /= nx;
      t_to_primal = detail::ratio_p(a, xh, p);
      transferred = xh;
    }
  }
  if (primal.witness.size() > 0) {
    Vector yh = dual_sign(a * primal.witness, p);
    const double ny = vec_p_norm(yh, q);
    if (ny > 0.0) t_to_dual = detail::ratio_p(ah, yh / ny, q);
  }

  OpNormEstimate e;
  e.value = std::max({primal.value, dual.value, t_to_primal, t_to_dual});
  e.witness = (transferred && t_to_primal > primal.value) ? *transferred
                                                          : primal.witness;
  return e;
}

// Flattens an n x n grid of m x m blocks into the operator it represents on
// l^p_n(l^p_m) = l^p_{nm} (outer index slow) and estimates its norm.
inline OpNormEstimate block_pnorm(const std::vector<std::vector<Matrix>>& blocks,
                                  double p, const PnormBudget& budget = {},
                                  std::uint64_t seed = 1) {
  const std::size_t n = blocks.size();
  if (n == 0) return {0.0, Vector(), true, true};
  const Eigen::Index m = blocks[0][0].rows();
  for (const auto& row : blocks) {
    if (row.size() != n) throw InputError("block_pnorm: ragged block grid");
    for (const auto& b : row)
      if (b.rows() != m || b.cols() != m)
        throw InputError("block_pnorm: blocks must share one square size");
  }
  Matrix big(n * m, n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      big.block(i * m, j * m, m, m) = blocks[i][j];
  return op_pnorm(big, p, budget, seed);
}

// Eigenvalues sorted by (real, imag) for reproducible reports.
inline std::vector<Complex> spectrum(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("spectrum: matrix must be square");
  require_finite(a, "spectrum");
  if (a.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("spectrum: eigensolver failed");
  std::vector<Complex> ev(es.eigenvalues().data(),
                          es.eigenvalues().data() + a.rows());
  std::sort(ev.begin(), ev.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return ev;
}

// R(lambda, A) = (lambda I - A)^{-1}, guarded against near-singular shifts.
inline Matrix resolvent(const Matrix& a, Complex lambda,
                        double residual_tol = 1e-8) {
  if (a.rows() != a.cols()) throw InputError("resolvent: matrix must be square");
  require_finite(a, "resolvent");
  if (!finite(lambda)) throw InputError("resolvent: non-finite lambda");
  const Eigen::Index n = a.rows();
  Matrix m = -a;
  m.diagonal().array() += lambda;
  Eigen::PartialPivLU<Matrix> lu(m);
  Matrix r = lu.solve(Matrix::Identity(n, n));
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double resid =
      (m * r - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() / scale;
  if (!(resid < residual_tol) || !r.allFinite()) {
    Complex nearest = 0.0;
    double dist = std::numeric_limits<double>::infinity();
    for (const Complex& ev : spectrum(a)) {
      const double d = std::abs(ev - lambda);
      if (d < dist) {
        dist = d;
        nearest = ev;
      }
    }
    throw SingularityError(
        "resolvent: lambda = (" + std::to_string(lambda.real()) + "," +
        std::to_string(lambda.imag()) + ") is within " + std::to_string(dist) +
        " of eigenvalue (" + std::to_string(nearest.real()) + "," +
        std::to_string(nearest.imag()) + "); solve residual " +
        std::to_string(resid));
  }
  return r;
}

// Rigorous upper bound for ||A||_{p->p}: the best of interpolation between
// the exact p = 1 and p = infinity norms, interpolation through the spectral
// norm, and the per-row Hoelder bound. Exact at p = 2.
inline double op_pnorm_upper(const Matrix& a, double p) {
  require_exponent(p);
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  require_finite(a, "op_pnorm_upper");
  if (std::abs(p - 2.0) <= 1e-12) return spectral_norm(a);
  const RealMatrix mag = a.cwiseAbs();
  const double row_sum = mag.rowwise().sum().maxCoeff();  // ||A||_inf
  const double col_sum = mag.colwise().sum().maxCoeff();  // ||A||_1
  double best = std::pow(col_sum, 1.0 / p) * std::pow(row_sum, 1.0 - 1.0 / p);
  const double sigma = spectral_norm(a);
  if (p < 2.0) {
    const double th = 2.0 * (1.0 - 1.0 / p);  // 1/p = (1-th)/1 + th/2
    best = std::min(best, std::pow(col_sum, 1.0 - th) * std::pow(sigma, th));
  } else {
    const double th = 1.0 - 2.0 / p;  // 1/p = (1-th)/2
    best = std::min(best, std::pow(sigma, 1.0 - th) * std::pow(row_sum, th));
  }
  if (p > 1.0) {
    const double q = holder_conjugate(p);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Vector row = a.row(i).transpose();
      acc += std::pow(vec_p_norm(row, q), p);
    }
    best = std::min(best, std::pow(acc, 1.0 / p));
  }
  return best;
}

// Norming map for the mixed l^p(l^2) norm: row i maps to ||Y_i||^(p-2) Y_i.
inline Matrix mixed_dual_sign(const Matrix& y, double p) {
  Matrix out = Matrix::Zero(y.rows(), y.cols());
  double rmax = 0.0;
  for (Eigen::Index i = 0; i < y.rows(); ++i) rmax = std::max(rmax, y.row(i).norm());
  if (rmax == 0.0) return out;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const double m = y.row(i).norm();
    if (m > 0.0) out.row(i) = std::pow(m / rmax, p - 1.0) * (y.row(i) / m);
  }
  return out;
}

}  // namespace rittlab
