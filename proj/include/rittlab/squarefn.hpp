#pragma once

// Discrete square functions ||x||_{T,alpha,p}: the lp norm of the pointwise
// l2 aggregate of k^{alpha-1/2} T^{k-1} (I-T)^alpha x over k >= 1, with
// adaptive truncation. Also the mean-ergodic splitting, Cesaro defect means,
// the coefficient sequence used in the two-exponent equivalence argument,
// and the randomized equivalence / norm-comparison experiments.

#include "rittlab/core.hpp"
#include "rittlab/funcalc.hpp"
#include "rittlab/lpcore.hpp"

#include <optional>

namespace rittlab {

struct SquareFnReport {
  double value = 0.0;
  int k_used = 0;
  double tail_estimate = 0.0;
  bool converged = false;
  double alpha = 0.0;
};

// ||x||_{T,alpha,p}. Accumulates row sums of squares only (never the full
// column matrix), in blocks of 32 columns; stops when a whole block adds
// less than tol^2 of the running squared mass. The tail estimate is a
// geometric extrapolation from the last two block masses.
inline SquareFnReport square_fn(const Matrix& t, const Vector& x, double alpha,
                                double p, double tol = 1e-10,
                                int k_max = 50000) {
  if (t.rows() != t.cols() || t.rows() != x.size())
    throw InputError("square_fn: dimension mismatch");
  if (!(alpha > 0.0)) throw InputError("square_fn: alpha must be positive");
  require_exponent(p);
  if (!(tol > 0.0)) throw InputError("square_fn: tol must be positive");
  if (k_max < 32) throw InputError("square_fn: k_max too small");
  require_finite(t, "square_fn");
  double radius = 0.0;
  for (const Complex& ev : spectrum(t)) radius = std::max(radius, std::abs(ev));
  if (radius > 1.0 + 1e-8)
    throw InputError("square_fn: spectral radius " + std::to_string(radius) +
                     " exceeds 1; operator is not power-bounded");

  const Eigen::Index n = t.rows();
  SquareFnReport out;
  out.alpha = alpha;

  Vector y = frac_power(t, alpha) * x;
  RealVector rsq = RealVector::Zero(n);
  constexpr int block = 32;
  double total_sq = 0.0;
  double prev_block = -1.0, last_block = -1.0;
  Vector power = y;  // T^{k-1} y for the current k
  int k = 0;
  bool stopped = false;
  while (k < k_max) {
    double block_sq = 0.0;
    for (int j = 0; j < block && k < k_max; ++j) {
      ++k;
      const double weight = std::pow(static_cast<double>(k), 2.0 * alpha - 1.0);
      double col_sq = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double a = weight * std::norm(power[i]);
        rsq[i] += a;
        col_sq += a;
      }
      block_sq += col_sq;
      power = (t * power).eval();
    }
    total_sq += block_sq;
    prev_block = last_block;
    last_block = block_sq;
    if (block_sq <= tol * tol * std::max(total_sq, 1e-300)) {
      stopped = true;
      break;
    }
  }
  out.k_used = k;

  // Geometric tail from the block decay ratio.
  double tail_sq = 0.0;
  if (last_block > 0.0 && prev_block > 0.0) {
    const double ratio = last_block / prev_block;
    if (ratio < 1.0) tail_sq = last_block * ratio / (1.0 - ratio);
    else tail_sq = std::numeric_limits<double>::infinity();
  } else if (last_block > 0.0) {
    tail_sq = last_block;
  }

  out.value = vec_p_norm(rsq.cwiseSqrt(), p);
  out.tail_estimate = std::sqrt(std::max(tail_sq, 0.0));
  constexpr double floor = 1e-12;
  out.converged =
      stopped && (out.tail_estimate < tol * out.value ||
                  (out.value <= floor && out.tail_estimate <= floor));
  return out;
}

struct ErgodicSplit {
  Matrix p_t;         // projection onto Ker(I-T) along Ran(I-T)
  Matrix complement;  // I - p_t
  bool converged = true;
  bool used_cesaro = false;
};

// Spectral projection at eigenvalue 1. Diagonalizable route when the
// eigenvector basis is trustworthy; otherwise Cesaro means with doubling
// (C_{2m} = (C_m + T^m C_m)/2), which reaches m ~ 2^60 in 60 steps.
inline ErgodicSplit ergodic_projection(const Matrix& t, double tol = 1e-11) {
  if (t.rows() != t.cols()) throw InputError("ergodic_projection: square matrix required");
  require_finite(t, "ergodic_projection");
  const Eigen::Index n = t.rows();
  ErgodicSplit out;
  Eigen::ComplexEigenSolver<Matrix> es(t, true);
  if (es.info() == Eigen::Success) {
    const Matrix v = es.eigenvectors();
    Eigen::JacobiSVD<Matrix> svd(v);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin > 0.0 && smax / smin < 1e8) {
      Vector f(n);
      for (Eigen::Index i = 0; i < n; ++i)
        f[i] = std::abs(es.eigenvalues()[i] - 1.0) <= 1e-9 ? Complex(1.0)
                                                           : Complex(0.0);
      out.p_t = v * f.asDiagonal() * v.partialPivLu().inverse();
      out.complement = Matrix::Identity(n, n) - out.p_t;
      return out;
    }
  }
  out.used_cesaro = true;
  Matrix mean = Matrix::Identity(n, n);  // C_1
  Matrix pw = t;                         // T^m
  out.converged = false;
  for (int step = 0; step < 80; ++step) {
    const Matrix next = 0.5 * (mean + pw * mean);
    const double delta = (next - mean).norm();
    mean = next;
    pw = (pw * pw).eval();
    if (delta < tol) {
      out.converged = true;
      break;
    }
  }
  out.p_t = mean;
  out.complement = Matrix::Identity(n, n) - out.p_t;
  return out;
}

// (1/(m+1)) sum_{k=0}^{m} (I - T^k). Note the k = 0 term vanishes.
inline Matrix cesaro_lambda(const Matrix& t, long m) {
  if (t.rows() != t.cols()) throw InputError("cesaro_lambda: square matrix required");
  if (m < 0) throw InputError("cesaro_lambda: m >= 0 required");
  const Eigen::Index n = t.rows();
  Matrix acc = Matrix::Zero(n, n);
  Matrix pw = Matrix::Identity(n, n);
  for (long k = 1; k <= m; ++k) {
    pw = (t * pw).eval();
    acc += Matrix::Identity(n, n) - pw;
  }
  return acc / static_cast<double>(m + 1);
}

struct CoefficientCheck {
  std::vector<double> c;      // c_k = k(k+1)...(k+N-2) / k^{alpha-1/2}
  double identity_rel_err = 0.0;
  bool identity_ok = false;
};

// The splitting-coefficient sequence with the generating identity
// sum_k k(k+1)...(k+N-2) z^{k-1} = (N-1)!/(1-z)^N verified by partial
// summation at sample points inside the disc.
inline CoefficientCheck thm33_coefficients(double alpha, int n_split,
                                           int k_max) {
  if (n_split < 1) throw InputError("thm33_coefficients: N >= 1 required");
  if (!(alpha > 0.0)) throw InputError("thm33_coefficients: alpha > 0 required");
  if (!(static_cast<double>(n_split) > alpha))
    throw InputError("thm33_coefficients: N must exceed alpha (gamma > 0)");
  if (k_max < 1) throw InputError("thm33_coefficients: k_max >= 1 required");
  CoefficientCheck out;
  out.c.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    double rising = 1.0;
    for (int j = 0; j < n_split - 1; ++j) rising *= static_cast<double>(k + j);
    out.c.push_back(rising / std::pow(static_cast<double>(k), alpha - 0.5));
  }
  double fact = 1.0;
  for (int j = 1; j <= n_split - 1; ++j) fact *= j;
  const Complex samples[] = {Complex(0.5), Complex(-0.3), Complex(0.8),
                             Complex(0.3, 0.3)};
  double worst = 0.0;
  for (Complex z : samples) {
    Complex sum = 0.0, zpow = 1.0;  // z^{k-1}
    for (int k = 1; k <= 200000; ++k) {
      double rising = 1.0;
      for (int j = 0; j < n_split - 1; ++j) rising *= static_cast<double>(k + j);
      const Complex term = rising * zpow;
      sum += term;
      zpow *= z;
      if (k > 8 && std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    const Complex closed = fact / std::pow(Complex(1.0) - z, Complex(n_split));
    worst = std::max(worst, std::abs(sum - closed) / std::abs(closed));
  }
  out.identity_rel_err = worst;
  out.identity_ok = worst < 1e-10;
  return out;
}

// Default splitting order: the least integer strictly above alpha.
inline int thm33_default_order(double alpha) {
  const double c = std::ceil(alpha);
  return static_cast<int>(c) + (c == alpha ? 1 : 0);
}

struct EquivalenceReport {
  std::vector<double> ratios;
  double c_min = std::numeric_limits<double>::infinity();
  double c_max = 0.0;
  int excluded = 0;
};

// Ratios ||x||_{T,alpha} / ||x||_{T,beta} over random x drawn in the
// ergodic complement. Non-converged square functions exclude the sample.
inline EquivalenceReport equivalence_experiment(const Matrix& t, double alpha,
                                                double beta, double p,
                                                int trials, std::uint64_t seed,
                                                int threads = 1,
                                                double tol = 1e-10,
                                                int k_max = 50000) {
  if (trials < 1) throw InputError("equivalence_experiment: trials >= 1");
  const ErgodicSplit split = ergodic_projection(t);
  struct Sample {
    double ratio = 0.0;
    bool ok = false;
  };
  auto one = [&](int i) -> Sample {
    Rng rng = Rng::derived(seed, 0xE0 + static_cast<std::uint64_t>(i));
    Vector x = split.complement * rng.cgauss_vec(t.rows());
    Sample s;
    const SquareFnReport ra = square_fn(t, x, alpha, p, tol, k_max);
    const SquareFnReport rb = square_fn(t, x, beta, p, tol, k_max);
    if (!ra.converged || !rb.converged || rb.value < 1e-14) return s;
    s.ratio = ra.value / rb.value;
    s.ok = true;
    return s;
  };
  const std::vector<Sample> samples = parallel_map<Sample>(trials, threads, one);
  EquivalenceReport out;
  for (const Sample& s : samples) {
    if (!s.ok) {
      ++out.excluded;
      continue;
    }
    out.ratios.push_back(s.ratio);
    out.c_min = std::min(out.c_min, s.ratio);
    out.c_max = std::max(out.c_max, s.ratio);
  }
  return out;
}

struct ComparisonReport {
  std::vector<double> ratios;  // ||x||_p / (||P_T x||_p + ||x||_{T,1})
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = 0.0;
  int excluded = 0;
};

// ||x||_p against ||P_T x||_p + ||x||_{T,1,p} on random full-space samples.
inline ComparisonReport prop34_check(const Matrix& t, double p, int trials,
                                     std::uint64_t seed = 7, int threads = 1) {
  if (trials < 1) throw InputError("prop34_check: trials >= 1");
  const ErgodicSplit split = ergodic_projection(t);
  struct Sample {
    double ratio = 0.0;
    bool ok = false;
  };
  auto one = [&](int i) -> Sample {
    Rng rng = Rng::derived(seed, 0xF0 + static_cast<std::uint64_t>(i));
    const Vector x = rng.cgauss_vec(t.rows());
    Sample s;
    const SquareFnReport sq = square_fn(t, x, 1.0, p);
    if (!sq.converged) return s;
    const double denom = vec_p_norm(split.p_t * x, p) + sq.value;
    if (denom < 1e-14) return s;
    s.ratio = vec_p_norm(x, p) / denom;
    s.ok = true;
    return s;
  };
  const std::vector<Sample> samples = parallel_map<Sample>(trials, threads, one);
  ComparisonReport out;
  for (const Sample& s : samples) {
    if (!s.ok) {
      ++out.excluded;
      continue;
    }
    out.ratios.push_back(s.ratio);
    out.r_min = std::min(out.r_min, s.ratio);
    out.r_max = std::max(out.r_max, s.ratio);
  }
  return out;
}

}  // namespace rittlab
