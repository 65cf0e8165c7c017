#pragma once

// The two counterexample constructions, finitely modeled.
//
// CAR block machinery: C_k = E^{(k-1) tensor} ⊗ D padded to 2^m, integer
// matrices throughout so the pairing identities are checked with zero
// tolerance. The w-map lower bound runs on l^p(l^2) elements represented as
// 2^m x 2^m matrices (rows = outer cells), where the quadratic action is
// X -> sum_k C_k X C_k^T and never materializes the 4^m x 4^m operator.
//
// Foguel-type multipliers: T = B diag(1 - 2^{-k}) B^{-1} against a
// conditional-basis generator, the v1 calculus, and the resolvent sequence
// c(theta)_n = 1/(e^{i theta} - (1 - 2^{-n})) with its integral caps.

#include "rittlab/core.hpp"
#include "rittlab/lpcore.hpp"
#include "rittlab/quadrature.hpp"
#include "rittlab/ritt.hpp"

#include <string>

namespace rittlab {

using IntMatrix =
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

template <class Mat>
Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline IntMatrix car_d() {
  IntMatrix d(2, 2);
  d << 0, 1, 0, 0;
  return d;
}
inline IntMatrix car_e() {
  IntMatrix e(2, 2);
  e << 1, 0, 0, -1;
  return e;
}

// C_k = E^{⊗(k-1)} ⊗ D, size 2^k.
inline IntMatrix car_matrix(int k) {
  if (k < 1 || k > 24) throw InputError("car_matrix: 1 <= k <= 24 required");
  IntMatrix c = car_d();
  for (int j = 1; j < k; ++j) c = kron(car_e(), c);
  return c;
}

// C_k ⊗ I_{2^{m-k}}, size 2^m.
inline IntMatrix car_padded(int m, int k) {
  if (m < 1 || m > 12 || k < 1 || k > m)
    throw InputError("car_padded: need 1 <= k <= m <= 12");
  IntMatrix id = IntMatrix::Identity(1LL << (m - k), 1LL << (m - k));
  return kron(car_matrix(k), id);
}

struct CarIdentityReport {
  double norm = 0.0;      // || sum alpha_k padded C_k || on l^2
  double expected = 0.0;  // ||alpha||_2
  double error = 0.0;
};

// || sum_k alpha_k C_k ⊗ I || = ||alpha||_2, the anticommutation identity.
inline CarIdentityReport car_identity(int m, const Vector& alpha) {
  if (m < 1 || m > 6) throw InputError("car_identity: 1 <= m <= 6 required");
  if (alpha.size() != m) throw InputError("car_identity: alpha must have length m");
  require_finite(alpha, "car_identity");
  const Eigen::Index dim = 1LL << m;
  Matrix acc = Matrix::Zero(dim, dim);
  for (int k = 1; k <= m; ++k)
    acc += alpha[k - 1] * car_padded(m, k).cast<Complex>();
  CarIdentityReport out;
  out.norm = spectral_norm(acc);
  out.expected = alpha.norm();
  out.error = std::abs(out.norm - out.expected);
  return out;
}

struct CarL1Report {
  std::vector<long long> column_sums;  // l1 -> l1 norm of each padded C_k
  bool all_unit = false;
  double tensor_identity_err = 0.0;  // ||A ⊗ T||_1 vs ||A||_1 ||T||_1
};

inline double l1_op_norm(const Matrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

inline CarL1Report car_l1_norms(int m, std::uint64_t seed = 5) {
  if (m < 1 || m > 6) throw InputError("car_l1_norms: 1 <= m <= 6 required");
  CarL1Report out;
  out.all_unit = true;
  for (int k = 1; k <= m; ++k) {
    const IntMatrix c = car_padded(m, k);
    long long best = 0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      long long s = 0;
      for (Eigen::Index i = 0; i < c.rows(); ++i) s += std::abs(c(i, j));
      best = std::max(best, s);
    }
    out.column_sums.push_back(best);
    if (best != 1) out.all_unit = false;
  }
  Rng rng(seed);
  for (int trial = 0; trial < 16; ++trial) {
    const Matrix a = rng.cgauss_mat(3, 3);
    const Matrix t = rng.cgauss_mat(2, 2);
    const double lhs = l1_op_norm(kron(a, t));
    const double rhs = l1_op_norm(a) * l1_op_norm(t);
    out.tensor_identity_err = std::max(
        out.tensor_identity_err, std::abs(lhs - rhs) / std::max(1.0, rhs));
  }
  return out;
}

namespace detail {

// Lower-bound search for an operator on l^p(l^2) given by its action on
// element matrices (rows = outer cells, columns = l^2 fiber): Boyd ascent
// through the mixed norming maps, running max over every iterate.
template <class Fwd, class Adj>
double mixed_boyd_search(Fwd&& apply, Adj&& apply_adj,
                         const std::vector<Matrix>& starts, double p,
                         int iterations = 24) {
  double best = 0.0;
  for (const Matrix& x0 : starts) {
    Matrix x = x0;
    double xn = mixed_norm(x, p);
    if (!(xn > 0.0)) continue;
    for (int it = 0; it < iterations; ++it) {
      const Matrix y = apply(x);
      const double yn = mixed_norm(y, p);
      best = std::max(best, yn / xn);
      if (!(yn > 0.0)) break;
      const Matrix z = apply_adj(mixed_dual_sign(y, p));
      const double q = holder_conjugate(p);
      const Matrix xn_next = mixed_dual_sign(z, q);
      x = xn_next;
      xn = mixed_norm(x, p);
      if (!(xn > 0.0)) break;
    }
  }
  return best;
}

}  // namespace detail

struct PhiNormsReport {
  double norm2 = 0.0;          // sup over the unit circle of the block norm
  double norm2_expected = 0.0;  // sqrt(m)
  long long norm1_bound = 0;    // sum of l1 block norms = m
  double normp_estimate = 0.0;  // flat block circulant lower bound on l^p
  double normp_cap = 0.0;       // m^{1/min(p,p')}, the interpolation bound
  bool within_cap = false;
};

// phi_m(z) = sum_k C_k ⊗ I z^{2^k} evaluated as (a) pointwise spectral norms
// on the circle, (b) the l1 coefficient bound, (c) a circulant lower bound in
// the flat norm of l^p_{2^m}(l^p_N). The interpolation cap uses min(p, p'):
// the l2 norm is already sqrt(m) and transposition (which swaps p and p')
// amounts to conjugating each block by a signed permutation, so the p-norm
// is symmetric in p <-> p' and only the l1-l2 leg of the interpolation can
// bind. m^{1/p} alone would be unachievable for p > 2.
inline PhiNormsReport phi_m_norms(int m, double p, int n_circ,
                                  std::uint64_t seed = 29) {
  if (m < 1 || m > 4) throw InputError("phi_m_norms: 1 <= m <= 4 required");
  require_exponent(p);
  if (p == 1.0) throw InputError("phi_m_norms: p in (1, inf) required");
  if (n_circ <= (1 << m))
    throw InputError("phi_m_norms: N must exceed 2^m, the top degree");
  const Eigen::Index dim = 1LL << m;
  std::vector<Matrix> blocks;  // padded C_k as complex, k = 1..m
  for (int k = 1; k <= m; ++k)
    blocks.push_back(car_padded(m, k).cast<Complex>());

  PhiNormsReport out;
  out.norm2_expected = std::sqrt(static_cast<double>(m));
  for (int g = 0; g < 256; ++g) {
    const double th = 2.0 * std::numbers::pi * g / 256;
    Matrix acc = Matrix::Zero(dim, dim);
    for (int k = 1; k <= m; ++k) {
      const double ang = th * static_cast<double>(1LL << k);
      acc += Complex(std::cos(ang), std::sin(ang)) * blocks[k - 1];
    }
    out.norm2 = std::max(out.norm2, spectral_norm(acc));
  }
  out.norm1_bound = m;  // each block has unit l1 norm (car_l1_norms)

  // Flat block circulant: index (i, t) -> i n + t, with
  // (phi x)(i, t) = sum_k sum_j Ck(i, j) x(j, t - 2^k mod n).
  const int n = n_circ;
  Matrix big = Matrix::Zero(dim * n, dim * n);
  for (int k = 1; k <= m; ++k) {
    const int s = static_cast<int>(1LL << k) % n;
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex c = blocks[k - 1](i, j);
        if (c == Complex(0.0, 0.0)) continue;
        for (int t = 0; t < n; ++t)
          big(i * n + t, j * n + (t - s % n + n) % n) += c;
      }
  }
  out.normp_estimate = op_pnorm(big, p, {8, 32}, seed).value;
  out.normp_cap =
      std::pow(static_cast<double>(m), 1.0 / std::min(p, holder_conjugate(p)));
  out.within_cap = out.normp_estimate <= out.normp_cap + 1e-6;
  return out;
}

struct WLowerBoundReport {
  long long pairing = 0;      // exact integer, m 2^{m-1}
  double norm_u = 0.0;        // ||sum_b e_b ⊗ e_b|| in l^p(l^2), computed
  double norm_u_dual = 0.0;   // same in l^{p'}(l^2)
  double analytic_lb = 0.0;   // pairing / (norm_u norm_u_dual) = m/2
  double search_lb = 0.0;     // mixed Boyd from the witness; >= analytic - eps
};

// G = sum_k (C_k ⊗ I) ⊗ (C_k ⊗ I) on l^p_{2^m}(l^2_{2^m}); its action on an
// element matrix X is sum_k C_k X C_k^T. The diagonal tensor u = identity
// pairs with itself to the exact integer sum of squared entries.
inline WLowerBoundReport w_lower_bound(int m, double p,
                                       std::uint64_t seed = 31) {
  if (m < 1 || m > 6) throw InputError("w_lower_bound: 1 <= m <= 6 required");
  require_exponent(p);
  if (p == 1.0) throw InputError("w_lower_bound: p in (1, inf) required");
  const Eigen::Index dim = 1LL << m;
  std::vector<IntMatrix> ints;
  std::vector<Matrix> cplx, cplx_t;
  for (int k = 1; k <= m; ++k) {
    ints.push_back(car_padded(m, k));
    cplx.push_back(ints.back().cast<Complex>());
    cplx_t.push_back(cplx.back().transpose());
  }
  WLowerBoundReport out;
  for (const IntMatrix& c : ints)
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) out.pairing += c(i, j) * c(i, j);

  const Matrix u = Matrix::Identity(dim, dim);
  out.norm_u = mixed_norm(u, p);
  const double pc = holder_conjugate(p);
  out.norm_u_dual = mixed_norm(u, pc);
  out.analytic_lb =
      static_cast<double>(out.pairing) / (out.norm_u * out.norm_u_dual);

  auto fwd = [&](const Matrix& x) {
    Matrix y = Matrix::Zero(dim, dim);
    for (int k = 0; k < m; ++k) y += cplx[k] * x * cplx_t[k];
    return y;
  };
  auto adj = [&](const Matrix& y) {
    Matrix x = Matrix::Zero(dim, dim);
    for (int k = 0; k < m; ++k) x += cplx_t[k] * y * cplx[k];
    return x;
  };
  std::vector<Matrix> starts;
  starts.push_back(u);
  Rng rng(seed);
  for (int t = 0; t < 4; ++t) starts.push_back(rng.cgauss_mat(dim, dim));
  out.search_lb = detail::mixed_boyd_search(fwd, adj, starts, p);
  return out;
}

struct V1Sequence {
  std::vector<Complex> c;
};

inline double v1_norm(const V1Sequence& s) {
  if (s.c.empty()) return 0.0;
  double acc = std::abs(s.c[0]);
  for (std::size_t n = 1; n < s.c.size(); ++n)
    acc += std::abs(s.c[n] - s.c[n - 1]);
  return acc;
}

// Unit upper triangular with geometric superdiagonal bands; the knob trades
// conditioning for basis-constant growth.
inline Matrix conditional_basis(int n, double strength = 0.9) {
  if (n < 1) throw InputError("conditional_basis: n >= 1 required");
  if (!(strength >= 0.0) || !(strength < 2.0))
    throw InputError("conditional_basis: strength in [0, 2) required");
  Matrix b = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      b(i, j) = std::pow(strength, j - i) * ((j - i) % 2 == 0 ? 1.0 : -1.0);
  return b;
}

inline std::vector<Complex> foguel_sequence(int n) {
  std::vector<Complex> c;
  for (int k = 0; k < n; ++k) c.push_back(1.0 - std::ldexp(1.0, -k));
  return c;
}

struct FoguelReport {
  Matrix t;
  double basis_condition = 0.0;
  bool condition_warning = false;
  double gamma_opt = 0.0;
  PowerConstants powers;
  RittConstant ritt;
};

// T = B diag(1 - 2^{-k}) B^{-1} with full Ritt diagnostics attached.
inline FoguelReport foguel_operator(int n, const Matrix& basis, double p,
                                    int n_max = 256,
                                    double condition_cap = 1e10) {
  if (n < 1) throw InputError("foguel_operator: n >= 1 required");
  if (basis.rows() != n || basis.cols() != n)
    throw InputError("foguel_operator: basis must be n x n");
  require_finite(basis, "foguel_operator");
  Eigen::JacobiSVD<Matrix> svd(basis);
  const double smin = svd.singularValues().minCoeff();
  if (!(smin > 0.0)) throw InputError("foguel_operator: basis is singular");
  FoguelReport out;
  out.basis_condition = svd.singularValues().maxCoeff() / smin;
  out.condition_warning = out.basis_condition > condition_cap;
  Vector diag(n);
  const std::vector<Complex> c = foguel_sequence(n);
  for (int k = 0; k < n; ++k) diag[k] = c[static_cast<std::size_t>(k)];
  out.t = basis * diag.asDiagonal() * basis.partialPivLu().inverse();
  out.gamma_opt = optimal_gamma(out.t);
  out.powers = power_constants(out.t, n_max, p);
  out.ritt = ritt_resolvent_constant(out.t, p);
  return out;
}

struct IThetaReport {
  double theta = 0.0;
  double variation = 0.0;       // sum_{n>=1} |c(theta)_n - c(theta)_{n-1}|
  double v1 = 0.0;              // |c(theta)_0| + variation
  double i_quadrature = 0.0;    // ∫_0^1 dt/|e^{i theta} - t|^2
  double i_closed = 0.0;        // (pi - theta) / (2 sin theta)
  double product = 0.0;         // |e^{i theta} - 1| * i_quadrature
  double product_closed = 0.0;  // (pi - theta) / (2 cos(theta/2))
  bool variation_within_cap = false;
  bool quadrature_matches = false;
  bool product_matches = false;
};

// The resolvent multiplier sequence at e^{i theta} and its two closed forms.
inline IThetaReport resolvent_multiplier_bounds(double theta) {
  if (!(theta > 0.0) || !(theta < std::numbers::pi))
    throw InputError("resolvent_multiplier_bounds: theta in (0, pi) required");
  IThetaReport out;
  out.theta = theta;
  const Complex lambda(std::cos(theta), std::sin(theta));
  auto c_n = [&](int n) {
    return 1.0 / (lambda - Complex(1.0 - std::ldexp(1.0, -n)));
  };
  out.v1 = std::abs(c_n(0));
  Complex prev = c_n(0);
  for (int n = 1; n <= 400; ++n) {
    const Complex cur = c_n(n);
    const double inc = std::abs(cur - prev);
    out.variation += inc;
    prev = cur;
    if (n > 8 && inc < 1e-17 * std::max(out.variation, 1.0)) break;
  }
  out.v1 += out.variation;
  out.i_quadrature = integrate_panels(
      [&](double t) {
        const double dx = t - std::cos(theta);
        return 1.0 / (dx * dx + std::sin(theta) * std::sin(theta));
      },
      0.0, 1.0, 64, 12, 0.0);
  out.i_closed = (std::numbers::pi - theta) / (2.0 * std::sin(theta));
  out.product = std::abs(lambda - Complex(1.0)) * out.i_quadrature;
  out.product_closed =
      (std::numbers::pi - theta) / (2.0 * std::cos(theta / 2.0));
  out.variation_within_cap = out.variation <= out.i_quadrature + 1e-8;
  out.quadrature_matches = std::abs(out.i_quadrature - out.i_closed) <= 1e-8;
  out.product_matches = std::abs(out.product - out.product_closed) <= 1e-8;
  return out;
}

struct SchauderMultiplierReport {
  double sup_qn = 0.0;   // sup_n op_pnorm(Q_n, p), search lower bounds
  double v1 = 0.0;       // v1 norm of the multiplier sequence
  double tc_norm = 0.0;  // op_pnorm(T_c, p)
  double bound = 0.0;    // sup_qn * v1
  bool holds = false;
};

// T_c = B diag(c) B^{-1} against the Abel-summation bound through the basis
// projections Q_n = B diag(0,..,0,1,..,1) B^{-1}.
inline SchauderMultiplierReport schauder_multiplier_bound(
    const Matrix& basis, const V1Sequence& c, double p,
    const PnormBudget& budget = {}, std::uint64_t seed = 37) {
  const int n = static_cast<int>(basis.rows());
  if (basis.cols() != n || n < 1)
    throw InputError("schauder_multiplier_bound: square basis required");
  if (c.c.size() != static_cast<std::size_t>(n))
    throw InputError("schauder_multiplier_bound: sequence length mismatch");
  require_finite(basis, "schauder_multiplier_bound");
  const Matrix binv = basis.partialPivLu().inverse();
  SchauderMultiplierReport out;
  for (int start = 0; start < n; ++start) {
    Vector mask = Vector::Zero(n);
    for (int k = start; k < n; ++k) mask[k] = 1.0;
    const Matrix qn = basis * mask.asDiagonal() * binv;
    out.sup_qn = std::max(
        out.sup_qn, op_pnorm(qn, p, budget, seed + 101 * start).value);
  }
  Vector diag(n);
  for (int k = 0; k < n; ++k) diag[k] = c.c[static_cast<std::size_t>(k)];
  const Matrix tc = basis * diag.asDiagonal() * binv;
  out.v1 = v1_norm(c);
  out.tc_norm = op_pnorm(tc, p, budget, seed).value;
  out.bound = out.sup_qn * out.v1;
  out.holds = out.tc_norm <= out.bound + 1e-6;
  return out;
}

}  // namespace rittlab
