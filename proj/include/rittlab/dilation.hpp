#pragma once

// Constructive loose dilation on Z = X ⊕_p (ring ⊗ X with l2 fiber norm):
// J embeds X by the square-function columns T^{k-1}(I-T)^{1/2}x, U is the
// cyclic slot shift (exactly invertible, exactly norm 1), Q = Theta J2^H,
// and T^m = Q U^m J up to a truncation tail that decays geometrically in K.
//
// Z vectors are flat: head block of size n, then L ring slots of size n.
// The ring replaces the bilateral shift; L >= K + M + 1 keeps the K-column
// support and up to M shifts from wrapping into the truncation window, and
// the window P zeroes the top M slots (the "negative" indices).

#include "rittlab/core.hpp"
#include "rittlab/funcalc.hpp"
#include "rittlab/json_io.hpp"
#include "rittlab/lpcore.hpp"
#include "rittlab/squarefn.hpp"

namespace rittlab {

struct DilationBundle {
  Matrix t;
  double p = 2.0;
  int k_cols = 0;   // columns k = 1..K
  int ring = 0;     // ring length L
  int m_pow = 0;    // maximum verified power M
  Matrix p_t, complement;  // mean-ergodic splitting
  Matrix s;                // (I-T)^{1/2}, kernel annihilated
  Matrix theta;            // (I+T) on the complement, identity on the kernel
  Matrix j1, j2;           // X -> Z
  Matrix q;                // Z -> X
  std::vector<double> residuals;  // upper bounds on ||T^m - Q U^m J||, m = 0..M
  double rho_interior = 0.0;      // largest |eigenvalue| off the kernel
  bool k_warning = false;         // predicted tail above tol at this K
};

inline Eigen::Index z_dim(const DilationBundle& b) {
  return b.t.rows() * (1 + b.ring);
}

// ||(x0, s)||_Z = (||x0||_p^p + mixed_norm(s)^p)^{1/p}.
inline double z_norm(const Vector& z, Eigen::Index n, int ring, double p) {
  if (z.size() != n * (1 + ring)) throw InputError("z_norm: layout mismatch");
  const double head = vec_p_norm(z.head(n), p);
  Matrix slots(n, ring);
  for (int t = 0; t < ring; ++t) slots.col(t) = z.segment(n * (1 + t), n);
  const double tail = mixed_norm(slots, p);
  return std::pow(std::pow(head, p) + std::pow(tail, p), 1.0 / p);
}

// U^m: identity on the head, slot t reads slot t+m (mod L). Any integer m.
inline Vector apply_U(const Vector& z, Eigen::Index n, int ring, long m) {
  if (z.size() != n * (1 + ring)) throw InputError("apply_U: layout mismatch");
  Vector out(z.size());
  out.head(n) = z.head(n);
  for (long t = 0; t < ring; ++t) {
    long src = (t + m) % ring;
    if (src < 0) src += ring;
    out.segment(n * (1 + t), n) = z.segment(n * (1 + src), n);
  }
  return out;
}

namespace detail {

// Same slot rotation applied to the row blocks of a map X -> Z.
inline Matrix rotate_slots(const Matrix& j, Eigen::Index n, int ring, long m) {
  Matrix out(j.rows(), j.cols());
  out.topRows(n) = j.topRows(n);
  for (long t = 0; t < ring; ++t) {
    long src = (t + m) % ring;
    if (src < 0) src += ring;
    out.middleRows(n * (1 + t), n) = j.middleRows(n * (1 + src), n);
  }
  return out;
}

// Upper bound for the norm of a map X -> Z: per-row Hoelder on the head and
// on the l2-aggregated slot rows, combined by the p-sum defining Z.
inline double z_map_norm_upper(const Matrix& d, Eigen::Index n, int ring,
                               double p) {
  const double q = p > 1.0 ? holder_conjugate(p) : 1e6;
  double head_acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector row = d.row(i).transpose();
    head_acc += std::pow(vec_p_norm(row, q), p);
  }
  double slot_acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    // l2 over slots of the Hoelder row bounds dominates the fiber norm.
    double sq = 0.0;
    for (int t = 0; t < ring; ++t) {
      const Vector row = d.row(n * (1 + t) + i).transpose();
      const double r = vec_p_norm(row, q);
      sq += r * r;
    }
    slot_acc += std::pow(std::sqrt(sq), p);
  }
  return std::pow(head_acc + slot_acc, 1.0 / p);
}

}  // namespace detail

inline DilationBundle build_dilation(const Matrix& t, double p, int k_cols,
                                     int m_pow, int ring = 0,
                                     double tol = 1e-6) {
  if (t.rows() != t.cols()) throw InputError("build_dilation: square matrix required");
  require_exponent(p);
  if (k_cols < 1 || m_pow < 0) throw InputError("build_dilation: K >= 1, M >= 0 required");
  if (ring == 0) ring = k_cols + m_pow + 1;
  if (ring < k_cols + m_pow + 1)
    throw InputError("build_dilation: ring length must be at least K + M + 1");
  require_finite(t, "build_dilation");
  const Eigen::Index n = t.rows();

  DilationBundle b;
  b.t = t;
  b.p = p;
  b.k_cols = k_cols;
  b.ring = ring;
  b.m_pow = m_pow;
  for (const Complex& ev : spectrum(t)) {
    if (std::abs(ev - 1.0) <= 1e-9) continue;
    if (std::abs(ev) >= 1.0 - 1e-14)
      throw InputError("build_dilation: eigenvalue (" +
                       std::to_string(ev.real()) + "," +
                       std::to_string(ev.imag()) +
                       ") is neither 1 nor strictly inside the disc");
    b.rho_interior = std::max(b.rho_interior, std::abs(ev));
  }

  const ErgodicSplit split = ergodic_projection(t);
  b.p_t = split.p_t;
  b.complement = split.complement;
  b.s = frac_power(t, 0.5);  // eigenvalue 1 maps to exactly 0
  b.theta = (Matrix::Identity(n, n) + t) * b.complement + b.p_t;

  const Eigen::Index zd = n * (1 + ring);
  b.j1 = Matrix::Zero(zd, n);
  b.j2 = Matrix::Zero(zd, n);
  b.j1.topRows(n) = b.p_t;
  b.j2.topRows(n) = b.p_t.adjoint();
  Matrix col1 = b.s;            // T^{k-1} S
  Matrix col2 = b.s.adjoint();  // (T^H)^{k-1} S^H
  const Matrix th = t.adjoint();
  for (int k = 0; k < k_cols; ++k) {
    b.j1.middleRows(n * (1 + k), n) = col1;
    b.j2.middleRows(n * (1 + k), n) = col2;
    if (k + 1 < k_cols) {
      col1 = (t * col1).eval();
      col2 = (th * col2).eval();
    }
  }
  b.q = b.theta * b.j2.adjoint();

  // Predicted truncation scale: the duality tail is rho^{2K} and the power
  // residuals are rho^{2K-m} on the interior spectrum.
  const double predicted =
      b.rho_interior > 0.0
          ? std::pow(b.rho_interior, std::max(2 * k_cols - m_pow, 1))
          : 0.0;
  b.k_warning = predicted > tol;

  b.residuals.reserve(static_cast<std::size_t>(m_pow) + 1);
  Matrix tm = Matrix::Identity(n, n);
  for (int m = 0; m <= m_pow; ++m) {
    const Matrix approx = b.q * detail::rotate_slots(b.j1, n, ring, m);
    b.residuals.push_back(op_pnorm_upper(tm - approx, p));
    if (m < m_pow) tm = (t * tm).eval();
  }
  return b;
}

// Q U^m J as an explicit matrix on X.
inline Matrix qumj(const DilationBundle& b, long m) {
  return b.q * detail::rotate_slots(b.j1, b.t.rows(), b.ring, m);
}

// ||Theta J2^H J1 - I||, the duality defect; truncation-tail sized.
inline double verify_duality_identity(const DilationBundle& b) {
  const Eigen::Index n = b.t.rows();
  const Matrix defect =
      b.theta * (b.j2.adjoint() * b.j1) - Matrix::Identity(n, n);
  return op_pnorm_upper(defect, b.p);
}

// ||P U^n J1 - J1 T^n|| as maps into Z. P zeroes the top M slots, where the
// shifted columns wrap; n > M would contaminate the window and is refused.
inline double verify_intertwining(const DilationBundle& b, int n_shift) {
  if (n_shift < 0 || n_shift > b.m_pow)
    throw InputError("verify_intertwining: need 0 <= n <= M");
  const Eigen::Index n = b.t.rows();
  Matrix lhs = detail::rotate_slots(b.j1, n, b.ring, n_shift);
  for (int t = b.ring - b.m_pow; t < b.ring; ++t)
    lhs.middleRows(n * (1 + t), n).setZero();
  Matrix tn = Matrix::Identity(n, n);
  for (int k = 0; k < n_shift; ++k) tn = (b.t * tn).eval();
  const Matrix rhs = b.j1 * tn;
  return detail::z_map_norm_upper(lhs - rhs, n, b.ring, b.p);
}

struct DilationReport {
  double j_norm_lb = 0.0;  // search lower bounds (the maps act into/out of Z)
  double q_norm_lb = 0.0;
  double u_deviation = 0.0;  // sup over |m| <= 2M, probes, of | ||U^m z||/||z|| - 1 |
  double max_residual = 0.0;
  double duality_defect = 0.0;
  bool verified = false;  // all residuals < tol and U isometric to 1e-12
};

inline DilationReport dilation_report(const DilationBundle& b,
                                      double tol = 1e-6,
                                      std::uint64_t seed = 23) {
  const Eigen::Index n = b.t.rows();
  DilationReport out;
  Rng rng(seed);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Vector e = Vector::Unit(n, j);
    out.j_norm_lb = std::max(out.j_norm_lb, z_norm(b.j1 * e, n, b.ring, b.p));
  }
  for (int trial = 0; trial < 32; ++trial) {
    const Vector x = rng.cgauss_vec(n);
    out.j_norm_lb = std::max(
        out.j_norm_lb, z_norm(b.j1 * x, n, b.ring, b.p) / vec_p_norm(x, b.p));
    const Vector z = rng.cgauss_vec(z_dim(b));
    const double zn = z_norm(z, n, b.ring, b.p);
    if (zn > 0.0)
      out.q_norm_lb = std::max(out.q_norm_lb, vec_p_norm(b.q * z, b.p) / zn);
    for (long m = -2L * b.m_pow; m <= 2L * b.m_pow; ++m) {
      const double un = z_norm(apply_U(z, n, b.ring, m), n, b.ring, b.p);
      if (zn > 0.0)
        out.u_deviation = std::max(out.u_deviation, std::abs(un / zn - 1.0));
    }
  }
  for (double r : b.residuals) out.max_residual = std::max(out.max_residual, r);
  out.duality_defect = verify_duality_identity(b);
  out.verified = out.max_residual < tol && out.u_deviation <= 1e-12;
  return out;
}

inline Json dilation_to_json(const DilationBundle& b) {
  Json j;
  j["p"] = b.p;
  j["K"] = b.k_cols;
  j["L"] = b.ring;
  j["M"] = b.m_pow;
  j["rho_interior"] = b.rho_interior;
  j["k_warning"] = b.k_warning;
  j["T"] = matrix_to_json(b.t);
  j["P_T"] = matrix_to_json(b.p_t);
  j["S"] = matrix_to_json(b.s);
  j["Theta"] = matrix_to_json(b.theta);
  j["J1"] = matrix_to_json(b.j1);
  j["J2"] = matrix_to_json(b.j2);
  j["Q"] = matrix_to_json(b.q);
  j["residuals"] = b.residuals;
  return j;
}

}  // namespace rittlab
