#pragma once

// Shared types and small numeric utilities: complex dense matrices as the
// universal operator representation, p-norms, the mixed p(l2) norm used by
// square functions, deterministic RNG streams, and input validation.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rittlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Bad arguments, malformed files, out-of-domain operators. CLI exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iteration hit its budget without meeting its tolerance. CLI exit code 3.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resolvent or inverse requested at (numerically) an eigenvalue.
struct SingularityError : InputError {
  using InputError::InputError;
};

inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(const Matrix& a, const char* what) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!finite(a(i, j)))
        throw InputError(std::string(what) + ": non-finite entry at (" +
                         std::to_string(i) + "," + std::to_string(j) + ")");
}

inline void require_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw InputError("exponent p must satisfy 1 <= p < inf, got " +
                     std::to_string(p));
}

inline double holder_conjugate(double p) {
  require_exponent(p);
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return p / (p - 1.0);
}

// l^p norm of a complex vector, scaled to avoid overflow for huge entries.
inline double vec_p_norm(const Vector& v, double p) {
  require_exponent(p);
  require_finite(v, "vec_p_norm");
  if (v.size() == 0) return 0.0;
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    acc += std::pow(std::abs(v[i]) / scale, p);
  return scale * std::pow(acc, 1.0 / p);
}

// Mixed norm on l^p_n(l^2_K): rows index the n points, columns the sequence.
// Each row is contracted in l^2, then the row norms in l^p.
inline double mixed_norm(const Matrix& e, double p) {
  require_exponent(p);
  require_finite(e, "mixed_norm");
  if (e.size() == 0) return 0.0;
  Vector rows(e.rows());
  for (Eigen::Index i = 0; i < e.rows(); ++i) rows[i] = e.row(i).norm();
  return vec_p_norm(rows, p);
}

// ---------------------------------------------------------------------------
// Deterministic RNG. Gaussians come from an explicit Box-Muller on the raw
// mt19937_64 stream so results do not depend on the standard library's
// distribution internals. Streams for subtasks are derived by splitmix so a
// master seed plus a task index always lands on the same draws, regardless of
// how work is scheduled.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed ^ 0x1234abcd5678ef01ULL)) {}

  static Rng derived(std::uint64_t master, std::uint64_t stream) {
    return Rng(splitmix64(master) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
  }

  // Uniform in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Standard complex Gaussian normalized so E|g|^2 = 1.
  Complex cgauss() { return Complex(normal(), normal()) / std::sqrt(2.0); }

  Vector cgauss_vec(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cgauss();
    return v;
  }

  Matrix cgauss_mat(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = cgauss();
    return m;
  }

  // Rademacher sign.
  double sign() { return (eng_() & 1u) ? 1.0 : -1.0; }

  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// ---------------------------------------------------------------------------
// Deterministic parallel map: results land in preallocated slots indexed by
// task, so the output is identical for any thread count, including 1.

template <class R, class F>
std::vector<R> parallel_map(std::size_t count, int threads, F&& fn) {
  std::vector<R> out(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  const std::size_t nt = std::min<std::size_t>(threads, count);
  std::vector<std::future<void>> futs;
  futs.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    futs.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < count; i += nt) out[i] = fn(i);
    }));
  }
  for (auto& f : futs) f.get();
  return out;
}

}  // namespace rittlab
