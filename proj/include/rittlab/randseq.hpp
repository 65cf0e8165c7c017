#pragma once

// Rademacher and Gaussian averages of finite vector families, the Khintchine
// ratio against the mixed norm, and search-based lower bounds for R-bounds of
// operator families.
//
// Exact Rademacher averages canonicalize the family first (per-vector sign
// normalization, then lexicographic order) and accumulate the 2^K pattern
// norms in sorted order, so the result is bit-for-bit invariant under
// permuting the family or flipping the sign of any member.

#include "rittlab/core.hpp"
#include "rittlab/lpcore.hpp"

#include <algorithm>

namespace rittlab {

struct AverageEstimate {
  double value = 0.0;
  double stderr_ = 0.0;  // 0 for exact enumeration
  bool exact = false;
  std::int64_t samples = 0;  // 2^K when exact, Monte Carlo count otherwise
};

namespace detail {

// Flip so the first nonzero entry has re > 0 (or re == 0, im > 0); the sign
// average is invariant, and the canonical representative is flip-stable.
inline Vector sign_canonical(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Complex z = v[i];
    if (z.real() != 0.0 || z.imag() != 0.0) {
      const bool flip = z.real() < 0.0 || (z.real() == 0.0 && z.imag() < 0.0);
      return flip ? Vector(-v) : v;
    }
  }
  return v;
}

inline bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

inline std::vector<Vector> canonical_family(const std::vector<Vector>& xs) {
  std::vector<Vector> c;
  c.reserve(xs.size());
  for (const auto& x : xs) c.push_back(sign_canonical(x));
  std::sort(c.begin(), c.end(), lex_less);
  return c;
}

}  // namespace detail

// E || sum_k eps_k x_k ||_p^2 over independent signs, reported as the square
// root. Exact by full enumeration for K <= exact_cap, Monte Carlo above.
inline AverageEstimate rad_norm(const std::vector<Vector>& xs, double p,
                                int exact_cap = 20, int mc_samples = 4096,
                                std::uint64_t seed = 1) {
  require_exponent(p);
  const std::size_t K = xs.size();
  if (K == 0) return {0.0, 0.0, true, 0};
  const Eigen::Index n = xs[0].size();
  for (const auto& x : xs) {
    if (x.size() != n) throw InputError("rad_norm: mismatched vector lengths");
    require_finite(x, "rad_norm");
  }

  if (K <= static_cast<std::size_t>(exact_cap)) {
    const std::vector<Vector> c = detail::canonical_family(xs);
    const std::size_t total = std::size_t(1) << K;
    std::vector<double> vals(total);
    Vector s(n);
    for (std::size_t pat = 0; pat < total; ++pat) {
      s.setZero();
      for (std::size_t k = 0; k < K; ++k) {
        if (pat & (std::size_t(1) << k))
          s -= c[k];
        else
          s += c[k];
      }
      const double v = vec_p_norm(s, p);
      vals[pat] = v * v;
    }
    std::sort(vals.begin(), vals.end());
    double acc = 0.0;
    for (double v : vals) acc += v;
    return {std::sqrt(acc / static_cast<double>(total)), 0.0, true,
            static_cast<std::int64_t>(total)};
  }

  Rng rng(seed);
  double mean = 0.0, m2 = 0.0;
  for (int s_i = 0; s_i < mc_samples; ++s_i) {
    Vector s = Vector::Zero(n);
    for (std::size_t k = 0; k < K; ++k) s += rng.sign() * xs[k];
    const double v = vec_p_norm(s, p);
    const double sq = v * v;
    const double delta = sq - mean;
    mean += delta / (s_i + 1);
    m2 += delta * (sq - mean);
  }
  const double var = mc_samples > 1 ? m2 / (mc_samples - 1) : 0.0;
  const double se_mean = std::sqrt(var / mc_samples);
  const double value = std::sqrt(std::max(0.0, mean));
  const double se = value > 0.0 ? se_mean / (2.0 * value) : std::sqrt(se_mean);
  return {value, se, false, mc_samples};
}

// Gaussian counterpart (complex standard Gaussians, E|g|^2 = 1); Monte Carlo
// only. A shared seed gives paired draws for inequality checks.
inline AverageEstimate gauss_norm(const std::vector<Vector>& xs, double p,
                                  int samples = 4096, std::uint64_t seed = 1) {
  require_exponent(p);
  const std::size_t K = xs.size();
  if (K == 0) return {0.0, 0.0, true, 0};
  const Eigen::Index n = xs[0].size();
  for (const auto& x : xs) {
    if (x.size() != n) throw InputError("gauss_norm: mismatched vector lengths");
    require_finite(x, "gauss_norm");
  }
  Rng rng(seed);
  double mean = 0.0, m2 = 0.0;
  for (int s_i = 0; s_i < samples; ++s_i) {
    Vector s = Vector::Zero(n);
    for (std::size_t k = 0; k < K; ++k) s += rng.cgauss() * xs[k];
    const double v = vec_p_norm(s, p);
    const double sq = v * v;
    const double delta = sq - mean;
    mean += delta / (s_i + 1);
    m2 += delta * (sq - mean);
  }
  const double var = samples > 1 ? m2 / (samples - 1) : 0.0;
  const double se_mean = std::sqrt(var / samples);
  const double value = std::sqrt(std::max(0.0, mean));
  const double se = value > 0.0 ? se_mean / (2.0 * value) : std::sqrt(se_mean);
  return {value, se, false, samples};
}

// Paired Gaussian estimates for two families over one shared draw stream;
// used by inequality checks so common noise cancels.
inline std::pair<AverageEstimate, AverageEstimate> gauss_norm_paired(
    const std::vector<Vector>& lhs, const std::vector<Vector>& rhs, double p,
    int samples, std::uint64_t seed) {
  const std::size_t kmax = std::max(lhs.size(), rhs.size());
  Rng rng(seed);
  double mean_l = 0.0, m2_l = 0.0, mean_r = 0.0, m2_r = 0.0;
  std::vector<Complex> g(kmax);
  for (int s_i = 0; s_i < samples; ++s_i) {
    for (std::size_t k = 0; k < kmax; ++k) g[k] = rng.cgauss();
    auto accumulate = [&](const std::vector<Vector>& xs, double& mean, double& m2) {
      if (xs.empty()) return;
      Vector s = Vector::Zero(xs[0].size());
      for (std::size_t k = 0; k < xs.size(); ++k) s += g[k] * xs[k];
      const double v = vec_p_norm(s, p);
      const double sq = v * v;
      const double delta = sq - mean;
      mean += delta / (s_i + 1);
      m2 += delta * (sq - mean);
    };
    accumulate(lhs, mean_l, m2_l);
    accumulate(rhs, mean_r, m2_r);
  }
  auto finish = [&](double mean, double m2) {
    const double var = samples > 1 ? m2 / (samples - 1) : 0.0;
    const double se_mean = std::sqrt(var / samples);
    const double value = std::sqrt(std::max(0.0, mean));
    AverageEstimate e;
    e.value = value;
    e.stderr_ = value > 0.0 ? se_mean / (2.0 * value) : std::sqrt(se_mean);
    e.exact = false;
    e.samples = samples;
    return e;
  };
  return {finish(mean_l, m2_l), finish(mean_r, m2_r)};
}

// Exact-Rademacher over mixed-norm ratio. Equal to 1 at p = 2 (Khintchine
// orthogonality); recorded, never asserted against a universal constant.
inline double khintchine_ratio(const std::vector<Vector>& xs, double p) {
  if (xs.empty()) throw InputError("khintchine_ratio: empty family");
  Matrix e(xs[0].size(), static_cast<Eigen::Index>(xs.size()));
  for (std::size_t k = 0; k < xs.size(); ++k) e.col(static_cast<Eigen::Index>(k)) = xs[k];
  const double denom = mixed_norm(e, p);
  if (denom == 0.0) throw InputError("khintchine_ratio: zero family");
  return rad_norm(xs, p).value / denom;
}

// Lower bound for the R-bound of a finite family by coordinate ascent over
// (operator assignment, vectors), seeded with singleton op_pnorm witnesses so
// the result never falls below the best single-operator norm found.
struct RBoundEstimate {
  double value = 0.0;
  int best_K = 0;
  std::vector<int> best_assignment;
};

inline RBoundEstimate r_bound_lower(const std::vector<Matrix>& family, double p,
                                    int trials = 64, std::uint64_t seed = 1,
                                    int k_max = 4) {
  if (family.empty()) throw InputError("r_bound_lower: empty family");
  const Eigen::Index n = family[0].rows();
  for (const auto& t : family)
    if (t.rows() != n || t.cols() != n)
      throw InputError("r_bound_lower: family must share one square size");
  RBoundEstimate best;

  auto ratio = [&](const std::vector<int>& idx, const std::vector<Vector>& xs) {
    std::vector<Vector> ys(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) ys[k] = family[idx[k]] * xs[k];
    const double denom = rad_norm(xs, p, /*exact_cap=*/12).value;
    if (denom == 0.0) return 0.0;
    return rad_norm(ys, p, /*exact_cap=*/12).value / denom;
  };

  auto consider = [&](const std::vector<int>& idx, const std::vector<Vector>& xs) {
    const double v = ratio(idx, xs);
    if (v > best.value) {
      best.value = v;
      best.best_K = static_cast<int>(idx.size());
      best.best_assignment = idx;
    }
  };

  // Singletons with op_pnorm witnesses.
  for (std::size_t i = 0; i < family.size(); ++i) {
    OpNormEstimate e = op_pnorm(family[i], p, {4, 32}, seed);
    if (e.witness.size() > 0)
      consider({static_cast<int>(i)}, {e.witness});
  }

  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::derived(seed, 0x5eed0000 + static_cast<std::uint64_t>(t));
    const int K =
        1 + static_cast<int>(rng.bits() % static_cast<std::uint64_t>(k_max));
    std::vector<int> idx(K);
    std::vector<Vector> xs(K);
    for (int k = 0; k < K; ++k) {
      idx[k] = static_cast<int>(rng.bits() % family.size());
      xs[k] = rng.cgauss_vec(n);
    }
    double cur = ratio(idx, xs);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < K; ++k) {  // reassign operator k greedily
        int best_i = idx[k];
        for (std::size_t i = 0; i < family.size(); ++i) {
          std::vector<int> trial_idx = idx;
          trial_idx[k] = static_cast<int>(i);
          const double v = ratio(trial_idx, xs);
          if (v > cur) {
            cur = v;
            best_i = static_cast<int>(i);
          }
        }
        idx[k] = best_i;
      }
      for (int k = 0; k < K; ++k) {  // perturb vector k
        for (double step : {0.5, 0.1}) {
          std::vector<Vector> trial_xs = xs;
          trial_xs[k] = xs[k] + step * rng.cgauss_vec(n);
          const double v = ratio(idx, trial_xs);
          if (v > cur) {
            cur = v;
            xs = std::move(trial_xs);
          }
        }
      }
    }
    consider(idx, xs);
  }
  return best;
}

// Convexity sanity check: a convex combination V of the family should have
// r_bound_lower({V}) <= hull_constant * upper_r_bound, where upper_r_bound is
// a caller-supplied upper estimate for the family's R-bound.
struct HullCheck {
  double combination_lower = 0.0;
  double hull_bound = 0.0;
  bool holds = false;
};

inline HullCheck convex_hull_rbound_check(const std::vector<Matrix>& family,
                                          const std::vector<double>& weights,
                                          double p, double upper_r_bound,
                                          double hull_constant = 2.0,
                                          int trials = 32,
                                          std::uint64_t seed = 1,
                                          double tol = 1e-9) {
  if (family.size() != weights.size())
    throw InputError("convex_hull_rbound_check: weights/family size mismatch");
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw InputError("convex_hull_rbound_check: weights must be >= 0");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw InputError("convex_hull_rbound_check: weights must sum to 1");
  Matrix v = Matrix::Zero(family[0].rows(), family[0].cols());
  for (std::size_t i = 0; i < family.size(); ++i) v += weights[i] * family[i];
  HullCheck out;
  out.combination_lower = r_bound_lower({v}, p, trials, seed).value;
  out.hull_bound = hull_constant * upper_r_bound;
  out.holds = out.combination_lower <= out.hull_bound + tol;
  return out;
}

}  // namespace rittlab
