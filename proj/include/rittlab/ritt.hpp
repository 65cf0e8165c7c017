#pragma once

// Stolz-domain geometry and Ritt diagnostics: power constants, the resolvent
// constant on shrinking circles outside the unit disc, the smallest feasible
// Stolz aperture for a spectrum, and an R-Ritt lower estimate built from
// resolvent families sampled outside the domain.

#include "rittlab/core.hpp"
#include "rittlab/lpcore.hpp"
#include "rittlab/randseq.hpp"

namespace rittlab {

// Open Stolz domain B_gamma: interior of the convex hull of {1} and the disc
// D(0, sin gamma). A point lies inside iff it is in the open disc or in the
// open cone at 1 with half-angle gamma, no deeper than the tangency depth:
//   |z| < sin(gamma)   or   (z != 1, |Arg(1-z)| < gamma, |1-z| <= cos(gamma)).
struct StolzDomain {
  double gamma;

  explicit StolzDomain(double g) : gamma(g) {
    if (!(g > 0.0) || !(g < std::numbers::pi / 2))
      throw InputError("StolzDomain: gamma must lie in (0, pi/2)");
  }

  // Signed inclusion strength: positive inside, negative outside, with
  // magnitude a rough distance proxy. The disc and cone clauses are combined
  // by max, matching the union in the membership rule.
  double margin(Complex z) const {
    const double disc = std::sin(gamma) - std::abs(z);
    const Complex w = Complex(1.0, 0.0) - z;
    const double aw = std::abs(w);
    double cone = -std::numeric_limits<double>::infinity();
    if (aw > 0.0) {
      const double ang = gamma - std::abs(std::arg(w));
      const double depth = std::cos(gamma) - aw;
      cone = std::min(ang, depth);
    }
    return std::max(disc, cone);
  }

  bool contains(Complex z) const {
    if (std::abs(z) < std::sin(gamma)) return true;
    const Complex w = Complex(1.0, 0.0) - z;
    const double aw = std::abs(w);
    if (aw == 0.0) return false;
    return std::abs(std::arg(w)) < gamma && aw <= std::cos(gamma);
  }
};

inline bool stolz_contains(double gamma, Complex z) {
  return StolzDomain(gamma).contains(z);
}

struct PowerConstants {
  double m_power = 0.0;  // sup_{0<=n<=n_max} ||T^n||
  double m_diff = 0.0;   // sup_{1<=n<=n_max} n ||T^n - T^{n-1}||
  int argmax_power = 0;
  int argmax_diff = 0;
  bool stabilized = false;  // both sups attained before the last quarter
};

inline PowerConstants power_constants(const Matrix& t, int n_max, double p,
                                      const PnormBudget& budget = {4, 24},
                                      std::uint64_t seed = 1) {
  if (t.rows() != t.cols()) throw InputError("power_constants: square matrix required");
  if (n_max < 1) throw InputError("power_constants: n_max >= 1 required");
  PowerConstants out;
  const Eigen::Index n = t.rows();
  Matrix prev = Matrix::Identity(n, n);
  out.m_power = 1.0;  // ||T^0||
  out.argmax_power = 0;
  for (int k = 1; k <= n_max; ++k) {
    Matrix cur = t * prev;
    const double np = op_pnorm(cur, p, budget, seed + k).value;
    if (np > out.m_power) {
      out.m_power = np;
      out.argmax_power = k;
    }
    const double nd = k * op_pnorm(cur - prev, p, budget, seed + 7919 + k).value;
    if (nd > out.m_diff) {
      out.m_diff = nd;
      out.argmax_diff = k;
    }
    prev = std::move(cur);
  }
  const int cut = n_max - n_max / 4;
  out.stabilized = out.argmax_power <= cut && out.argmax_diff <= cut;
  return out;
}

struct RittConstant {
  double value = 0.0;     // sup |lambda-1| ||R(lambda,T)||_p over the grid
  Complex arg_lambda{};   // where the sup was attained
  bool growth_suspected = false;  // sup concentrated at the finest radius
};

// Grid: radii 1 + 2^{-j}, j = 0..j_max, times n_angles equispaced angles.
// Every grid point is strictly outside the closed unit disc, so the solves
// stay regular whenever the spectral-radius precondition holds.
inline RittConstant ritt_resolvent_constant(const Matrix& t, double p,
                                            int j_max = 20, int n_angles = 256,
                                            const PnormBudget& budget = {4, 24},
                                            std::uint64_t seed = 1) {
  if (t.rows() != t.cols())
    throw InputError("ritt_resolvent_constant: square matrix required");
  double rho = 0.0;
  for (const Complex& ev : spectrum(t)) rho = std::max(rho, std::abs(ev));
  if (rho > 1.0 + 1e-10)
    throw InputError("ritt_resolvent_constant: spectral radius " +
                     std::to_string(rho) + " exceeds 1");
  RittConstant out;
  double coarsest = 0.0;  // sup over the j = 0 circle, for the growth flag
  for (int j = 0; j <= j_max; ++j) {
    const double r = 1.0 + std::ldexp(1.0, -j);
    double sup_j = 0.0;
    Complex arg_j{};
    for (int a = 0; a < n_angles; ++a) {
      const double th = 2.0 * std::numbers::pi * a / n_angles;
      const Complex lambda = r * Complex(std::cos(th), std::sin(th));
      const Matrix res = resolvent(t, lambda);
      const double v =
          std::abs(lambda - 1.0) * op_pnorm(res, p, budget, seed + a).value;
      if (v > sup_j) {
        sup_j = v;
        arg_j = lambda;
      }
    }
    if (j == 0) coarsest = sup_j;
    if (sup_j > out.value) {
      out.value = sup_j;
      out.arg_lambda = arg_j;
    }
  }
  // A genuine Ritt operator has a finite sup; an eigenvalue on the circle away
  // from 1 makes the finest circles blow up relative to the coarsest.
  out.growth_suspected = out.value > 50.0 * std::max(coarsest, 1e-300);
  return out;
}

// Smallest aperture (within tol) whose Stolz domain contains every eigenvalue
// other than 1. Eigenvalues within eig_tol of 1 are treated as the kernel
// point 1 itself; any other eigenvalue on or outside the unit circle makes
// the request infeasible.
inline double optimal_gamma(const Matrix& t, double tol = 1e-6,
                            double eig_tol = 1e-9) {
  std::vector<Complex> evs;
  for (const Complex& ev : spectrum(t)) {
    if (std::abs(ev - 1.0) <= eig_tol) continue;
    if (std::abs(ev) >= 1.0)
      throw InputError(
          "optimal_gamma: eigenvalue (" + std::to_string(ev.real()) + "," +
          std::to_string(ev.imag()) + ") is not inside the open unit disc");
    evs.push_back(ev);
  }
  if (evs.empty()) return tol;  // only the kernel point: any aperture works
  auto feasible = [&](double g) {
    StolzDomain b(g);
    for (const Complex& ev : evs)
      if (!b.contains(ev)) return false;
    return true;
  };
  double lo = 1e-9, hi = std::numbers::pi / 2 - 1e-12;
  if (!feasible(hi))
    throw InputError("optimal_gamma: no feasible aperture below pi/2");
  if (feasible(lo)) return lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

// Default contour aperture: clear of the spectrum by a fixed margin but never
// needlessly thin, so quadrature panels stay away from the eigenvalues.
inline double contour_gamma(const Matrix& t, double margin = std::numbers::pi / 36) {
  const double g0 = optimal_gamma(t);
  double g = std::max(g0 + margin, std::numbers::pi / 4);
  const double cap = std::numbers::pi / 2 - 1e-3;
  if (g > cap) g = 0.5 * (g0 + std::numbers::pi / 2);
  return g;
}

struct RRittEstimate {
  double lower = 0.0;          // r_bound_lower of the resolvent family
  double uniform_sup = 0.0;    // best single-member norm, for comparison
  int family_size = 0;
};

// Samples lambda outside the closure of B_gamma (inflated boundary contour
// plus radial rays), forms {(lambda-1) R(lambda,T)}, and lower-bounds its
// R-bound by search.
inline RRittEstimate r_ritt_lower(const Matrix& t, double gamma, double p,
                                  int boundary_samples = 24, int trials = 48,
                                  std::uint64_t seed = 1) {
  if (!(optimal_gamma(t) < gamma))
    throw InputError("r_ritt_lower: gamma must exceed optimal_gamma(T)");
  const double inflate = std::min(gamma + std::numbers::pi / 90,
                                  std::numbers::pi / 2 - 1e-6);
  const double s = std::sin(inflate), c = std::cos(inflate);
  std::vector<Complex> lambdas;
  // Inflated boundary: the two tangent segments and the far arc.
  for (int i = 1; i <= boundary_samples; ++i) {
    const double f = static_cast<double>(i) / (boundary_samples + 1);
    const double tt = f * c;
    lambdas.push_back(Complex(1.0, 0.0) - tt * Complex(std::cos(inflate), -std::sin(inflate)));
    lambdas.push_back(Complex(1.0, 0.0) - tt * Complex(std::cos(inflate), std::sin(inflate)));
  }
  for (int i = 0; i < boundary_samples; ++i) {
    const double a0 = std::numbers::pi / 2 - inflate;
    const double th = a0 + (std::numbers::pi + 2 * inflate) * (i + 0.5) / boundary_samples;
    lambdas.push_back(s * Complex(std::cos(th), std::sin(th)));
  }
  // Radial rays outside the unit disc.
  for (double r : {1.05, 1.25, 1.5, 2.0, 4.0})
    for (int a = 0; a < 8; ++a) {
      const double th = 2.0 * std::numbers::pi * a / 8;
      lambdas.push_back(r * Complex(std::cos(th), std::sin(th)));
    }

  StolzDomain b(gamma);
  std::vector<Matrix> family;
  for (const Complex& lam : lambdas) {
    if (b.margin(lam) > -1e-9) continue;  // keep strictly outside the closure
    if (std::abs(lam - 1.0) < 1e-9) continue;
    family.push_back((lam - 1.0) * resolvent(t, lam));
  }
  if (family.empty())
    throw InputError("r_ritt_lower: no sample points outside the domain");
  RRittEstimate out;
  out.family_size = static_cast<int>(family.size());
  for (const auto& m : family)
    out.uniform_sup = std::max(out.uniform_sup, op_pnorm(m, p, {4, 32}, seed).value);
  out.lower = r_bound_lower(family, p, trials, seed).value;
  return out;
}

}  // namespace rittlab
