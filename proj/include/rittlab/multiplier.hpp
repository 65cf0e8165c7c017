#pragma once

// Shift multiplier norms on the cyclic groups (lower bounds for the lp(Z)
// multiplier norm via periodic transference), the dyadic arc system with its
// Marcinkiewicz-type variation functional, the two-disc region D_theta with
// the geometric inclusions it satisfies, and observed polynomial-boundedness
// ratios for concrete operators.

#include "rittlab/core.hpp"
#include "rittlab/funcalc.hpp"
#include "rittlab/lpcore.hpp"
#include "rittlab/quadrature.hpp"

#include <functional>
#include <string>

namespace rittlab {

struct Poly {
  std::vector<Complex> d;  // coefficients d_k, k >= 0

  int degree() const {
    for (int k = static_cast<int>(d.size()) - 1; k >= 0; --k)
      if (d[static_cast<std::size_t>(k)] != Complex(0.0)) return k;
    return -1;
  }
  Complex eval(Complex z) const {
    Complex acc = 0.0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) acc = acc * z + *it;
    return acc;
  }
  Poly derivative() const {
    Poly out;
    for (std::size_t k = 1; k < d.size(); ++k)
      out.d.push_back(static_cast<double>(k) * d[k]);
    return out;
  }
};

// C[i][j] = d_{(i-j) mod n}: convolution by (d_k) on l^p(Z_n).
inline Matrix circulant(const Poly& phi, int n) {
  if (n < 1) throw InputError("circulant: n >= 1 required");
  Matrix c = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < phi.d.size(); ++k)
    for (int j = 0; j < n; ++j)
      c((j + static_cast<int>(k)) % n, j) += phi.d[k];
  return c;
}

// l^p(Z_N) norm of the circulant: exact at p = 2 (DFT) and p = 1 (column
// sums); otherwise a search lower bound, evaluated jointly at p and its
// conjugate (circulant norms are p <-> p' symmetric, and the canonical
// {min, max} evaluation order makes the two calls return identical bits),
// and chained down the halvings of N so doubling N never decreases the value.
inline double shift_pnorm(const Poly& phi, double p, int n,
                          const PnormBudget& budget = {},
                          std::uint64_t seed = 0x51) {
  require_exponent(p);
  const int deg = phi.degree();
  if (deg < 0) return 0.0;
  if (n <= deg)
    throw InputError("shift_pnorm: N must exceed the polynomial degree");
  for (const Complex& c : phi.d)
    if (!finite(c)) throw InputError("shift_pnorm: non-finite coefficient");
  if (std::abs(p - 2.0) <= 1e-12) {
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * std::numbers::pi * j / n;
      best = std::max(best, std::abs(phi.eval(Complex(std::cos(th), std::sin(th)))));
    }
    return best;
  }
  if (p == 1.0) {
    double sum = 0.0;
    for (const Complex& c : phi.d) sum += std::abs(c);
    return sum;
  }
  const double lo = std::min(p, holder_conjugate(p));
  const double hi = holder_conjugate(lo);
  const Matrix c = circulant(phi, n);
  double v = std::max(op_pnorm(c, lo, budget, seed).value,
                      op_pnorm(c, hi, budget, seed).value);
  if (n % 2 == 0 && n / 2 > deg)
    v = std::max(v, shift_pnorm(phi, p, n / 2, budget, seed));
  return v;
}

struct DyadicArc {
  int j = 0;
  double lo = 0.0;  // I_j = [lo, hi)
  double hi = 0.0;
};

// I_j = [pi - pi/2^{j+1}, pi - pi/2^{j+2}) for j >= 0 and [2^{j-1} pi,
// 2^j pi) for j < 0. Endpoints via ldexp so consecutive arcs chain exactly.
inline std::vector<DyadicArc> dyadic_arcs(int j_min, int j_max) {
  if (j_min > j_max) throw InputError("dyadic_arcs: j_min <= j_max required");
  std::vector<DyadicArc> out;
  for (int j = j_min; j <= j_max; ++j) {
    DyadicArc a;
    a.j = j;
    if (j < 0) {
      a.lo = std::ldexp(std::numbers::pi, j - 1);
      a.hi = std::ldexp(std::numbers::pi, j);
    } else {
      a.lo = std::numbers::pi - std::ldexp(std::numbers::pi, -(j + 1));
      a.hi = std::numbers::pi - std::ldexp(std::numbers::pi, -(j + 2));
    }
    out.push_back(a);
  }
  return out;
}

struct MarcinkiewiczReport {
  double sup_norm = 0.0;
  double sup_variation = 0.0;
  double value = 0.0;  // sup_norm + sup_variation
  std::vector<std::pair<int, double>> arc_variation;
};

// ||phi||_inf + sup_j var(phi, Delta_j), Delta_j the symmetric double arc
// over I_j. Polynomials use the analytic derivative: var = ∫ |phi'(e^{it})| dt
// over I_j and -I_j.
inline MarcinkiewiczReport marcinkiewicz_functional(const Poly& phi,
                                                    int j_min = -24,
                                                    int j_max = 24,
                                                    int sup_grid = 1 << 14) {
  MarcinkiewiczReport out;
  for (int k = 0; k < sup_grid; ++k) {
    const double th = 2.0 * std::numbers::pi * k / sup_grid;
    out.sup_norm = std::max(
        out.sup_norm, std::abs(phi.eval(Complex(std::cos(th), std::sin(th)))));
  }
  const Poly dphi = phi.derivative();
  auto speed = [&](double t) {
    return std::abs(dphi.eval(Complex(std::cos(t), std::sin(t))));
  };
  for (const DyadicArc& a : dyadic_arcs(j_min, j_max)) {
    const double var = integrate_panels(speed, a.lo, a.hi, 8, 10, 0.0) +
                       integrate_panels(speed, -a.hi, -a.lo, 8, 10, 0.0);
    out.arc_variation.emplace_back(a.j, var);
    out.sup_variation = std::max(out.sup_variation, var);
  }
  out.value = out.sup_norm + out.sup_variation;
  return out;
}

// Sampled-symbol variant: f(t) = phi(e^{it}); variation by dense chaining.
inline MarcinkiewiczReport marcinkiewicz_sampled(
    const std::function<Complex(double)>& f, int j_min = -24, int j_max = 24,
    int samples_per_arc = 4096) {
  MarcinkiewiczReport out;
  const int sup_grid = 1 << 14;
  for (int k = 0; k < sup_grid; ++k)
    out.sup_norm =
        std::max(out.sup_norm, std::abs(f(2.0 * std::numbers::pi * k / sup_grid)));
  for (const DyadicArc& a : dyadic_arcs(j_min, j_max)) {
    double var = 0.0;
    for (int side = 0; side < 2; ++side) {
      const double sgn = side == 0 ? 1.0 : -1.0;
      Complex prev = f(sgn * a.lo);
      for (int k = 1; k <= samples_per_arc; ++k) {
        const Complex cur =
            f(sgn * (a.lo + (a.hi - a.lo) * k / samples_per_arc));
        var += std::abs(cur - prev);
        prev = cur;
      }
    }
    out.arc_variation.emplace_back(a.j, var);
    out.sup_variation = std::max(out.sup_variation, var);
  }
  out.value = out.sup_norm + out.sup_variation;
  return out;
}

// D_theta = D(-i cot(theta), 1/sin(theta)) ∪ D(i cot(theta), 1/sin(theta)),
// theta in (pi/2, pi).
inline bool dtheta_contains(double theta, Complex z) {
  if (!(theta > std::numbers::pi / 2) || !(theta < std::numbers::pi))
    throw InputError("dtheta_contains: theta in (pi/2, pi) required");
  const double radius = 1.0 / std::sin(theta);
  const Complex center(0.0, 1.0 / std::tan(theta));
  return std::abs(z - center) < radius || std::abs(z + center) < radius;
}

// r(t) = 1/sin(theta) - |e^{it} + i cot(theta)|, the largest disc radius at
// e^{it}; written as -x / (sin(theta)(1 + sqrt(1+x))) with
// x = 2 sin(t) sin(theta) cos(theta) to avoid the cancellation at t -> 0.
inline double dtheta_radius(double theta, double t) {
  const double x = 2.0 * std::sin(t) * std::sin(theta) * std::cos(theta);
  return -x / (std::sin(theta) * (1.0 + std::sqrt(1.0 + x)));
}

struct DthetaReport {
  double theta = 0.0;
  double slope = 0.0;  // leading coefficient of r(t), equal to -cos(theta)
  bool expansion_ok = false;   // r(t) > -cos(theta) t down to t = 1e-6
  double expansion_margin = 0.0;  // min of r(t) / (-cos(theta) t) - 1
  bool inclusion_ok = false;   // D(e^{it}, -cos(theta) pi/2^{|j|+1}) ⊂ D_theta
  bool sector_ok = false;      // 1 - D_theta inside |Arg| <= theta
  double worst_sector_arg = 0.0;
};

inline DthetaReport dtheta_geometry(double theta) {
  if (!(theta > std::numbers::pi / 2) || !(theta < std::numbers::pi))
    throw InputError("dtheta_geometry: theta in (pi/2, pi) required");
  DthetaReport out;
  out.theta = theta;
  out.slope = -std::cos(theta);

  // (a) first-order expansion dominates from below on a log grid in t.
  out.expansion_ok = true;
  out.expansion_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 60; ++k) {
    const double t = std::pow(10.0, -6.0 + 6.0 * k / 60.0);  // up to t = 1
    const double lead = -std::cos(theta) * t;
    const double margin = dtheta_radius(theta, t) / lead - 1.0;
    out.expansion_margin = std::min(out.expansion_margin, margin);
    if (!(margin > 0.0)) out.expansion_ok = false;
  }

  // (b) discs of radius -cos(theta) pi / 2^{|j|+1} centered on the arc over
  // I_j stay inside D_theta, for the small-t dyadic blocks.
  out.inclusion_ok = true;
  const double radius = 1.0 / std::sin(theta);
  const Complex center(0.0, 1.0 / std::tan(theta));
  for (int j = -3; j >= -12; --j) {
    const double rho =
        -std::cos(theta) * std::ldexp(std::numbers::pi, j - 1);  // pi/2^{|j|+1}
    const double lo = std::ldexp(std::numbers::pi, j - 1);
    const double hi = std::ldexp(std::numbers::pi, j);
    for (int s = 0; s <= 4; ++s) {
      const double t = lo + (hi - lo) * s / 4.0;
      for (int a = 0; a < 64; ++a) {
        const double psi = 2.0 * std::numbers::pi * a / 64;
        const Complex z = Complex(std::cos(t), std::sin(t)) +
                          rho * Complex(std::cos(psi), std::sin(psi));
        const bool inside = std::abs(z - center) < radius - 1e-12 ||
                            std::abs(z + center) < radius - 1e-12;
        if (!inside) out.inclusion_ok = false;
      }
    }
  }

  // (c) 1 - D_theta lies in the closed sector |Arg| <= theta: sample the
  // boundary circles, discard points interior to the other disc.
  out.sector_ok = true;
  const int m = 10000;
  for (int half = 0; half < 2; ++half) {
    const Complex c0 = half == 0 ? center : -center;
    const Complex c1 = half == 0 ? -center : center;
    for (int k = 0; k < m / 2; ++k) {
      const double psi = 2.0 * std::numbers::pi * k / (m / 2);
      const Complex z = c0 + radius * Complex(std::cos(psi), std::sin(psi));
      if (std::abs(z - c1) < radius - 1e-12) continue;  // interior of the union
      const Complex w = Complex(1.0, 0.0) - z;
      if (std::abs(w) < 1e-13) continue;
      const double arg = std::abs(std::arg(w));
      out.worst_sector_arg = std::max(out.worst_sector_arg, arg);
      if (arg > theta + 1e-9) out.sector_ok = false;
    }
  }
  return out;
}

struct PolyboundSample {
  std::string kind;  // "power", "fejer", "random"
  int index = 0;
  double op_norm = 0.0;     // op_pnorm(phi(T), p) lower bound
  double shift_norm = 0.0;  // shift_pnorm(phi, p, N) lower bound
  double ratio = 0.0;
};

struct PolyboundReport {
  double max_ratio = 0.0;
  std::vector<PolyboundSample> table;
  bool lower_bound_based = true;  // both sides are search lower bounds
};

// max over sampled polynomials of op_pnorm(phi(T)) / shift_pnorm(phi): an
// indicator for the best constant in ||phi(T)|| <= C ||phi||_p, nothing more.
inline PolyboundReport polybound_estimate(const Matrix& t, double p,
                                          int n_circ, int trials,
                                          std::uint64_t seed = 17,
                                          const PnormBudget& budget = {}) {
  if (t.rows() != t.cols()) throw InputError("polybound_estimate: square matrix");
  if (n_circ < 2) throw InputError("polybound_estimate: N >= 2 required");
  if (trials < 0) throw InputError("polybound_estimate: trials >= 0");
  PolyboundReport out;
  const int degree_cap = std::min(8, n_circ - 1);
  auto push = [&](const std::string& kind, int index, const Poly& phi) {
    const double denom = shift_pnorm(phi, p, n_circ, budget);
    if (denom < 1e-14) return;
    PolyboundSample s;
    s.kind = kind;
    s.index = index;
    s.shift_norm = denom;
    s.op_norm =
        op_pnorm(poly_apply(t, phi.d), p, budget,
                 seed ^ (0x9E3779B97F4A7C15ull * (index + 1)))
            .value;
    s.ratio = s.op_norm / denom;
    out.max_ratio = std::max(out.max_ratio, s.ratio);
    out.table.push_back(std::move(s));
  };
  for (int k = 0; k <= degree_cap; ++k) {
    Poly phi;
    phi.d.assign(static_cast<std::size_t>(k) + 1, Complex(0.0));
    phi.d.back() = 1.0;
    push("power", k, phi);
  }
  for (int m = 1; m <= degree_cap; ++m) {
    Poly phi;  // Fejer-type kernel: d_k = 1 - k/(m+1), k = 0..m
    for (int k = 0; k <= m; ++k)
      phi.d.push_back(1.0 - static_cast<double>(k) / (m + 1));
    push("fejer", m, phi);
  }
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    const int deg = static_cast<int>(rng.bits() % (degree_cap + 1));
    Poly phi;
    for (int k = 0; k <= deg; ++k) phi.d.push_back(rng.cgauss());
    push("random", i, phi);
  }
  return out;
}

}  // namespace rittlab
