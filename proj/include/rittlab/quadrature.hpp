#pragma once

// Gauss-Legendre rules (Newton on the Legendre recurrence, cached per order)
// plus composite and dyadically graded panel drivers. The graded driver packs
// panels geometrically toward the left endpoint, which tames the t^(a-1)
// endpoint behavior of the fractional-power integrands.

#include "rittlab/core.hpp"

#include <map>
#include <mutex>

namespace rittlab {

struct GLRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

inline const GLRule& gl_rule(int q) {
  static std::map<int, GLRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  if (q < 1 || q > 256) throw InputError("gl_rule: order out of range");
  GLRule r;
  r.x.resize(q);
  r.w.resize(q);
  for (int i = 0; i < q; ++i) {
    // Chebyshev-like initial guess, then Newton on P_q.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= q; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = q * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(q, std::move(r)).first->second;
}

// Integral of f over [a, b] with one q-point rule. T needs operator+= and
// scalar multiplication; pass the additive zero explicitly.
template <class T, class F>
T integrate_gl(F&& f, double a, double b, int q, T acc) {
  const GLRule& r = gl_rule(q);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < q; ++i) acc += (half * r.w[i]) * f(mid + half * r.x[i]);
  return acc;
}

template <class T, class F>
T integrate_panels(F&& f, double a, double b, int panels, int q, T acc) {
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k)
    acc = integrate_gl(f, a + k * h, a + (k + 1) * h, q, std::move(acc));
  return acc;
}

// Dyadic grading toward a: panels [a + L/2^{k+1}, a + L/2^k], plus a final
// stub [a, a + L/2^{levels}] integrated with the same rule. Suited to
// integrands that behave like (t - a)^(alpha-1) near a.
template <class T, class F>
T integrate_graded(F&& f, double a, double b, int levels, int q, T acc) {
  const double len = b - a;
  double hi = len;
  for (int k = 0; k < levels; ++k) {
    const double lo = len * std::ldexp(1.0, -(k + 1));
    acc = integrate_gl(f, a + lo, a + hi, q, std::move(acc));
    hi = lo;
  }
  return integrate_gl(f, a, a + hi, q, std::move(acc));
}

}  // namespace rittlab
