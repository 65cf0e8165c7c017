#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rittlab;
using Catch::Approx;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Matrix diag2(Complex a, Complex b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("contour power of a diagonal matrix", "[funcalc]") {
  const Matrix t = diag2(0.5, 0.9);
  const Matrix s = contour_fracpow(t, 0.5);
  CHECK(std::abs(s(0, 0) - std::sqrt(0.5)) < 1e-7);
  CHECK(std::abs(s(1, 1) - std::sqrt(0.1)) < 1e-7);
  CHECK(std::abs(s(0, 1)) < 1e-9);
  CHECK(std::abs(s(1, 0)) < 1e-9);

  // gamma <= 0 in the spec means the default aperture; spelling it out
  // explicitly must give the identical contour.
  ContourSpec spec;
  spec.gamma = contour_gamma(t);
  CHECK(max_abs_diff(contour_fracpow(t, 0.7), contour_fracpow(t, 0.7, spec)) == 0.0);

  CHECK_THROWS_AS(contour_fracpow(diag2(1.5, 0.2), 0.5), InputError);
  CHECK_THROWS_AS(contour_fracpow(t, 0.0), InputError);
  CHECK_THROWS_AS(contour_fracpow(t, -1.0), InputError);
}

TEST_CASE("three routes agree on random diagonalizable input", "[funcalc]") {
  for (std::uint64_t seed : {201, 202, 203}) {
    const Matrix t = testutil::random_diagonalizable(4, 0.9, seed);
    for (double alpha : {0.5, 1.3}) {
      const Matrix a = contour_fracpow(t, alpha);
      const SeriesResult s = frac_power_series(t, alpha);
      REQUIRE(s.converged);
      const Matrix c = frac_power_eig(t, alpha);
      INFO("seed=" << seed << " alpha=" << alpha);
      CHECK(max_abs_diff(a, s.value) < 1e-8);
      CHECK(max_abs_diff(a, c) < 1e-8);
      CHECK(max_abs_diff(s.value, c) < 1e-8);
    }
  }
}

TEST_CASE("binomial series terminates exactly at integer exponents", "[funcalc]") {
  Rng rng(77);
  const Matrix t = 0.6 * rng.cgauss_mat(3, 3);
  const Matrix id = Matrix::Identity(3, 3);

  const SeriesResult s1 = frac_power_series(t, 1.0);
  CHECK(s1.converged);
  CHECK(s1.terms <= 3);
  CHECK(max_abs_diff(s1.value, id - t) == 0.0);

  const SeriesResult s2 = frac_power_series(t, 2.0);
  CHECK(s2.converged);
  CHECK(s2.terms <= 4);
  CHECK(max_abs_diff(s2.value, id - 2.0 * t + t * t) < 1e-14);
}

TEST_CASE("defective input falls back to the series route", "[funcalc]") {
  Matrix jordan = Matrix::Zero(2, 2);
  jordan(0, 0) = 0.5;
  jordan(0, 1) = 1.0;
  jordan(1, 1) = 0.5;
  CHECK_THROWS_AS(frac_power_eig(jordan, 0.5), ConvergenceError);

  const Matrix s = frac_power(jordan, 0.5);
  const SeriesResult ref = frac_power_series(jordan, 0.5);
  REQUIRE(ref.converged);
  CHECK(max_abs_diff(s, ref.value) < 1e-12);
  CHECK(max_abs_diff(s * s, Matrix::Identity(2, 2) - jordan) < 1e-9);
}

TEST_CASE("kernel eigenvalue is handled exactly", "[funcalc]") {
  const Matrix t = diag2(1.0, 0.5);
  const Matrix s = frac_power(t, 0.5);
  CHECK(std::abs(s(0, 0)) == 0.0);
  CHECK(std::abs(s(1, 1) - std::sqrt(0.5)) < 1e-14);

  const Matrix sc = contour_fracpow(t, 0.5);
  CHECK(std::abs(sc(0, 0)) < 1e-7);
  CHECK(std::abs(sc(1, 1) - std::sqrt(0.5)) < 1e-7);
}

TEST_CASE("polynomial calculus matches explicit powers", "[funcalc]") {
  Rng rng(83);
  const Matrix t = rng.cgauss_mat(3, 3);
  const std::vector<Complex> coeffs = {Complex(2.0, 0.0), Complex(0.0, 0.0),
                                       Complex(0.0, 1.0), Complex(-0.5, 0.25)};
  const Matrix direct = 2.0 * Matrix::Identity(3, 3) +
                        Complex(0.0, 1.0) * (t * t) +
                        Complex(-0.5, 0.25) * (t * t * t);
  CHECK(max_abs_diff(poly_apply(t, coeffs), direct) < 1e-12 * direct.cwiseAbs().maxCoeff());
  CHECK_THROWS_AS(poly_apply(Matrix::Zero(2, 3), coeffs), InputError);
}

TEST_CASE("bounded-family scan matches the scalar maximum", "[funcalc]") {
  Matrix t = Matrix::Zero(3, 3);
  t(0, 0) = 0.2;
  t(1, 1) = 0.5;
  t(2, 2) = 0.9;
  std::vector<double> grid;
  for (int k = 1; k <= 16; ++k) grid.push_back(k / 16.0);
  const int n_max = 512;
  const double p = 4.0;

  for (double alpha : {0.5, 1.0, 2.0}) {
    double best = 0.0;
    int best_n = 0;
    double best_r = 0.0;
    for (double r : grid) {
      for (int n = 1; n <= n_max; ++n) {
        double v = 0.0;
        for (double d : {0.2, 0.5, 0.9}) {
          const double rd = r * d;
          v = std::max(v, std::pow(static_cast<double>(n), alpha) *
                              std::pow(rd, n - 1) *
                              std::pow(std::abs(1.0 - rd), alpha));
        }
        if (v > best) {
          best = v;
          best_n = n;
          best_r = r;
        }
      }
    }
    const VitseScan scan = vitse_scan(t, alpha, n_max, grid, p);
    INFO("alpha=" << alpha);
    CHECK(scan.sup == Approx(best).epsilon(1e-9));
    CHECK(scan.argmax_n == best_n);
    CHECK(scan.argmax_r == Approx(best_r));
    CHECK(scan.stabilized);
  }

  CHECK_THROWS_AS(vitse_scan(t, 1.0, 0, grid, p), InputError);
  CHECK_THROWS_AS(vitse_scan(t, 1.0, 4, {}, p), InputError);
  CHECK_THROWS_AS(vitse_scan(t, 1.0, 4, {1.5}, p), InputError);
}

TEST_CASE("piecewise integral bounds stay under their caps", "[funcalc]") {
  const std::vector<int> ns = {1, 4, 32, 256};
  for (double gamma : {std::numbers::pi / 8, 1.2}) {
    for (double alpha : {0.5, 1.0, 2.0}) {
      const Prop28Bounds b = prop28_integral_bounds(gamma, alpha, ns);
      INFO("gamma=" << gamma << " alpha=" << alpha);
      CHECK(b.within_caps);
      CHECK(b.cap_edge == Approx(std::pow(2.0, alpha) *
                                 std::pow(std::cos(gamma), -alpha) *
                                 std::tgamma(alpha)));
      REQUIRE(b.rows.size() == ns.size());
      double sup = 0.0;
      for (std::size_t i = 0; i < ns.size(); ++i) {
        CHECK(b.rows[i].n == ns[i]);
        CHECK(b.rows[i].i_total ==
              Approx(b.rows[i].i_arc + 2.0 * b.rows[i].i_edge));
        sup = std::max(sup, b.rows[i].i_total);
      }
      CHECK(b.sup_total == Approx(sup));
    }
  }

  // At alpha = 1 the arc integrand is the constant sin(gamma).
  const double gamma = 0.9;
  const Prop28Bounds flat = prop28_integral_bounds(gamma, 1.0, {1});
  CHECK(flat.arc_base ==
        Approx(std::sin(gamma) * (std::numbers::pi + 2.0 * gamma)).epsilon(1e-10));

  CHECK_THROWS_AS(prop28_integral_bounds(0.0, 1.0, {1}), InputError);
  CHECK_THROWS_AS(prop28_integral_bounds(0.4, 0.0, {1}), InputError);
  CHECK_THROWS_AS(prop28_integral_bounds(0.4, 1.0, {0}), InputError);
}
