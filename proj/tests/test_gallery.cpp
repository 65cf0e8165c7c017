#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rittlab;
using Catch::Approx;

namespace {

long long int_max_abs(const IntMatrix& a) {
  return a.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("anticommutation relations hold in integer arithmetic", "[gallery]") {
  const int m = 4;
  const long long dim = 1LL << m;
  std::vector<IntMatrix> c;
  for (int k = 1; k <= m; ++k) c.push_back(car_padded(m, k));
  const IntMatrix id = IntMatrix::Identity(dim, dim);
  for (int k = 0; k < m; ++k) {
    CHECK(int_max_abs(c[k] * c[k]) == 0);
    for (int l = 0; l < m; ++l) {
      const IntMatrix anti = c[k] * c[l].transpose() + c[l].transpose() * c[k];
      CHECK(int_max_abs(anti - (k == l ? id : IntMatrix(IntMatrix::Zero(dim, dim)))) == 0);
      if (k != l)
        CHECK(int_max_abs(c[k] * c[l] + c[l] * c[k]) == 0);
    }
  }
  CHECK_THROWS_AS(car_matrix(0), InputError);
  CHECK_THROWS_AS(car_padded(3, 4), InputError);
}

TEST_CASE("linear combinations have euclidean norm", "[gallery]") {
  Rng rng(801);
  for (int m = 1; m <= 5; ++m) {
    for (int trial = 0; trial < 4; ++trial) {
      const Vector alpha = rng.cgauss_vec(m);
      const CarIdentityReport rep = car_identity(m, alpha);
      INFO("m=" << m << " trial=" << trial);
      CHECK(rep.expected == Approx(alpha.norm()));
      CHECK(rep.error < 1e-10);
    }
  }
  CHECK_THROWS_AS(car_identity(7, Vector::Zero(7)), InputError);
  CHECK_THROWS_AS(car_identity(2, Vector::Zero(3)), InputError);
}

TEST_CASE("generator columns carry unit l1 mass", "[gallery]") {
  for (int m : {1, 3, 6}) {
    const CarL1Report rep = car_l1_norms(m);
    CHECK(rep.all_unit);
    REQUIRE(rep.column_sums.size() == static_cast<std::size_t>(m));
    for (long long s : rep.column_sums) CHECK(s == 1);
    CHECK(rep.tensor_identity_err < 1e-12);
  }
}

TEST_CASE("lacunary symbol norms", "[gallery]") {
  for (int m = 1; m <= 3; ++m) {
    const double p = 4.0;
    const int n_circ = 4 * (1 << m);
    const PhiNormsReport rep = phi_m_norms(m, p, n_circ);
    INFO("m=" << m);
    CHECK(rep.norm2_expected == Approx(std::sqrt(double(m))));
    CHECK(rep.norm2 == Approx(std::sqrt(double(m))).epsilon(1e-8));
    CHECK(rep.norm1_bound == m);
    CHECK(rep.normp_cap == Approx(std::pow(double(m), 0.75)));
    CHECK(rep.within_cap);
    // The search attains the interpolation cap on these sections.
    CHECK(std::abs(rep.normp_estimate - rep.normp_cap) < 1e-6);
  }
  CHECK_THROWS_AS(phi_m_norms(5, 4.0, 64), InputError);
  CHECK_THROWS_AS(phi_m_norms(2, 4.0, 4), InputError);
  CHECK_THROWS_AS(phi_m_norms(2, 1.0, 16), InputError);
}

TEST_CASE("diagonal pairing lower bound", "[gallery]") {
  for (int m : {2, 4, 6}) {
    for (double p : {4.0 / 3.0, 4.0}) {
      const WLowerBoundReport rep = w_lower_bound(m, p);
      INFO("m=" << m << " p=" << p);
      CHECK(rep.pairing == static_cast<long long>(m) * (1LL << (m - 1)));
      CHECK(rep.norm_u == Approx(std::pow(2.0, m / p)).epsilon(1e-12));
      CHECK(rep.norm_u_dual ==
            Approx(std::pow(2.0, m / holder_conjugate(p))).epsilon(1e-12));
      CHECK(rep.analytic_lb == Approx(m / 2.0).epsilon(1e-9));
      CHECK(rep.search_lb >= rep.analytic_lb - 1e-6);
    }
  }
  CHECK_THROWS_AS(w_lower_bound(0, 2.0), InputError);
  CHECK_THROWS_AS(w_lower_bound(7, 2.0), InputError);
  CHECK_THROWS_AS(w_lower_bound(3, 1.0), InputError);
}

TEST_CASE("variation norm of the eigenvalue sequence", "[gallery]") {
  V1Sequence s;
  s.c = foguel_sequence(6);
  CHECK(v1_norm(s) == 0.96875);
  CHECK(v1_norm(V1Sequence{}) == 0.0);
  const std::vector<Complex> c = foguel_sequence(4);
  CHECK(c[0] == Complex(0.0));
  CHECK(c[3] == Complex(0.875));
}

TEST_CASE("triangular basis and its inverse", "[gallery]") {
  const int n = 8;
  const double s = 0.9;
  const Matrix b = conditional_basis(n, s);
  Matrix inv = Matrix::Identity(n, n);
  for (int i = 0; i + 1 < n; ++i) inv(i, i + 1) = s;
  CHECK((b * inv - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(conditional_basis(0), InputError);
  CHECK_THROWS_AS(conditional_basis(4, 2.0), InputError);
  CHECK_THROWS_AS(conditional_basis(4, -0.1), InputError);
}

TEST_CASE("model operator diagnostics", "[gallery]") {
  const FoguelReport plain = foguel_operator(8, Matrix::Identity(8, 8), 4.0, 64);
  CHECK(plain.basis_condition == Approx(1.0));
  CHECK(!plain.condition_warning);
  CHECK(plain.gamma_opt <= 1e-8);
  CHECK(plain.powers.m_power == Approx(1.0).epsilon(1e-10));
  CHECK(!plain.ritt.growth_suspected);

  const Matrix basis = conditional_basis(16, 0.9);
  const FoguelReport rep = foguel_operator(16, basis, 4.0, 64);
  CHECK(rep.basis_condition > 1.0);
  CHECK(!rep.condition_warning);
  const std::vector<Complex> evs = spectrum(rep.t);
  std::vector<Complex> expect = foguel_sequence(16);
  std::sort(expect.begin(), expect.end(), [](Complex a, Complex b) {
    return a.real() < b.real();
  });
  REQUIRE(evs.size() == expect.size());
  for (std::size_t i = 0; i < evs.size(); ++i)
    CHECK(std::abs(evs[i] - expect[i]) < 1e-8);
  CHECK(rep.powers.m_power >= 1.0);
  // Power-bounded through the basis: ||B||_4 ||B^-1||_4 is a crude ceiling.
  CHECK(rep.powers.m_power < 20.0);
  CHECK(!rep.ritt.growth_suspected);

  Matrix sick = Matrix::Identity(2, 2);
  sick(1, 1) = 1e-11;
  CHECK(foguel_operator(2, sick, 2.0, 16).condition_warning);
  CHECK_THROWS_AS(foguel_operator(2, Matrix::Zero(2, 2), 2.0), InputError);
  CHECK_THROWS_AS(foguel_operator(3, Matrix::Identity(2, 2), 2.0), InputError);
}

TEST_CASE("resolvent multiplier closed forms", "[gallery]") {
  const IThetaReport mid = resolvent_multiplier_bounds(std::numbers::pi / 2);
  CHECK(mid.i_closed == Approx(std::numbers::pi / 4).margin(1e-15));
  CHECK(mid.i_quadrature == Approx(std::numbers::pi / 4).margin(1e-10));
  CHECK(mid.variation == Approx(0.7679173004024319).margin(1e-12));
  CHECK(mid.v1 == Approx(1.767917300402432).margin(1e-12));
  CHECK(mid.product ==
        Approx(std::sqrt(2.0) * std::numbers::pi / 4).margin(1e-10));
  CHECK(mid.variation_within_cap);
  CHECK(mid.quadrature_matches);
  CHECK(mid.product_matches);

  for (int k = 1; k <= 10; ++k) {
    const double theta = std::numbers::pi * k / 11.0;
    const IThetaReport rep = resolvent_multiplier_bounds(theta);
    INFO("theta=" << theta);
    CHECK(rep.quadrature_matches);
    CHECK(rep.product_matches);
    CHECK(rep.variation_within_cap);
  }
  CHECK_THROWS_AS(resolvent_multiplier_bounds(0.0), InputError);
  CHECK_THROWS_AS(resolvent_multiplier_bounds(std::numbers::pi), InputError);
}

TEST_CASE("multiplier bound through basis projections", "[gallery]") {
  const Matrix basis = conditional_basis(8, 0.9);
  V1Sequence c;
  c.c = foguel_sequence(8);
  const SchauderMultiplierReport rep = schauder_multiplier_bound(basis, c, 4.0);
  CHECK(rep.v1 == v1_norm(c));
  CHECK(rep.bound == Approx(rep.sup_qn * rep.v1));
  CHECK(rep.sup_qn >= 1.0 - 1e-10);
  CHECK(rep.holds);

  V1Sequence wrong;
  wrong.c = foguel_sequence(7);
  CHECK_THROWS_AS(schauder_multiplier_bound(basis, wrong, 4.0), InputError);
  CHECK_THROWS_AS(
      schauder_multiplier_bound(Matrix::Zero(2, 3), V1Sequence{}, 4.0),
      InputError);
}
