// Acceptance gate. Each criterion prints exactly one PASS/FAIL line with the
// measured quantities; the process exits nonzero if any criterion fails.

#include "test_util.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace rittlab;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(int idx, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  (%s)\n", idx, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void guarded(int idx, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(idx, false, std::string("exception: ") + e.what());
  }
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ||D||_{p->p} <= ||D||_1^{1/p} ||D||_inf^{1-1/p} (max column / row sums).
double interp_pnorm_upper(const Matrix& d, double p) {
  double col = 0.0, row = 0.0;
  for (Eigen::Index j = 0; j < d.cols(); ++j)
    col = std::max(col, d.col(j).cwiseAbs().sum());
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    row = std::max(row, d.row(i).cwiseAbs().sum());
  return std::pow(col, 1.0 / p) * std::pow(row, 1.0 - 1.0 / p);
}

Matrix diag_of(const std::vector<double>& d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) v[static_cast<Eigen::Index>(i)] = d[i];
  return Matrix(v.asDiagonal());
}

// 1. Contour, binomial series, and eigendecomposition routes for (I-T)^alpha
//    agree pairwise to 1e-8 on 20 random diagonalizable 8x8 operators with
//    spectrum in [0, 0.9]; under 30 s total.
void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const double alphas[] = {0.5, 0.7, 1.3};
  ContourSpec spec;
  spec.q_panel = 14;
  spec.nodes_arc = 800;
  spec.min_nodes_segment = 400;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Matrix t = testutil::random_diagonalizable(8, 0.9, 1000 + i);
    const double a = alphas[i % 3];
    const Matrix by_contour = contour_fracpow(t, a, spec);
    const SeriesResult sr = frac_power_series(t, a);
    if (!sr.converged) {
      report(1, false, "series route failed to converge");
      return;
    }
    const Matrix by_eig = frac_power_eig(t, a);
    worst = std::max(worst, (by_contour - sr.value).cwiseAbs().maxCoeff());
    worst = std::max(worst, (by_contour - by_eig).cwiseAbs().maxCoeff());
    worst = std::max(worst, (sr.value - by_eig).cwiseAbs().maxCoeff());
  }
  const double secs = elapsed_s(t0);
  report(1, worst <= 1e-8 && secs < 30.0,
         "20 ops, max pairwise entry diff " + fmt(worst) + " <= 1e-8, " +
             fmt(secs) + " s < 30 s");
}

// 2. square_fn(rI, x, alpha) matches the closed form
//    (sum_k k^{2a-1} r^{2(k-1)})^{1/2} (1-r)^a ||x||_p to 1e-8.
double scalar_square_sum(double r, double alpha) {
  double acc = 0.0;
  for (int k = 1; k <= 2000000; ++k) {
    const double term =
        std::pow(static_cast<double>(k), 2.0 * alpha - 1.0) *
        std::pow(r, 2.0 * (k - 1));
    acc += term;
    if (k > 8 && term < acc * 1e-18) break;
  }
  return acc;
}

void criterion2() {
  Vector x(3);
  x << Complex(0.7, -0.3), Complex(-1.1, 0.2), Complex(0.4, 0.9);
  double worst = 0.0;
  for (double r : {0.5, 0.9})
    for (double a : {0.5, 1.0, 2.0})
      for (double p : {4.0 / 3.0, 2.0, 4.0}) {
        const Matrix t = r * Matrix::Identity(3, 3);
        const SquareFnReport rep = square_fn(t, x, a, p);
        const double ref = std::sqrt(scalar_square_sum(r, a)) *
                           std::pow(1.0 - r, a) * vec_p_norm(x, p);
        worst = std::max(worst, std::abs(rep.value - ref) / ref);
      }
  report(2, worst <= 1e-8,
         "18 (r, alpha, p) combos, max relative error " + fmt(worst) +
             " <= 1e-8");
}

// 3. Equivalence-constant experiment on a 16-point diagonal operator at p = 4,
//    100 trials: finite spread < 1e3 for (alpha, beta) = (1, 1/2); spread
//    exactly 1 for alpha = beta.
void criterion3() {
  std::vector<double> d(16);
  for (int i = 0; i < 16; ++i) d[i] = 0.9 * i / 15.0;
  const Matrix t = diag_of(d);
  const EquivalenceReport mixed =
      equivalence_experiment(t, 1.0, 0.5, 4.0, 100, 42);
  const bool finite = !mixed.ratios.empty() && mixed.c_min > 0.0 &&
                      std::isfinite(mixed.c_max);
  const double spread = finite ? mixed.c_max / mixed.c_min : 0.0;
  const EquivalenceReport same =
      equivalence_experiment(t, 1.0, 1.0, 4.0, 100, 43);
  const bool unit = !same.ratios.empty() && same.c_min == same.c_max;
  report(3, finite && spread < 1e3 && unit,
         "(1, 1/2) spread " + fmt(spread) + " < 1e3 over " +
             std::to_string(mixed.ratios.size()) +
             " trials; alpha = beta spread " +
             fmt(same.ratios.empty() ? 0.0 : same.c_max / same.c_min) +
             " == 1");
}

// 4. Dilation of diag(0.5, 0.9) at p = 4, K = 256, M = 8, L = 272: residuals
//    and duality defect <= 1e-6, U isometric to 1e-12 for |m| <= 16, < 60 s.
void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const Matrix t = diag_of({0.5, 0.9});
  const DilationBundle b = build_dilation(t, 4.0, 256, 8, 272);
  double max_res = 0.0;
  Matrix tm = Matrix::Identity(2, 2);
  for (int m = 0; m <= 8; ++m) {
    max_res = std::max(max_res, interp_pnorm_upper(tm - qumj(b, m), 4.0));
    tm = (t * tm).eval();
  }
  const double duality = verify_duality_identity(b);
  const DilationReport rep = dilation_report(b);
  double u_dev = rep.u_deviation;  // probes all |m| <= 2M = 16
  Rng rng(77);
  const Eigen::Index zn = z_dim(b);
  for (int probe = 0; probe < 6; ++probe) {
    const Vector z = rng.cgauss_vec(zn);
    const double base = z_norm(z, 2, b.ring, 4.0);
    for (long m = -16; m <= 16; ++m) {
      const Vector uz = apply_U(z, 2, b.ring, m);
      u_dev = std::max(u_dev, std::abs(z_norm(uz, 2, b.ring, 4.0) / base - 1.0));
    }
  }
  const double secs = elapsed_s(t0);
  report(4,
         max_res <= 1e-6 && rep.max_residual <= 1e-6 && duality <= 1e-6 &&
             u_dev <= 1e-12 && rep.verified && secs < 60.0,
         "max residual " + fmt(max_res) + " <= 1e-6, duality defect " +
             fmt(duality) + " <= 1e-6, U deviation " + fmt(u_dev) +
             " <= 1e-12, " + fmt(secs) + " s < 60 s");
}

// 5. Hilbert-type finite sections at n = 64..512 are nondecreasing and stay
//    under sqrt((1+2B(g,b))(1+2B(b,g))); the (1/2, 1/2) cap equals 1 + 2 pi.
void criterion5() {
  bool ok = true;
  std::string note;
  for (auto [beta, gamma] : std::vector<std::pair<double, double>>{
           {0.5, 0.5}, {1.0, 2.0}}) {
    const HilbertTypeReport h = hilbert_type(beta, gamma, 512);
    const double cap = std::sqrt(h.cap_row * h.cap_col);
    double prev = 0.0, last = 0.0;
    for (int n : {64, 128, 256, 512}) {
      const double cur = regular_norm(h.factored.c.topLeftCorner(n, n));
      ok = ok && cur >= prev - 1e-12 && cur <= cap + 1e-9;
      prev = cur;
      last = cur;
    }
    if (beta == 0.5 && gamma == 0.5)
      ok = ok && std::abs(cap - (1.0 + 2.0 * kPi)) <= 1e-12;
    note += "(" + fmt(beta) + "," + fmt(gamma) + ") n=512 norm " + fmt(last) +
            " <= cap " + fmt(cap) + "; ";
  }
  report(5, ok, note + "sections nondecreasing");
}

// 6. CAR battery: the sum identity to 1e-10 (100 random coefficient vectors
//    per m <= 5); pairing m 2^{m-1} exact for m <= 6; analytic witness m/2 to
//    1e-9; ||phi_m||_2 = sqrt(m) to 1e-8 for m <= 4; circulant estimate of
//    ||phi_m||_p under the interpolation cap m^{1/min(p,p')} + 1e-6 for
//    m <= 3, p in {4/3, 4}.
void criterion6() {
  Rng rng(606);
  double worst_id = 0.0;
  for (int m = 1; m <= 5; ++m)
    for (int trial = 0; trial < 100; ++trial)
      worst_id = std::max(worst_id, car_identity(m, rng.cgauss_vec(m)).error);

  bool pair_ok = true;
  double worst_wit = 0.0;
  for (int m = 1; m <= 6; ++m) {
    const WLowerBoundReport w = w_lower_bound(m, 4.0);
    pair_ok = pair_ok && w.pairing == (static_cast<long long>(m) << (m - 1));
    worst_wit = std::max(worst_wit, std::abs(w.analytic_lb - 0.5 * m));
  }

  double worst_n2 = 0.0;
  for (int m = 1; m <= 4; ++m) {
    const PhiNormsReport ph = phi_m_norms(m, 4.0, 4 << m);
    worst_n2 = std::max(worst_n2, std::abs(ph.norm2 - std::sqrt(double(m))));
  }

  bool cap_ok = true;
  double worst_over = 0.0;
  for (int m = 1; m <= 3; ++m)
    for (double p : {4.0 / 3.0, 4.0}) {
      const PhiNormsReport ph = phi_m_norms(m, p, 4 << m);
      const double cap =
          std::pow(double(m), 1.0 / std::min(p, holder_conjugate(p)));
      cap_ok = cap_ok && std::abs(ph.normp_cap - cap) <= 1e-12 &&
               ph.normp_estimate <= cap + 1e-6;
      worst_over = std::max(worst_over, ph.normp_estimate - cap);
    }

  report(6,
         worst_id <= 1e-10 && pair_ok && worst_wit <= 1e-9 &&
             worst_n2 <= 1e-8 && cap_ok,
         "identity err " + fmt(worst_id) + " <= 1e-10, pairing exact, witness "
             "err " + fmt(worst_wit) + " <= 1e-9, ||phi_m||_2 err " +
             fmt(worst_n2) + " <= 1e-8, circulant excess over m^(1/min(p,p')) " +
             fmt(worst_over) + " <= 1e-6");
}

// 7. I(theta) quadrature equals (pi-theta)/(2 sin theta) and the product
//    |e^{i theta}-1| I(theta) equals (pi-theta)/(2 cos(theta/2)), both to
//    1e-8 on 50 angles across (0, pi).
void criterion7() {
  double worst_q = 0.0, worst_p = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double theta = kPi / 50.0 + k * (48.0 * kPi / 50.0) / 49.0;
    const IThetaReport r = resolvent_multiplier_bounds(theta);
    worst_q = std::max(
        worst_q,
        std::abs(r.i_quadrature - (kPi - theta) / (2.0 * std::sin(theta))));
    worst_p = std::max(
        worst_p,
        std::abs(r.product - (kPi - theta) / (2.0 * std::cos(theta / 2.0))));
  }
  report(7, worst_q <= 1e-8 && worst_p <= 1e-8,
         "50 angles, quadrature err " + fmt(worst_q) + ", product err " +
             fmt(worst_p) + ", both <= 1e-8");
}

// 8. Boundary geometry: r(t)/t within 1e-3 of -cos(theta) at t = 1e-5, and
//    the 1e4-sample inclusion and sector checks come back clean.
void criterion8() {
  bool ok = true;
  double worst = 0.0;
  for (double theta : {2.0 * kPi / 3.0, 3.0 * kPi / 4.0, 5.0 * kPi / 6.0}) {
    const double slope = dtheta_radius(theta, 1e-5) / 1e-5;
    worst = std::max(worst, std::abs(slope + std::cos(theta)));
    const DthetaReport g = dtheta_geometry(theta);
    ok = ok && g.inclusion_ok && g.sector_ok;
  }
  report(8, ok && worst <= 1e-3,
         "slope err " + fmt(worst) +
             " <= 1e-3 at t = 1e-5; inclusion and sector sampling clean at "
             "1e4 points");
}

// 9. vitse_scan over n <= 4096 and a 16-point r-grid matches the scalar
//    oracle to 1e-9 for alpha in {1/2, 1, 2} and stabilizes.
void criterion9() {
  const std::vector<double> spec_d = {0.2, 0.5, 0.9};
  const Matrix t = diag_of(spec_d);
  std::vector<double> grid;
  for (int k = 1; k <= 16; ++k) grid.push_back(k / 16.0);
  bool ok = true;
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    const VitseScan scan = vitse_scan(t, a, 4096, grid, 4.0);
    double oracle = 0.0;
    for (double r : grid)
      for (double d : spec_d)
        for (int n = 1; n <= 4096; ++n)
          oracle = std::max(oracle, std::pow(double(n), a) *
                                        std::pow(r * d, n - 1) *
                                        std::pow(std::abs(1.0 - r * d), a));
    worst = std::max(worst, std::abs(scan.sup - oracle));
    ok = ok && scan.stabilized;
  }
  report(9, ok && worst <= 1e-9,
         "3 alphas, |scan - oracle| " + fmt(worst) +
             " <= 1e-9, all scans stabilized");
}

// 10. Khintchine p = 2 exactness: rad_norm equals mixed_norm to 1e-12 on 100
//     random families with K <= 12.
void criterion10() {
  Rng rng(1010);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int K = 1 + static_cast<int>(rng.bits() % 12);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.bits() % 6);
    std::vector<Vector> xs;
    Matrix e(n, K);
    for (int k = 0; k < K; ++k) {
      xs.push_back(rng.cgauss_vec(n));
      e.col(k) = xs.back();
    }
    worst = std::max(worst,
                     std::abs(rad_norm(xs, 2.0).value - mixed_norm(e, 2.0)));
  }
  report(10, worst <= 1e-12,
         "100 families, max |rad - mixed| " + fmt(worst) + " <= 1e-12");
}

// 11. CLI determinism: the same squarefn and analyze invocations produce
//     byte-identical output under --threads 1 and --threads 8.
void criterion11() {
  namespace fs = std::filesystem;
  const std::string cli = RITTLAB_CLI_PATH;
  const fs::path dir = testutil::fresh_dir("acceptance_cli");
  const fs::path mat = dir / "t.json";
  write_json_file(mat, matrix_to_json(diag_of({0.3, 0.6, 0.85, 0.1})));
  auto quoted = [](const fs::path& p) { return "'" + p.string() + "'"; };

  bool ok = true;
  std::string note;
  struct Run {
    std::string args;
    std::vector<std::string> files;
  };
  const std::vector<Run> runs = {
      {" squarefn " + quoted(mat) +
           " --alpha 1 --beta 0.5 --p 4 --trials 40 --seed 5",
       {"squarefn.json", "squarefn.csv"}},
      {" analyze " + quoted(mat) + " --p 4 --nmax 64 --seed 5",
       {"analyze.json"}},
  };
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const fs::path out1 = dir / ("r" + std::to_string(i) + "_t1");
    const fs::path out8 = dir / ("r" + std::to_string(i) + "_t8");
    const int rc1 = testutil::run_command(
        cli + runs[i].args + " --threads 1 --out " + quoted(out1) +
        " > /dev/null 2>&1");
    const int rc8 = testutil::run_command(
        cli + runs[i].args + " --threads 8 --out " + quoted(out8) +
        " > /dev/null 2>&1");
    if (rc1 != 0 || rc8 != 0) {
      ok = false;
      note += "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc8) +
              "; ";
      continue;
    }
    for (const std::string& f : runs[i].files) {
      const bool same =
          testutil::slurp(out1 / f) == testutil::slurp(out8 / f) &&
          !testutil::slurp(out1 / f).empty();
      ok = ok && same;
      if (!same) note += f + " differs; ";
    }
  }
  report(11, ok,
         note.empty() ? "squarefn + analyze outputs byte-identical at 1 and 8 "
                        "threads"
                      : note);
}

}  // namespace

int main() {
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  guarded(10, criterion10);
  guarded(11, criterion11);
  std::printf("%d of 11 criteria passed\n", 11 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
