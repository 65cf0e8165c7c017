// Command-line front end: analyze | squarefn | dilate | gallery (car|foguel|itheta).
// JSON for structured reports, CSV for tabular series, matrices in the shared
// {"rows","cols","data"} format. Exit codes: 0 success, 2 input error,
// 3 numerical non-convergence (partial results still written).

#include <rittlab/rittlab.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace rittlab;

struct Cfg {
  std::uint64_t seed = 1;
  double p = 2.0;
  int nmax = 512;
  int k_cols = 64;
  int m_pow = 8;
  int ring = 0;
  int n_circ = 32;
  int trials = 64;
  int threads = 1;
  std::string out = ".";
  double tol_sqfn = 1e-10;
  double tol_dilation = 1e-6;
};

void add_common(CLI::App* cmd, Cfg& cfg) {
  cmd->add_option("--seed", cfg.seed, "master RNG seed (env RITTLAB_SEED as fallback)");
  cmd->add_option("--p", cfg.p, "Lebesgue exponent")->check(CLI::Range(1.0, 1e6));
  cmd->add_option("--out", cfg.out, "output directory");
  cmd->add_option("--threads", cfg.threads, "worker threads for trial loops")
      ->check(CLI::Range(1, 256));
  cmd->add_option("--tol.sqfn", cfg.tol_sqfn, "square-function stopping tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol.dilation", cfg.tol_dilation, "dilation verification tolerance")
      ->check(CLI::PositiveNumber);
}

void apply_env_seed(const CLI::App* cmd, Cfg& cfg) {
  if (cmd->count("--seed") > 0) return;
  if (const char* env = std::getenv("RITTLAB_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || (end && *end != '\0'))
      throw InputError("RITTLAB_SEED is not an unsigned integer");
    cfg.seed = v;
  }
}

std::filesystem::path out_path(const Cfg& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out);
  return std::filesystem::path(cfg.out) / name;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json power_json(const PowerConstants& pc, int n_max) {
  Json j;
  j["m_power"] = pc.m_power;
  j["m_diff"] = pc.m_diff;
  j["argmax_power"] = pc.argmax_power;
  j["argmax_diff"] = pc.argmax_diff;
  j["n_max"] = n_max;
  j["stabilized"] = pc.stabilized;
  return j;
}

int run_analyze(const std::string& matrix_file, const Cfg& cfg) {
  const Matrix t = read_matrix_file(matrix_file);
  Json j;
  j["input"] = matrix_file;
  j["p"] = cfg.p;
  Json spec = Json::array();
  for (const Complex& ev : spectrum(t)) spec.push_back({ev.real(), ev.imag()});
  j["spectrum"] = spec;
  const double g0 = optimal_gamma(t);
  j["gamma_opt"] = g0;
  j["power"] = power_json(power_constants(t, cfg.nmax, cfg.p), cfg.nmax);
  const RittConstant rc = ritt_resolvent_constant(t, cfg.p);
  j["ritt_constant"] = {{"value", rc.value},
                        {"growth_suspected", rc.growth_suspected}};
  const double g_ray = g0 + 0.45 * (std::numbers::pi / 2 - g0);
  const RRittEstimate rr = r_ritt_lower(t, g_ray, cfg.p, 24, 48, cfg.seed);
  j["r_ritt"] = {{"gamma", g_ray},
                 {"lower", rr.lower},
                 {"uniform_sup", rr.uniform_sup},
                 {"family_size", rr.family_size}};
  write_json_file(out_path(cfg, "analyze.json").string(), j);
  return 0;
}

int run_squarefn(const std::string& matrix_file, const std::string& x_file,
                 bool random_mode, double alpha, double beta, int k_max,
                 const Cfg& cfg) {
  const Matrix t = read_matrix_file(matrix_file);
  Json j;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["p"] = cfg.p;
  int exit_code = 0;
  if (!x_file.empty()) {
    const Matrix xm = read_matrix_file(x_file);
    if (xm.cols() != 1 || xm.rows() != t.rows())
      throw InputError("squarefn: x file must be an n x 1 matrix matching T");
    const Vector x = xm.col(0);
    const SquareFnReport ra = square_fn(t, x, alpha, cfg.p, cfg.tol_sqfn, k_max);
    const SquareFnReport rb = square_fn(t, x, beta, cfg.p, cfg.tol_sqfn, k_max);
    j["value_alpha"] = ra.value;
    j["value_beta"] = rb.value;
    j["k_used_alpha"] = ra.k_used;
    j["k_used_beta"] = rb.k_used;
    j["tail_alpha"] = ra.tail_estimate;
    j["tail_beta"] = rb.tail_estimate;
    j["converged"] = ra.converged && rb.converged;
    if (!(ra.converged && rb.converged)) exit_code = 3;
  } else {
    (void)random_mode;
    const EquivalenceReport rep =
        equivalence_experiment(t, alpha, beta, cfg.p, cfg.trials, cfg.seed,
                               cfg.threads, cfg.tol_sqfn, k_max);
    j["trials"] = cfg.trials;
    j["excluded"] = rep.excluded;
    j["c_min"] = rep.ratios.empty() ? 0.0 : rep.c_min;
    j["c_max"] = rep.ratios.empty() ? 0.0 : rep.c_max;
    std::ofstream csv(out_path(cfg, "squarefn.csv"));
    csv << "trial,ratio\n";
    for (std::size_t i = 0; i < rep.ratios.size(); ++i)
      csv << i << "," << fmt(rep.ratios[i]) << "\n";
  }
  write_json_file(out_path(cfg, "squarefn.json").string(), j);
  return exit_code;
}

int run_dilate(const std::string& matrix_file, const Cfg& cfg) {
  const Matrix t = read_matrix_file(matrix_file);
  const DilationBundle b = build_dilation(t, cfg.p, cfg.k_cols, cfg.m_pow,
                                          cfg.ring, cfg.tol_dilation);
  Json j = dilation_to_json(b);
  const DilationReport rep = dilation_report(b, cfg.tol_dilation, cfg.seed);
  j["report"] = {{"j_norm_lb", rep.j_norm_lb},
                 {"q_norm_lb", rep.q_norm_lb},
                 {"u_deviation", rep.u_deviation},
                 {"max_residual", rep.max_residual},
                 {"duality_defect", rep.duality_defect},
                 {"verified", rep.verified}};
  write_json_file(out_path(cfg, "dilation.json").string(), j);
  std::ofstream csv(out_path(cfg, "residuals.csv"));
  csv << "m,residual\n";
  for (std::size_t m = 0; m < b.residuals.size(); ++m)
    csv << m << "," << fmt(b.residuals[m]) << "\n";
  return 0;
}

int run_gallery_car(int m, const Cfg& cfg) {
  Json j;
  j["m"] = m;
  j["p"] = cfg.p;
  const WLowerBoundReport w = w_lower_bound(m, cfg.p, cfg.seed);
  j["pairing"] = w.pairing;
  j["norm_u"] = w.norm_u;
  j["norm_u_dual"] = w.norm_u_dual;
  j["analytic_lb"] = w.analytic_lb;
  j["search_lb"] = w.search_lb;
  Rng rng(cfg.seed);
  const CarIdentityReport id = car_identity(m, rng.cgauss_vec(m));
  j["identity_error"] = id.error;
  const CarL1Report l1 = car_l1_norms(m, cfg.seed);
  j["l1_all_unit"] = l1.all_unit;
  j["tensor_identity_err"] = l1.tensor_identity_err;
  write_json_file(out_path(cfg, "car.json").string(), j);

  std::ofstream csv(out_path(cfg, "car.csv"));
  csv << "m,norm2,normp_estimate,cap_mp,w_analytic_lb,w_search_lb\n";
  for (int mm = 1; mm <= std::min(m, 4); ++mm) {
    if (cfg.n_circ <= (1 << mm)) break;
    const PhiNormsReport ph = phi_m_norms(mm, cfg.p, cfg.n_circ, cfg.seed);
    const WLowerBoundReport ww = w_lower_bound(mm, cfg.p, cfg.seed);
    csv << mm << "," << fmt(ph.norm2) << "," << fmt(ph.normp_estimate) << ","
        << fmt(ph.normp_cap) << "," << fmt(ww.analytic_lb) << ","
        << fmt(ww.search_lb) << "\n";
  }
  return 0;
}

int run_gallery_foguel(int n, double strength, const Cfg& cfg) {
  const Matrix basis = conditional_basis(n, strength);
  const FoguelReport rep = foguel_operator(n, basis, cfg.p, cfg.nmax);
  Json j;
  j["n"] = n;
  j["p"] = cfg.p;
  j["strength"] = strength;
  j["basis_condition"] = rep.basis_condition;
  j["condition_warning"] = rep.condition_warning;
  j["gamma_opt"] = rep.gamma_opt;
  j["power"] = power_json(rep.powers, cfg.nmax);
  j["ritt_constant"] = {{"value", rep.ritt.value},
                        {"growth_suspected", rep.ritt.growth_suspected}};
  const PolyboundReport pb =
      polybound_estimate(rep.t, cfg.p, cfg.n_circ, cfg.trials, cfg.seed);
  j["polybound_max_ratio"] = pb.max_ratio;
  write_json_file(out_path(cfg, "foguel.json").string(), j);
  std::ofstream csv(out_path(cfg, "polybound.csv"));
  csv << "kind,index,op_norm,shift_norm,ratio\n";
  for (const PolyboundSample& s : pb.table)
    csv << s.kind << "," << s.index << "," << fmt(s.op_norm) << ","
        << fmt(s.shift_norm) << "," << fmt(s.ratio) << "\n";
  return 0;
}

int run_gallery_itheta(double theta, int grid, const Cfg& cfg) {
  const IThetaReport one = resolvent_multiplier_bounds(theta);
  Json j;
  j["theta"] = one.theta;
  j["variation"] = one.variation;
  j["v1"] = one.v1;
  j["i_quadrature"] = one.i_quadrature;
  j["i_closed"] = one.i_closed;
  j["product"] = one.product;
  j["product_closed"] = one.product_closed;
  j["variation_within_cap"] = one.variation_within_cap;
  j["quadrature_matches"] = one.quadrature_matches;
  j["product_matches"] = one.product_matches;
  write_json_file(out_path(cfg, "itheta.json").string(), j);

  std::ofstream csv(out_path(cfg, "itheta.csv"));
  csv << "theta,v1,variation,i_quadrature,i_closed,product,product_closed\n";
  for (int k = 0; k < grid; ++k) {
    const double th = std::numbers::pi / 50 +
                      (49.0 * std::numbers::pi / 50 - std::numbers::pi / 50) *
                          k / std::max(1, grid - 1);
    const IThetaReport r = resolvent_multiplier_bounds(th);
    csv << fmt(r.theta) << "," << fmt(r.v1) << "," << fmt(r.variation) << ","
        << fmt(r.i_quadrature) << "," << fmt(r.i_closed) << ","
        << fmt(r.product) << "," << fmt(r.product_closed) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ritt operator laboratory"};
  app.require_subcommand(1);
  Cfg cfg;

  std::string matrix_file, x_file;
  double alpha = 1.0, beta = 0.5;
  bool random_mode = false;

  CLI::App* analyze = app.add_subcommand("analyze", "Ritt diagnostics for a matrix");
  analyze->add_option("matrix", matrix_file, "matrix JSON file")->required();
  analyze->add_option("--nmax", cfg.nmax, "power scan length")->check(CLI::Range(1, 1 << 20));
  add_common(analyze, cfg);

  CLI::App* sqfn = app.add_subcommand("squarefn", "square-function equivalence experiment");
  sqfn->add_option("matrix", matrix_file, "matrix JSON file")->required();
  sqfn->add_option("--x", x_file, "vector JSON file (n x 1); single-sample mode");
  sqfn->add_flag("--random", random_mode, "random-sample mode (default)");
  sqfn->add_option("--alpha", alpha, "first exponent")->check(CLI::PositiveNumber);
  sqfn->add_option("--beta", beta, "second exponent")->check(CLI::PositiveNumber);
  sqfn->add_option("--trials", cfg.trials, "sample count")->check(CLI::Range(1, 1 << 20));
  sqfn->add_option("--nmax", cfg.nmax, "truncation cap")->check(CLI::Range(1, 1 << 24));
  add_common(sqfn, cfg);

  CLI::App* dilate = app.add_subcommand("dilate", "build and verify a loose dilation");
  dilate->add_option("matrix", matrix_file, "matrix JSON file")->required();
  dilate->add_option("--K", cfg.k_cols, "column truncation")->check(CLI::Range(1, 1 << 16));
  dilate->add_option("--M", cfg.m_pow, "maximum verified power")->check(CLI::Range(0, 1 << 16));
  dilate->add_option("--L", cfg.ring, "ring length (default K+M+1)")->check(CLI::Range(0, 1 << 20));
  add_common(dilate, cfg);

  CLI::App* gallery = app.add_subcommand("gallery", "example constructions");
  gallery->require_subcommand(1);
  int car_m = 3, foguel_n = 16, itheta_grid = 50;
  double strength = 0.9, theta = std::numbers::pi / 2;

  CLI::App* car = gallery->add_subcommand("car", "anticommutation block system");
  car->add_option("--m", car_m, "block count")->check(CLI::Range(1, 6));
  car->add_option("--N", cfg.n_circ, "circulant size")->check(CLI::Range(2, 1 << 12));
  add_common(car, cfg);

  CLI::App* foguel = gallery->add_subcommand("foguel", "basis multiplier operator");
  foguel->add_option("--n", foguel_n, "dimension")->check(CLI::Range(1, 256));
  foguel->add_option("--strength", strength, "basis conditioning knob")
      ->check(CLI::Range(0.0, 1.999));
  foguel->add_option("--N", cfg.n_circ, "circulant size")->check(CLI::Range(2, 1 << 12));
  foguel->add_option("--trials", cfg.trials, "random polynomial count")
      ->check(CLI::Range(0, 1 << 16));
  foguel->add_option("--nmax", cfg.nmax, "power scan length")->check(CLI::Range(1, 1 << 20));
  add_common(foguel, cfg);

  CLI::App* itheta = gallery->add_subcommand("itheta", "resolvent multiplier integrals");
  itheta->add_option("--theta", theta, "angle in (0, pi)");
  itheta->add_option("--grid", itheta_grid, "table size")->check(CLI::Range(1, 1 << 16));
  add_common(itheta, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*analyze) {
      apply_env_seed(analyze, cfg);
      return run_analyze(matrix_file, cfg);
    }
    if (*sqfn) {
      apply_env_seed(sqfn, cfg);
      const int k_max = sqfn->count("--nmax") > 0 ? cfg.nmax : 50000;
      return run_squarefn(matrix_file, x_file, random_mode, alpha, beta, k_max, cfg);
    }
    if (*dilate) {
      apply_env_seed(dilate, cfg);
      return run_dilate(matrix_file, cfg);
    }
    if (*car) {
      apply_env_seed(car, cfg);
      return run_gallery_car(car_m, cfg);
    }
    if (*foguel) {
      apply_env_seed(foguel, cfg);
      return run_gallery_foguel(foguel_n, strength, cfg);
    }
    if (*itheta) {
      apply_env_seed(itheta, cfg);
      return run_gallery_itheta(theta, itheta_grid, cfg);
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
