// command line front end: geometry inspection, pointwise identity checks,
// the variational certificate, and the 3d finite difference eigensolver
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <random>

#include "CLI11.hpp"
#include "qlayer/config.hpp"
#include "qlayer/errors.hpp"
#include "qlayer/report.hpp"
#include "qlayer/specfun.hpp"

namespace {

using namespace qlayer;

constexpr int kExitNegative = 2;   // a truthful negative outcome
constexpr int kExitBadConfig = 3;  // configuration or parameter errors
constexpr int kExitSolver = 10;    // numerical kernels failed their contract

void print_validity(const LayerValidity& v) {
  std::printf("layer half thickness     %.6g\n", v.a);
  std::printf("sup principal curvature  %.6g\n", v.sup_curv);
  if (std::isfinite(v.rho_m))
    std::printf("curvature radius rho_m   %.6g\n", v.rho_m);
  else
    std::printf("curvature radius rho_m   infinite\n");
  std::printf("thickness admissible     %s\n", v.valid ? "yes" : "no");
  if (v.valid)
    std::printf("metric sandwich          [%.6g, %.6g]\n", v.c_minus, v.c_plus);
}

int run_curvature(const RunConfig& cfg) {
  const auto surf = make_surface(cfg.surface);
  const double s = std::max(surf->support_radius(), 1.0);
  std::printf("surface: %s\n", surf->name().c_str());
  std::printf("%10s %12s %12s %12s %12s\n", "r", "k_mer", "k_circ", "K", "M");
  for (double frac : {0.0, 0.2, 0.4, 0.6, 0.8, 0.95}) {
    const CurvatureJet c = curvature_jet(*surf, frac * s);
    std::printf("%10.4f %12.5e %12.5e %12.5e %12.5e\n", frac * s, c.km, c.kc,
                c.K, c.M);
  }
  const TotalCurvatureSplit tot = total_gauss_curvature_split(*surf);
  std::printf("total curvature          %.3e  (+%.6g / %.6g)\n", tot.total,
              tot.positive, tot.negative);
  const LayerValidity v = validate_thickness(*surf, cfg.half_thickness);
  print_validity(v);
  return v.valid ? 0 : kExitNegative;
}

int run_identities(const RunConfig& cfg) {
  const auto surf = make_surface(cfg.surface);
  const double s = std::max(surf->support_radius(), 1.0);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(-1.1 * s, 1.1 * s);
  double worst_w = 0.0, worst_k = 0.0, worst_rad = 0.0;
  for (int t = 0; t < 500; ++t) {
    const double x = unif(rng), y = unif(rng);
    const Forms f = fundamental_forms(monge_jet(*surf, x, y));
    const double scale = std::abs(f.K) + f.M * f.M + 1.0;
    // normal derivative form against Weingarten: III + K g - 2 M h = 0
    const double w =
        std::max({std::abs(f.iii11 + f.K * f.g11 - 2 * f.M * f.h11),
                  std::abs(f.iii12 + f.K * f.g12 - 2 * f.M * f.h12),
                  std::abs(f.iii22 + f.K * f.g22 - 2 * f.M * f.h22)}) /
        scale;
    worst_w = std::max(worst_w, w);
    worst_k = std::max(worst_k,
                       (std::abs(f.kplus * f.kminus - f.K) +
                        std::abs(f.kplus + f.kminus - 2 * f.M)) /
                           scale);
    const double r = std::hypot(x, y);
    const CurvatureJet c = curvature_jet(*surf, r);
    const double lo = std::min(c.km, c.kc), hi = std::max(c.km, c.kc);
    worst_rad = std::max(worst_rad, std::abs(f.kminus - lo) / scale +
                                        std::abs(f.kplus - hi) / scale);
  }
  std::printf("weingarten residual      %.3e\n", worst_w);
  std::printf("principal curvature      %.3e\n", worst_k);
  std::printf("radial vs monge          %.3e\n", worst_rad);
  const bool ok = worst_w < 1e-10 && worst_k < 1e-10 && worst_rad < 1e-10;
  std::printf("identities               %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : kExitNegative;
}

void print_certificate(const CertificateResult& r) {
  std::printf("kappa1^2                 %.10g\n", r.kappa1_sq);
  std::printf("total curvature          %.3e\n", r.tot);
  std::printf("B (cross coefficient)    %.10g\n", r.B);
  std::printf("C (correction form)      %.10g\n", r.C);
  std::printf("eps*                     %.6g\n", r.eps_star);
  std::printf("quadrature margin        %.3e\n", r.quad_err);
  std::printf("cross form check b/B-1   %.3e\n", r.cross_check);
  std::printf("direct t relative error  %.3e\n", r.t_direct_rel_err);
  if (r.rayleigh_fallback)
    std::printf("note: C <= 0, exact 2d Rayleigh minimization used\n");
  std::printf("%4s %12s %12s %12s  %s\n", "k", "x0", "t0", "t_min", "cert");
  for (const SigmaRow& row : r.sweep)
    std::printf("%4d %12.5e %12.6f %12.6f  %s\n", row.k, row.x0, row.t0,
                row.t_min, row.certified ? "yes" : "no");
  if (r.certified)
    std::printf("CERTIFIED: ground energy < kappa1^2, upper bound %.10g\n",
                r.e_upper);
  else
    std::printf("NOT_CERTIFIED: no sigma row reaches the required margin\n");
}

void print_solve(const SolveResult& r) {
  std::printf("grid N=%" PRId64 "  hl=%.6g  hu=%.6g  bc=%s\n", r.N, r.hl, r.hu,
              r.bc == LateralBc::dirichlet ? "dirichlet" : "neumann");
  if (!r.check.ok)
    std::printf("warning: hl exceeds rho_m/8 = %.6g, lateral error may mimic "
                "binding\n",
                r.check.threshold);
  std::printf("discrete threshold khat1^2 = %.10g (kappa1^2 = %.10g)\n",
              r.khat1_sq, r.kappa1_sq);
  for (size_t i = 0; i < r.lambda.size(); ++i)
    std::printf("lambda[%zu] = %.10g   residual %.2e\n", i, r.lambda[i],
                r.resid[i]);
  if (!r.lambda.empty()) {
    if (r.lambda[0] < r.khat1_sq)
      std::printf("bound state: lambda1 below threshold by %.6g\n",
                  r.khat1_sq - r.lambda[0]);
    else
      std::printf("no bound state on this grid\n");
  }
  std::printf("%d operator applications, %d cg iterations, %.1fs\n",
              r.op_applies, r.cg_iters_total, r.seconds);
}

int run_certify(const RunConfig& cfg) {
  const auto surf = make_surface(cfg.surface);
  const CertificateResult r = certify(*surf, cfg.half_thickness,
                                      cfg.certificate);
  print_certificate(r);
  if (!cfg.output.json.empty()) {
    nlohmann::json j = report_skeleton(cfg);
    j["certificate"] = certificate_json(r);
    write_json(j, cfg.output.json);
  }
  if (!cfg.output.csv.empty()) write_certificate_csv(r, cfg.output.csv);
  return r.certified ? 0 : kExitNegative;
}

int run_solve(const RunConfig& cfg) {
  const auto surf = make_surface(cfg.surface);
  const SolveResult r = solve_layer(*surf, cfg.half_thickness, cfg.solver);
  print_solve(r);
  if (!cfg.output.json.empty()) {
    nlohmann::json j = report_skeleton(cfg);
    j["solve"] = solve_json(r);
    write_json(j, cfg.output.json);
  }
  return !r.lambda.empty() && r.lambda[0] < r.khat1_sq ? 0 : kExitNegative;
}

int run_full(const RunConfig& cfg) {
  const auto surf = make_surface(cfg.surface);
  const CertificateResult cert =
      certify(*surf, cfg.half_thickness, cfg.certificate);
  print_certificate(cert);
  std::printf("\n");
  const SolveResult sol = solve_layer(*surf, cfg.half_thickness, cfg.solver);
  print_solve(sol);
  if (cert.certified && !sol.lambda.empty())
    std::printf("\ncertificate bound %.10g %s lambda1 %.10g\n", cert.e_upper,
                cert.e_upper >= sol.lambda[0] ? ">=" : "< (!)", sol.lambda[0]);
  if (!cfg.output.json.empty()) {
    nlohmann::json j = report_skeleton(cfg);
    j["certificate"] = certificate_json(cert);
    j["solve"] = solve_json(sol);
    write_json(j, cfg.output.json);
  }
  if (!cfg.output.csv.empty()) write_certificate_csv(cert, cfg.output.csv);
  return cert.certified ? 0 : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hard-wall quantum layer over a locally deformed plane"};
  app.require_subcommand(1);

  std::string config_path, surf_type, bc_str, json_out, csv_out;
  double amplitude = 0, width = 0, half_thickness = 0, radius = 0;
  int n = 0, nu = 0, k = 0;
  bool force_grid = false;

  auto* oc = app.add_option("--config", config_path,
                            "INI config, or a json report to rerun exactly");
  auto* ot = app.add_option("--type", surf_type, "surface: bump or plane");
  auto* oa = app.add_option("--amplitude", amplitude, "bump amplitude");
  auto* ow = app.add_option("--width", width, "bump support radius");
  auto* oh = app.add_option("--half-thickness", half_thickness,
                            "layer half thickness a");
  auto* oR = app.add_option("--R", radius, "lateral box half width");
  auto* on = app.add_option("--n", n, "lateral interior nodes per axis");
  auto* onu = app.add_option("--nu", nu, "transverse interior nodes");
  auto* obc = app.add_option("--bc", bc_str, "lateral bc: dirichlet|neumann");
  auto* ok_ = app.add_option("--k", k, "number of eigenpairs");
  auto* ofg = app.add_flag("--force-grid", force_grid,
                           "run even when hl exceeds rho_m/8");
  auto* oj = app.add_option("--json", json_out, "write a json report");
  auto* ocsv = app.add_option("--csv", csv_out, "write the sigma sweep csv");

  CLI::App* c_curv = app.add_subcommand("curvature", "curvature profile and layer validity");
  CLI::App* c_ident = app.add_subcommand("check-identities", "pointwise differential geometry identities");
  CLI::App* c_cert = app.add_subcommand("certify", "variational bound state certificate");
  CLI::App* c_solve = app.add_subcommand("solve", "finite difference eigensolve");
  CLI::App* c_full = app.add_subcommand("full", "certificate plus eigensolve");
  for (CLI::App* sub : {c_curv, c_ident, c_cert, c_solve, c_full})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadConfig;
  }

  try {
    RunConfig cfg;
    if (oc->count()) cfg = load_config(config_path);
    if (ot->count()) cfg.surface.type = surf_type;
    if (oa->count()) cfg.surface.amplitude = amplitude;
    if (ow->count()) cfg.surface.width = width;
    if (oh->count()) cfg.half_thickness = half_thickness;
    if (oR->count()) cfg.solver.grid.R = radius;
    if (on->count()) cfg.solver.grid.n = n;
    if (onu->count()) cfg.solver.grid.nu = nu;
    if (obc->count())
      cfg.solver.bc =
          bc_str == "neumann" ? LateralBc::neumann : LateralBc::dirichlet;
    if (ok_->count()) cfg.solver.k = k;
    if (ofg->count()) cfg.solver.force_grid = force_grid;
    if (oj->count()) cfg.output.json = json_out;
    if (ocsv->count()) cfg.output.csv = csv_out;
    validate(cfg);

    if (c_curv->parsed()) return run_curvature(cfg);
    if (c_ident->parsed()) return run_identities(cfg);
    if (c_cert->parsed()) return run_certify(cfg);
    if (c_solve->parsed()) return run_solve(cfg);
    if (c_full->parsed()) return run_full(cfg);
    return kExitBadConfig;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const NonAdmissibleTrial& e) {
    std::fprintf(stderr, "non-admissible trial: %s\n", e.what());
    return kExitBadConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return kExitSolver;
  }
}
