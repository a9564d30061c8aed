#include "qlayer/solver.hpp"

#include <algorithm>
#include <chrono>

#include "qlayer/errors.hpp"

namespace qlayer {

SolveResult solve_layer(const RadialSurface& surf, double half_thickness,
                        const SolveConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.k < 1) throw InvalidParams("need at least one eigenpair");
  if (!(cfg.shift_frac > 0.0 && cfg.shift_frac < 1.0))
    throw InvalidParams("shift_frac must lie in (0, 1)");
  Operator3d op =
      assemble_operator(surf, half_thickness, cfg.grid, cfg.bc, cfg.force_grid);
  if (!cfg.dump_matrix.empty()) write_matrix_market(op.A, cfg.dump_matrix);

  SolveResult res;
  res.khat1_sq = op.khat1_sq;
  res.kappa1_sq = op.kappa1_sq;
  res.tau = cfg.shift_frac * op.khat1_sq;
  res.check = op.check;
  res.N = op.N;
  res.hl = op.hl;
  res.hu = op.hu;
  res.bc = cfg.bc;

  const int subspace = std::max(2 * cfg.k + 20, 30);
  const EigResult eig =
      lanczos_smallest(op.A, res.tau, cfg.k, subspace, cfg.tol,
                       cfg.max_restarts, cfg.cg_rtol, cfg.seed);
  res.lambda = eig.values;
  res.resid = eig.residuals;
  res.op_applies = eig.op_applies;
  res.cg_iters_total = eig.cg_iters_total;
  res.restarts = eig.restarts;
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return res;
}

BracketResult bracket_threshold(const RadialSurface& surf,
                                double half_thickness,
                                const SolveConfig& cfg) {
  BracketResult br;
  SolveConfig c = cfg;
  c.bc = LateralBc::neumann;
  br.neumann = solve_layer(surf, half_thickness, c);
  c.bc = LateralBc::dirichlet;
  br.dirichlet = solve_layer(surf, half_thickness, c);
  return br;
}

RefinementResult refinement_study(const RadialSurface& surf,
                                  double half_thickness,
                                  const SolveConfig& cfg) {
  RefinementResult out;
  SolveConfig c = cfg;
  c.k = 1;
  c.force_grid = true;  // the coarse leg is the point of the study
  for (int leg = 0; leg < 3; ++leg) {
    const SolveResult r = solve_layer(surf, half_thickness, c);
    RefinementStep step;
    step.grid = c.grid;
    step.hl = r.hl;
    step.hu = r.hu;
    step.lambda1 = r.lambda[0];
    step.khat1_sq = r.khat1_sq;
    out.steps.push_back(step);
    c.grid.n = 2 * c.grid.n + 1;
    c.grid.nu = 2 * c.grid.nu + 1;
  }
  const double d01 = out.steps[0].lambda1 - out.steps[1].lambda1;
  const double d12 = out.steps[1].lambda1 - out.steps[2].lambda1;
  out.ratio = d12 != 0.0 ? d01 / d12 : 0.0;
  return out;
}

}  // namespace qlayer
