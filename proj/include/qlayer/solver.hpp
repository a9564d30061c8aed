#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "qlayer/assemble.hpp"

namespace qlayer {

struct SolveConfig {
  Grid grid;
  LateralBc bc = LateralBc::dirichlet;
  int k = 1;                 // eigenpairs from the bottom
  double shift_frac = 0.9;   // tau = shift_frac * khat1_sq, must stay below
                             // the ground eigenvalue
  double tol = 1e-9;         // Lanczos frame tolerance, relative
  int max_restarts = 200;
  double cg_rtol = 1e-12;
  uint64_t seed = 20260817;
  bool force_grid = false;
  std::string dump_matrix;   // Matrix Market path, empty disables
};

struct SolveResult {
  std::vector<double> lambda;  // ascending
  std::vector<double> resid;   // ||A v - lambda v||, v normalized
  double khat1_sq = 0.0;       // discrete threshold: binding means
                               // lambda[0] < khat1_sq on this grid
  double kappa1_sq = 0.0;
  double tau = 0.0;
  GridCheck check;
  int64_t N = 0;
  double hl = 0.0, hu = 0.0;
  LateralBc bc = LateralBc::dirichlet;
  int op_applies = 0, cg_iters_total = 0, restarts = 0;
  double seconds = 0.0;
};

SolveResult solve_layer(const RadialSurface& surf, double half_thickness,
                        const SolveConfig& cfg);

// one grid, both lateral closures: eigenvalues bracket entrywise,
// neumann.lambda[i] <= dirichlet.lambda[i] (A_D - A_N is diagonal >= 0)
struct BracketResult {
  SolveResult neumann, dirichlet;
};
BracketResult bracket_threshold(const RadialSurface& surf,
                                double half_thickness, const SolveConfig& cfg);

// three nested grids with exact step halving: (n, nu), (2n+1, 2nu+1),
// (4n+3, 4nu+3). Second order convergence shows as ratio near 4.
struct RefinementStep {
  Grid grid;
  double hl = 0.0, hu = 0.0;
  double lambda1 = 0.0;
  double khat1_sq = 0.0;
};
struct RefinementResult {
  std::vector<RefinementStep> steps;
  double ratio = 0.0;  // (lam0 - lam1) / (lam1 - lam2)
};
RefinementResult refinement_study(const RadialSurface& surf,
                                  double half_thickness,
                                  const SolveConfig& cfg);

}  // namespace qlayer
