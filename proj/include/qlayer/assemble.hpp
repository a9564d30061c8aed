#pragma once
#include <string>

#include "qlayer/geometry.hpp"
#include "qlayer/sparse.hpp"

namespace qlayer {

// tensor grid of interior nodes: lateral x,y = -R + hl (i+1), i < n with
// hl = 2R/(n+1); transverse u = -a + hu (k+1), k < nu with hu = 2a/(nu+1).
// Node index (k n + j) n + i, x fastest.
struct Grid {
  double R = 10.0;
  int n = 99;
  int nu = 7;
};

enum class LateralBc { dirichlet, neumann };

// lateral step against the tightest curvature radius; hl should resolve the
// bump (hl <= rho_m/8) or lateral discretization error mimics binding
struct GridCheck {
  double hl = 0.0, hu = 0.0;
  double rho_m = 0.0;
  double threshold = 0.0;  // rho_m / 8
  bool ok = false;
};

struct Operator3d {
  Csr A;
  int64_t N = 0;
  double hl = 0.0, hu = 0.0;
  double khat1_sq = 0.0;  // discrete transverse threshold of the 3 point rule
  double kappa1_sq = 0.0;
  GridCheck check;
};

GridCheck check_grid(const RadialSurface& surf, double half_thickness,
                     const Grid& grid);

// second order FD operator of the flat-measure reduction: lateral fluxes
// with the inverse metric evaluated at face midpoints, the mixed term as
// D_x^T C12 D_y + D_y^T C12 D_x with central one-sided-dropped differences,
// a 3 point Dirichlet rule in u, and the effective potential on the diagonal.
// Transverse walls are always Dirichlet; `bc` picks the lateral closure.
// A failing grid check throws InvalidParams unless force_grid is set.
Operator3d assemble_operator(const RadialSurface& surf, double half_thickness,
                             const Grid& grid, LateralBc bc,
                             bool force_grid = false);

void write_matrix_market(const Csr& a, const std::string& path);

}  // namespace qlayer
