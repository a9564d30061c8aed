#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "qlayer/assemble.hpp"
#include "qlayer/errors.hpp"
#include "qlayer/geometry.hpp"
#include "qlayer/solver.hpp"

using namespace qlayer;

namespace {

// exact spectrum of the assembled plane operator: tensor sum of 1d chains.
// lateral Dirichlet chain on n nodes, step hl: (2/hl^2)(1 - cos(m pi/(n+1)))
// lateral Neumann (dropped boundary faces):    (2/hl^2)(1 - cos(m pi/n))
// transverse Dirichlet chain on nu nodes:      (2/hu^2)(1 - cos(k pi/(nu+1)))
double chain_d(double h, int m, int n) {
  const double pi = 3.14159265358979323846;
  return 2.0 / (h * h) * (1.0 - std::cos(m * pi / (n + 1)));
}
double chain_n(double h, int m, int n) {
  const double pi = 3.14159265358979323846;
  return 2.0 / (h * h) * (1.0 - std::cos(m * pi / n));
}

}  // namespace

TEST_CASE("grid check enforces curvature resolution") {
  CompactBump b(12.0, 10.0);  // rho_m ~ 1.2263, threshold ~ 0.1533
  Grid coarse{10.0, 49, 5};   // hl = 0.4
  GridCheck gc = check_grid(b, 0.4, coarse);
  CHECK_FALSE(gc.ok);
  CHECK(gc.hl == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(gc.threshold == doctest::Approx(gc.rho_m / 8.0).epsilon(1e-14));
  CHECK_THROWS_AS(assemble_operator(b, 0.4, coarse, LateralBc::dirichlet),
                  InvalidParams);
  // explicit override for convergence studies
  Operator3d op = assemble_operator(b, 0.4, coarse, LateralBc::dirichlet,
                                    /*force_grid=*/true);
  CHECK(op.N == 49LL * 49 * 5);

  Grid fine{10.0, 139, 5};  // hl ~ 0.143 < threshold
  CHECK(check_grid(b, 0.4, fine).ok);

  // the plane has no curvature scale to resolve
  Plane p;
  CHECK(check_grid(p, 1.0, coarse).ok);
  CHECK(std::isinf(check_grid(p, 1.0, coarse).rho_m));
}

TEST_CASE("assembled operator is symmetric with positive diagonal") {
  CompactBump b(12.0, 10.0);
  Grid g{6.0, 39, 5};  // hl ~ 0.3: forced, symmetric regardless
  Operator3d op = assemble_operator(b, 0.4, g, LateralBc::dirichlet, true);
  CHECK(op.A.max_asymmetry() == 0.0);  // assembly emits both triangles exactly
  CHECK(op.A.diag_min() > 0.0);
  CHECK(op.N == 39LL * 39 * 5);
  CHECK(op.khat1_sq < op.kappa1_sq);

  Operator3d on = assemble_operator(b, 0.4, g, LateralBc::neumann, true);
  CHECK(on.A.max_asymmetry() == 0.0);
}

TEST_CASE("Dirichlet minus Neumann is a nonnegative diagonal") {
  // the bracketing inequality at the matrix level: same pattern, same
  // off-diagonal entries, diagonal difference >= 0 with equality inside
  CompactBump b(12.0, 10.0);
  Grid g{6.0, 25, 3};
  Operator3d ad = assemble_operator(b, 0.4, g, LateralBc::dirichlet, true);
  Operator3d an = assemble_operator(b, 0.4, g, LateralBc::neumann, true);
  REQUIRE(ad.A.indptr == an.A.indptr);
  REQUIRE(ad.A.indices == an.A.indices);
  int strictly_positive = 0;
  for (int64_t i = 0; i < ad.N; ++i) {
    for (int64_t p = ad.A.indptr[i]; p < ad.A.indptr[i + 1]; ++p) {
      const double diff = ad.A.data[p] - an.A.data[p];
      if (ad.A.indices[p] == i) {
        CHECK(diff >= 0.0);
        if (diff > 0.0) ++strictly_positive;
      } else {
        CHECK(diff == 0.0);
      }
    }
  }
  // every lateral boundary node carries the dropped-face penalty
  CHECK(strictly_positive == (4 * 25 - 4) * 3);
}

TEST_CASE("plane eigenvalues match the separable chain oracle") {
  Plane p;
  SolveConfig cfg;
  cfg.grid = {6.0, 29, 3};
  cfg.k = 3;
  SolveResult r = solve_layer(p, 1.0, cfg);
  const double hl = 12.0 / 30.0, hu = 2.0 / 4.0;
  CHECK(r.hl == doctest::Approx(hl).epsilon(1e-14));
  CHECK(r.hu == doctest::Approx(hu).epsilon(1e-14));
  CHECK(r.khat1_sq == doctest::Approx(chain_d(hu, 1, 3)).epsilon(1e-13));

  const double l1 = chain_d(hu, 1, 3) + 2.0 * chain_d(hl, 1, 29);
  const double l2 = chain_d(hu, 1, 3) + chain_d(hl, 1, 29) + chain_d(hl, 2, 29);
  REQUIRE(r.lambda.size() == 3);
  CHECK(r.lambda[0] == doctest::Approx(l1).epsilon(1e-9));
  // the second level is a degenerate (1,2)/(2,1) pair
  CHECK(r.lambda[1] == doctest::Approx(l2).epsilon(1e-9));
  CHECK(r.lambda[2] == doctest::Approx(l2).epsilon(1e-9));
  for (double res : r.resid) CHECK(res < 1e-7 * r.lambda[0]);
  // no binding on a plane: ground state sits above the discrete threshold
  CHECK(r.lambda[0] > r.khat1_sq);
}

TEST_CASE("plane Neumann eigenvalues and the bracket ordering") {
  Plane p;
  SolveConfig cfg;
  cfg.grid = {6.0, 29, 3};
  cfg.k = 4;
  BracketResult br = bracket_threshold(p, 1.0, cfg);
  const double hl = 12.0 / 30.0, hu = 2.0 / 4.0;

  // Neumann ground state IS the discrete threshold (constant lateral mode)
  CHECK(br.neumann.lambda[0] ==
        doctest::Approx(chain_d(hu, 1, 3)).epsilon(1e-10));
  CHECK(br.neumann.lambda[1] ==
        doctest::Approx(chain_d(hu, 1, 3) + chain_n(hl, 1, 29)).epsilon(1e-9));
  for (size_t i = 0; i < br.neumann.lambda.size(); ++i)
    CHECK(br.neumann.lambda[i] <= br.dirichlet.lambda[i] + 1e-10);
}

TEST_CASE("bump bracket ordering on a matched grid") {
  CompactBump b(12.0, 10.0);
  SolveConfig cfg;
  cfg.grid = {6.0, 39, 3};
  cfg.k = 3;
  cfg.force_grid = true;  // hl = 0.3 exceeds rho_m/8, fine for an ordering test
  BracketResult br = bracket_threshold(b, 0.4, cfg);
  for (size_t i = 0; i < br.neumann.lambda.size(); ++i)
    CHECK(br.neumann.lambda[i] <= br.dirichlet.lambda[i] + 1e-10);
  CHECK(br.neumann.bc == LateralBc::neumann);
  CHECK(br.dirichlet.bc == LateralBc::dirichlet);
}

TEST_CASE("refinement study halves steps and converges at second order") {
  Plane p;
  SolveConfig cfg;
  cfg.grid = {5.0, 19, 3};
  RefinementResult rr = refinement_study(p, 1.0, cfg);
  REQUIRE(rr.steps.size() == 3);
  CHECK(rr.steps[1].grid.n == 39);
  CHECK(rr.steps[1].grid.nu == 7);
  CHECK(rr.steps[2].grid.n == 79);
  CHECK(rr.steps[2].grid.nu == 15);
  CHECK(rr.steps[0].hl == doctest::Approx(2.0 * rr.steps[1].hl).epsilon(1e-12));
  CHECK(rr.steps[1].hl == doctest::Approx(2.0 * rr.steps[2].hl).epsilon(1e-12));
  // plane eigenvalues are smooth in h^2: delta ratio close to 4
  const double d1 = rr.steps[0].lambda1 - rr.steps[1].lambda1;
  const double d2 = rr.steps[1].lambda1 - rr.steps[2].lambda1;
  CHECK(rr.ratio == doctest::Approx(d1 / d2).epsilon(1e-12));
  CHECK(rr.ratio > 3.5);
  CHECK(rr.ratio < 4.5);
}

TEST_CASE("matrix market dump round-trips the operator size") {
  Plane p;
  Grid g{3.0, 9, 3};
  Operator3d op = assemble_operator(p, 0.5, g, LateralBc::dirichlet);
  const std::string path = "mm_dump_test.mtx";
  write_matrix_market(op.A, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.find("MatrixMarket") != std::string::npos);
  // dimension line: rows cols nnz
  int64_t rows = 0, cols = 0, nnz = 0;
  in >> rows >> cols >> nnz;
  CHECK(rows == op.N);
  CHECK(cols == op.N);
  CHECK(nnz == static_cast<int64_t>(op.A.data.size()));
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("solver parameter validation") {
  Plane p;
  SolveConfig cfg;
  cfg.grid = {3.0, 9, 3};
  cfg.k = 0;
  CHECK_THROWS_AS(solve_layer(p, 0.5, cfg), InvalidParams);
  cfg.k = 1;
  cfg.shift_frac = 1.2;
  CHECK_THROWS_AS(solve_layer(p, 0.5, cfg), InvalidParams);
  cfg.shift_frac = -0.1;
  CHECK_THROWS_AS(solve_layer(p, 0.5, cfg), InvalidParams);
  cfg.shift_frac = 0.9;
  Grid bad{3.0, 0, 3};
  cfg.grid = bad;
  CHECK_THROWS_AS(solve_layer(p, 0.5, cfg), InvalidParams);
}
