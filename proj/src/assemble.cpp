#include "qlayer/assemble.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "qlayer/errors.hpp"
#include "qlayer/hamiltonian.hpp"
#include "qlayer/layer.hpp"

namespace qlayer {

GridCheck check_grid(const RadialSurface& surf, double half_thickness,
                     const Grid& grid) {
  if (grid.n < 1 || grid.nu < 1 || !(grid.R > 0.0))
    throw InvalidParams("grid needs R > 0, n >= 1, nu >= 1");
  const LayerValidity v = require_valid_thickness(surf, half_thickness);
  GridCheck c;
  c.hl = 2.0 * grid.R / (grid.n + 1);
  c.hu = 2.0 * half_thickness / (grid.nu + 1);
  c.rho_m = v.rho_m;
  c.threshold = v.rho_m / 8.0;
  c.ok = c.hl <= c.threshold;
  return c;
}

namespace {

// radial quantities at one lateral point, u independent
struct LateralPoint {
  double km, kc, Fp, cx, cy;
};

LateralPoint lateral_point(const RadialSurface& surf, double x, double y) {
  LateralPoint p;
  const double r = std::hypot(x, y);
  const CurvatureJet c = curvature_jet(surf, r);
  p.km = c.km;
  p.kc = c.kc;
  p.Fp = c.Fp;
  if (r > 1e-300) {
    p.cx = x / r;
    p.cy = y / r;
  } else {
    p.cx = p.cy = 0.0;
  }
  return p;
}

// inverse lateral metric in Cartesian components at one point and height
void metric_cxx(const LateralPoint& p, double u, double& c11, double& c22,
                double& c12) {
  const double dm = 1.0 - u * p.km, dc = 1.0 - u * p.kc;
  const double lam_r = 1.0 / ((1.0 + p.Fp * p.Fp) * dm * dm);
  const double lam_t = 1.0 / (dc * dc);
  c11 = lam_r * p.cx * p.cx + lam_t * p.cy * p.cy;
  c22 = lam_r * p.cy * p.cy + lam_t * p.cx * p.cx;
  c12 = (lam_r - lam_t) * p.cx * p.cy;
}

}  // namespace

Operator3d assemble_operator(const RadialSurface& surf, double half_thickness,
                             const Grid& grid, LateralBc bc, bool force_grid) {
  Operator3d op;
  op.check = check_grid(surf, half_thickness, grid);
  if (!op.check.ok && !force_grid)
    throw InvalidParams(
        "lateral step " + std::to_string(op.check.hl) +
        " exceeds rho_m/8 = " + std::to_string(op.check.threshold) +
        "; refine the grid or set force_grid");
  const int n = grid.n, nu = grid.nu;
  const double R = grid.R, a = half_thickness;
  const double hl = op.check.hl, hu = op.check.hu;
  op.hl = hl;
  op.hu = hu;
  const TransverseModes tm(a);
  op.kappa1_sq = tm.kappa1_sq();
  op.khat1_sq = (2.0 / (hu * hu)) * (1.0 - std::cos(tm.kappa(1) * hu));
  const int64_t nlat = int64_t{n} * n;
  op.N = nlat * nu;

  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = -R + hl * (i + 1);
  std::vector<double> xf(n + 1);
  for (int i = 0; i <= n; ++i) xf[i] = -R + hl * (i + 0.5);

  // u independent geometry: nodes and x faces; by the square grid symmetry
  // the y face table is the x face table with the point coordinates swapped
  std::vector<LateralPoint> nodes(static_cast<size_t>(n) * n);
  std::vector<LateralPoint> faces(static_cast<size_t>(n + 1) * n);
  std::vector<double> rnode(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      nodes[static_cast<size_t>(j) * n + i] = lateral_point(surf, xs[i], xs[j]);
      rnode[static_cast<size_t>(j) * n + i] = std::hypot(xs[i], xs[j]);
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= n; ++i)
      faces[static_cast<size_t>(j) * (n + 1) + i] =
          lateral_point(surf, xf[i], xs[j]);

  const double ihl2 = 1.0 / (hl * hl), ihu2 = 1.0 / (hu * hu);
  const bool dirichlet = bc == LateralBc::dirichlet;

  Csr& A = op.A;
  A.n = op.N;
  A.indptr.assign(1, 0);
  A.indptr.reserve(op.N + 1);
  A.indices.reserve(static_cast<size_t>(op.N) * 13);
  A.data.reserve(static_cast<size_t>(op.N) * 13);

  // per level work tables
  std::vector<double> c11f(faces.size());  // C11 at x faces, /hl^2 applied
  std::vector<double> w12(nodes.size());   // 0.25 C12 / hl^2 at nodes
  std::vector<double> vn(nodes.size());    // effective potential at nodes

  for (int k = 0; k < nu; ++k) {
    const double u = -a + hu * (k + 1);
    for (size_t t = 0; t < faces.size(); ++t) {
      double c11, c22, c12;
      metric_cxx(faces[t], u, c11, c22, c12);
      c11f[t] = c11 * ihl2;
    }
    for (size_t t = 0; t < nodes.size(); ++t) {
      double c11, c22, c12;
      metric_cxx(nodes[t], u, c11, c22, c12);
      w12[t] = 0.25 * c12 * ihl2;
      vn[t] = effective_potential(surf, rnode[t], u);
    }
    const int64_t base = int64_t{k} * nlat;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const size_t me = static_cast<size_t>(j) * n + i;
        const double cl = c11f[static_cast<size_t>(j) * (n + 1) + i];
        const double cr = c11f[static_cast<size_t>(j) * (n + 1) + i + 1];
        const double cd = c11f[static_cast<size_t>(i) * (n + 1) + j];
        const double cu = c11f[static_cast<size_t>(i) * (n + 1) + j + 1];
        double diag = 2.0 * ihu2 + vn[me];
        diag += dirichlet ? cl + cr + cd + cu
                          : cl * (i > 0) + cr * (i < n - 1) + cd * (j > 0) +
                                cu * (j < n - 1);
        auto corner = [&](int dx, int dy) {
          const size_t zx = static_cast<size_t>(static_cast<int64_t>(me) + dx);
          const size_t zy =
              static_cast<size_t>(static_cast<int64_t>(me) + int64_t{dy} * n);
          return -static_cast<double>(dx * dy) * (w12[zx] + w12[zy]);
        };
        auto push = [&](int64_t col, double val) {
          A.indices.push_back(static_cast<int32_t>(col));
          A.data.push_back(val);
        };
        const int64_t row = base + static_cast<int64_t>(me);
        if (k > 0) push(row - nlat, -ihu2);
        if (j > 0) {
          if (i > 0) push(row - n - 1, corner(-1, -1));
          push(row - n, -cd);
          if (i < n - 1) push(row - n + 1, corner(1, -1));
        }
        if (i > 0) push(row - 1, -cl);
        push(row, diag);
        if (i < n - 1) push(row + 1, -cr);
        if (j < n - 1) {
          if (i > 0) push(row + n - 1, corner(-1, 1));
          push(row + n, -cu);
          if (i < n - 1) push(row + n + 1, corner(1, 1));
        }
        if (k < nu - 1) push(row + nlat, -ihu2);
        A.indptr.push_back(static_cast<int64_t>(A.indices.size()));
      }
  }
  return op;
}

void write_matrix_market(const Csr& a, const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot open " + path + " for writing");
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
  std::fprintf(f, "%lld %lld %zu\n", static_cast<long long>(a.n),
               static_cast<long long>(a.n), a.data.size());
  for (int64_t i = 0; i < a.n; ++i)
    for (int64_t p = a.indptr[i]; p < a.indptr[i + 1]; ++p)
      std::fprintf(f, "%lld %d %.17g\n", static_cast<long long>(i + 1),
                   a.indices[p] + 1, a.data[p]);
  std::fclose(f);
}

}  // namespace qlayer
