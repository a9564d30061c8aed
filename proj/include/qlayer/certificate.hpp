#pragma once
#include <vector>

#include "qlayer/geometry.hpp"
#include "qlayer/hamiltonian.hpp"
#include "qlayer/layer.hpp"

namespace qlayer {

// smooth plateau cutoff j(r,u) = jq(r) ju(u): 1 on the plateau, 0 outside
// [0,rj] x [-aj,aj], glued by T(y) = f(y)/(f(y)+f(1-y)), f(z)=exp(-1/z)
struct Localizer {
  double rj = 0.0, plat_r = 0.5;
  double aj = 0.0, plat_u = 0.6;
  double jq(double r) const;
  double djq(double r) const;
  double ju(double u) const;
  double dju(double u) const;
};

struct CertificateConfig {
  double r0 = 10.0;            // mollifier plateau radius, must cover the bump
  int sigma_k_min = 2;         // sigma_k = 10^{-k/2}/r0
  int sigma_k_max = 12;
  double localizer_r_frac = 1.0;   // rj as fraction of the support radius
  double localizer_plat_r = 0.5;
  double localizer_a_frac = 0.97;  // aj as fraction of a
  double localizer_plat_u = 0.6;
  int order = 32;              // Gauss order and panel counts for (r,u)
  int panels_r = 48;
  int panels_u = 16;
  double delta_min = 1e-8;     // required margin in units of kappa1^2
};

struct SigmaRow {
  int k = 0;
  double sigma = 0.0;
  double x0 = 0.0;  // sigma * r0
  double t0 = 0.0;  // ||grad phi||^2 + total curvature
  double t_min = 0.0;
  bool certified = false;
};

// variational certificate: with trial psi = phi_sigma chi_1 + eps Theta the
// shifted form value is t(eps) = t0 + 2 eps B + eps^2 C; t_min < 0 plus the
// quadrature error margin certifies an eigenvalue below kappa1^2
struct CertificateResult {
  bool certified = false;
  int certified_index = -1;  // first certifying row of `sweep`
  double kappa1_sq = 0.0;
  double tot = 0.0;   // total Gauss curvature (0 for compact deformations)
  double B = 0.0;     // cross coefficient  (>0 for nontrivial deformations)
  double C = 0.0;     // Theta form value
  double eps_star = 0.0;
  double quad_err = 0.0;       // refinement delta of B^2/C plus Tot
  double e_upper = 0.0;        // kappa1^2 + t_min/||trial||^2 at certification
  double trial_norm_sq = 0.0;
  double cross_check = 0.0;      // independent cross form b over B, minus 1
  double t_direct_rel_err = 0.0; // direct t[trial] vs quadratic expansion
  bool rayleigh_fallback = false;  // exact 2d minimization used (C <= 0)
  std::vector<SigmaRow> sweep;
  LayerValidity validity;
};

CertificateResult certify(const RadialSurface& surf, double half_thickness,
                          const CertificateConfig& cfg);

}  // namespace qlayer
