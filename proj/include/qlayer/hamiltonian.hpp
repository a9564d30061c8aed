#pragma once
#include "qlayer/geometry.hpp"

namespace qlayer {

// Dirichlet modes of -d^2/du^2 on (-a, a): kappa_n = n pi / (2a),
// chi_n = sqrt(1/a) cos(kappa_n u) for odd n, sin for even n
struct TransverseModes {
  explicit TransverseModes(double half_thickness);
  double a, d;  // d = 2a
  double kappa(int n) const;
  double kappa1_sq() const;
  double chi(int n, double u) const;
  double dchi(int n, double u) const;
};

// inverse lateral metric eigenvalues of the layer over a radial surface:
// radial 1/(g (1-u km)^2) and tangential 1/(1-u kc)^2, plus shared factors
struct LayerFields {
  double lam_r, lam_t;
  double w;      // 1 - 2Mu + Ku^2
  double sqrtg;  // sqrt(1 + Fp^2)
  double K, M;
};
LayerFields layer_fields(const CurvatureJet& c, double u);

// effective potential of the flat-measure reduction, V = V1 + V2:
//   V2 = (K - M^2)/w^2 exactly,
//   V1 = (1/r) d_r (r G^rr rho_r) + G^rr rho_r^2,  rho = ln det G^{1/4}
double potential_v2(const CurvatureJet& c, double u);
double potential_v1(const RadialSurface& surf, double r, double u);
double effective_potential(const RadialSurface& surf, double r, double u);

}  // namespace qlayer
