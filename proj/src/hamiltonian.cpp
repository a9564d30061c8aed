#include "qlayer/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

#include "qlayer/errors.hpp"

namespace qlayer {

TransverseModes::TransverseModes(double half_thickness)
    : a(half_thickness), d(2.0 * half_thickness) {
  if (!(half_thickness > 0.0))
    throw InvalidParams("half thickness must be positive");
}

double TransverseModes::kappa(int n) const { return n * M_PI / d; }

double TransverseModes::kappa1_sq() const {
  const double k = kappa(1);
  return k * k;
}

double TransverseModes::chi(int n, double u) const {
  const double amp = std::sqrt(2.0 / d);
  return n % 2 == 1 ? amp * std::cos(kappa(n) * u) : amp * std::sin(kappa(n) * u);
}

double TransverseModes::dchi(int n, double u) const {
  const double amp = std::sqrt(2.0 / d) * kappa(n);
  return n % 2 == 1 ? -amp * std::sin(kappa(n) * u) : amp * std::cos(kappa(n) * u);
}

LayerFields layer_fields(const CurvatureJet& c, double u) {
  LayerFields f;
  const double dm = 1.0 - u * c.km, dc = 1.0 - u * c.kc;
  f.lam_r = 1.0 / (c.g * dm * dm);
  f.lam_t = 1.0 / (dc * dc);
  f.w = dm * dc;  // equals 1 - 2Mu + Ku^2
  f.sqrtg = c.sqrtg;
  f.K = c.K;
  f.M = c.M;
  return f;
}

double potential_v2(const CurvatureJet& c, double u) {
  const double w = 1.0 - 2.0 * c.M * u + c.K * u * u;
  return (c.K - c.M * c.M) / (w * w);
}

namespace {
// rho_r = d_r ln det G^{1/4} = g_r/(4g) + w_r/(2w), all from the analytic jet
double rho_r(const CurvatureJet& c, double u) {
  const double w = 1.0 - 2.0 * c.M * u + c.K * u * u;
  const double g_r = 2.0 * c.Fp * c.Fpp;
  const double w_r = -2.0 * c.M_r * u + c.K_r * u * u;
  return 0.25 * g_r / c.g + 0.5 * w_r / w;
}

// q(r) = G^rr rho_r (odd in r); V1 = (1/r) d_r (r q) + G^rr rho_r^2
double q_of_r(const RadialSurface& surf, double r, double u) {
  const CurvatureJet c = curvature_jet(surf, r);
  const double dm = 1.0 - u * c.km;
  const double grr = 1.0 / (c.g * dm * dm);
  return grr * rho_r(c, u);
}
}  // namespace

double potential_v1(const RadialSurface& surf, double r, double u) {
  // the single remaining derivative is taken by central differences of the
  // analytic flux; everything inside is exact, so the FD error is ~1e-10
  const double dr = 1e-5;
  if (r < 1e-6) {
    // (1/r) d_r (r q) -> 2 q'(0); rho_r(0) = 0
    return 2.0 * q_of_r(surf, dr, u) / dr;
  }
  const CurvatureJet c = curvature_jet(surf, r);
  const double dm = 1.0 - u * c.km;
  const double grr = 1.0 / (c.g * dm * dm);
  const double rr = rho_r(c, u);
  const double qp = ((r + dr) * q_of_r(surf, r + dr, u) -
                     (r - dr) * q_of_r(surf, r - dr, u)) /
                    (2.0 * dr);
  return qp / r + grr * rr * rr;
}

double effective_potential(const RadialSurface& surf, double r, double u) {
  const CurvatureJet c = curvature_jet(surf, r);
  return potential_v1(surf, r, u) + potential_v2(c, u);
}

}  // namespace qlayer
