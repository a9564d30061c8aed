#include "qlayer/layer.hpp"

#include <cmath>

#include "qlayer/errors.hpp"

namespace qlayer {

LayerValidity validate_thickness(const RadialSurface& surf, double a) {
  LayerValidity v;
  v.a = a;
  const double S = surf.support_radius();
  v.sup_curv = S > 0.0 ? max_principal_curvature(surf, S) : 0.0;
  v.rho_m = v.sup_curv > 0.0 ? 1.0 / v.sup_curv : HUGE_VAL;
  v.valid = a > 0.0 && a < v.rho_m;
  const double q = v.sup_curv * a;  // a/rho_m
  v.c_minus = (1.0 - q) * (1.0 - q);
  v.c_plus = (1.0 + q) * (1.0 + q);
  return v;
}

LayerValidity require_valid_thickness(const RadialSurface& surf, double a) {
  LayerValidity v = validate_thickness(surf, a);
  if (!(a > 0.0)) throw InvalidParams("half thickness must be positive");
  if (!v.valid)
    throw InvalidParams("layer too thick: a = " + std::to_string(a) +
                        " >= rho_m = " + std::to_string(v.rho_m));
  return v;
}

LayerMetric layer_metric(const Forms& f, double u) {
  LayerMetric m;
  m.G11 = f.g11 - 2.0 * u * f.h11 + u * u * f.iii11;
  m.G12 = f.g12 - 2.0 * u * f.h12 + u * u * f.iii12;
  m.G22 = f.g22 - 2.0 * u * f.h22 + u * u * f.iii22;
  m.detG = m.G11 * m.G22 - m.G12 * m.G12;
  m.w = 1.0 - 2.0 * f.M * u + f.K * u * u;
  return m;
}

MetricPinch metric_pinch(const Forms& f, const LayerMetric& m) {
  // generalized eigenvalues of (G, g): det(G - t g) = 0, 2x2 closed form
  const double detg = f.g11 * f.g22 - f.g12 * f.g12;
  const double b = f.g11 * m.G22 + f.g22 * m.G11 - 2.0 * f.g12 * m.G12;
  const double c = m.detG;
  const double disc = std::sqrt(std::fmax(b * b - 4.0 * detg * c, 0.0));
  return {(b - disc) / (2.0 * detg), (b + disc) / (2.0 * detg)};
}

}  // namespace qlayer
