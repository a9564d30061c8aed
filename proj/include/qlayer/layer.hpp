#pragma once
#include "qlayer/geometry.hpp"

namespace qlayer {

// hard-wall layer of half-thickness a over the surface; the normal map is a
// diffeomorphism iff a < rho_m = 1/sup|k+-|
struct LayerValidity {
  double a = 0.0;
  double sup_curv = 0.0;
  double rho_m = 0.0;  // infinity encoded as HUGE_VAL (plane)
  bool valid = false;
  double c_minus = 0.0, c_plus = 0.0;  // sandwich constants (1 -+ a/rho_m)^2
};

LayerValidity validate_thickness(const RadialSurface& surf, double a);
// same, but throws InvalidParams when a >= rho_m
LayerValidity require_valid_thickness(const RadialSurface& surf, double a);

// pulled-back layer metric G = g - 2u h + u^2 III at a surface point
struct LayerMetric {
  double G11, G12, G22;
  double detG;
  double w;  // 1 - 2Mu + Ku^2, so that detG = detg * w^2
};

LayerMetric layer_metric(const Forms& forms, double u);

// eigenvalue range of g^{-1} G (for the sandwich C- g <= G <= C+ g)
struct MetricPinch {
  double lo, hi;
};
MetricPinch metric_pinch(const Forms& forms, const LayerMetric& lm);

}  // namespace qlayer
