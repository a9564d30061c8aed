#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qlayer/errors.hpp"
#include "qlayer/geometry.hpp"
#include "qlayer/layer.hpp"

using namespace qlayer;

TEST_CASE("thickness validation for the shipped bump") {
  CompactBump b(12.0, 10.0);
  LayerValidity v = validate_thickness(b, 0.4);
  CHECK(v.valid);
  CHECK(v.a == 0.4);
  // frozen: sup |k| = 0.815472, rho_m = 1.226282
  CHECK(v.sup_curv == doctest::Approx(0.8154720).epsilon(1e-5));
  CHECK(v.rho_m == doctest::Approx(1.2262823).epsilon(1e-5));
  // sandwich constants (1 -+ a/rho_m)^2
  CHECK(v.c_minus == doctest::Approx(0.4540213).epsilon(1e-4));
  CHECK(v.c_plus == doctest::Approx(1.7587774).epsilon(1e-4));
  CHECK(v.c_minus > 0.0);

  CHECK_FALSE(validate_thickness(b, 1.3).valid);
  CHECK_FALSE(validate_thickness(b, 1.2263).valid);  // just past rho_m
  CHECK(validate_thickness(b, 1.2).valid);

  CHECK_NOTHROW(require_valid_thickness(b, 0.4));
  CHECK_THROWS_AS(require_valid_thickness(b, 1.3), InvalidParams);
}

TEST_CASE("plane admits any thickness") {
  Plane p;
  for (double a : {0.1, 5.0, 1e6}) {
    LayerValidity v = validate_thickness(p, a);
    CHECK(v.valid);
    CHECK(std::isinf(v.rho_m));
    CHECK(v.sup_curv == 0.0);
    CHECK(v.c_minus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v.c_plus == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("layer metric determinant identity at random points") {
  // det(g - 2u h + u^2 III) = det g * (1 - 2Mu + Ku^2)^2: the exact identity
  // behind the flat-measure reduction
  CompactBump b(12.0, 10.0);
  const double a = 0.4;
  std::mt19937_64 rng(555111);
  std::uniform_real_distribution<double> X(-10.5, 10.5), Uu(-a, a);
  for (int it = 0; it < 500; ++it) {
    Forms f = fundamental_forms(monge_jet(b, X(rng), X(rng)));
    const double u = Uu(rng);
    LayerMetric lm = layer_metric(f, u);

    const double w = 1.0 - 2.0 * f.M * u + f.K * u * u;
    CHECK(lm.w == doctest::Approx(w).epsilon(1e-13));
    // direct determinant of the assembled metric vs the factored form
    const double det = lm.G11 * lm.G22 - lm.G12 * lm.G12;
    CHECK(lm.detG == doctest::Approx(det).epsilon(1e-11));
    CHECK(lm.detG == doctest::Approx(f.detg * w * w).epsilon(1e-10));
    CHECK(lm.detG > 0.0);  // inside the validity sandwich
  }
}

TEST_CASE("metric pinch equals squared principal retractions") {
  // eigenvalues of g^{-1} G are exactly (1 - u k+-)^2
  CompactBump b(12.0, 10.0);
  const double a = 0.4;
  LayerValidity v = validate_thickness(b, a);
  std::mt19937_64 rng(91001);
  std::uniform_real_distribution<double> X(-10.5, 10.5), Uu(-a, a);
  for (int it = 0; it < 500; ++it) {
    Forms f = fundamental_forms(monge_jet(b, X(rng), X(rng)));
    const double u = Uu(rng);
    LayerMetric lm = layer_metric(f, u);
    MetricPinch p = metric_pinch(f, lm);

    double e1 = (1.0 - u * f.kplus) * (1.0 - u * f.kplus);
    double e2 = (1.0 - u * f.kminus) * (1.0 - u * f.kminus);
    if (e1 > e2) std::swap(e1, e2);
    // near-umbilic points cost sqrt(eps) in the 2x2 eigenvalue split
    CHECK(p.lo == doctest::Approx(e1).epsilon(1e-7));
    CHECK(p.hi == doctest::Approx(e2).epsilon(1e-7));

    // sandwich containment C- <= lo <= hi <= C+ with a hair of slack
    CHECK(p.lo >= v.c_minus - 1e-10);
    CHECK(p.hi <= v.c_plus + 1e-10);
    // consistency: product of eigenvalues is detG/detg
    CHECK(p.lo * p.hi == doctest::Approx(lm.detG / f.detg).epsilon(1e-9));
  }
}

TEST_CASE("metric degenerates exactly at the focal distance") {
  // at u = 1/k+ the normal map folds: w -> 0 and the metric loses rank
  CompactBump b(12.0, 10.0);
  Forms f = fundamental_forms(monge_jet(b, 8.5, 0.0));
  REQUIRE(f.kplus > 0.0);
  const double u = 1.0 / f.kplus;
  LayerMetric lm = layer_metric(f, u);
  CHECK(std::abs(lm.w) < 1e-12);
  CHECK(std::abs(lm.detG) < 1e-10);
  MetricPinch p = metric_pinch(f, lm);
  CHECK(p.lo < 1e-10);
}
