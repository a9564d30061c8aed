#pragma once
#include <memory>
#include <string>

namespace qlayer {

// jet of a radial height profile F(r); Fp_over_r is F'(r)/r continued to r=0,
// which every smooth radial profile admits (F' is odd)
struct ProfileJet {
  double F = 0.0;
  double Fp = 0.0;
  double Fpp = 0.0;
  double Fppp = 0.0;
  double Fp_over_r = 0.0;
};

class RadialSurface {
 public:
  virtual ~RadialSurface() = default;
  virtual ProfileJet profile(double r) const = 0;
  // F vanishes identically beyond this radius (0 for the plane)
  virtual double support_radius() const = 0;
  virtual std::string name() const = 0;
};

class Plane final : public RadialSurface {
 public:
  ProfileJet profile(double) const override { return {}; }
  double support_radius() const override { return 0.0; }
  std::string name() const override { return "plane"; }
};

// F(r) = amplitude * exp(1/(t-1)), t=(r/width)^2, identically zero outside
// r = width; peak height is amplitude/e
class CompactBump final : public RadialSurface {
 public:
  CompactBump(double amplitude, double width);
  ProfileJet profile(double r) const override;
  double support_radius() const override { return width_; }
  std::string name() const override { return "bump"; }
  double amplitude() const { return amp_; }
  double width() const { return width_; }

 private:
  double amp_, width_;
};

// 2-jet of the height function at a Cartesian point of the base plane
struct MongeJet {
  double f, fx, fy, fxx, fxy, fyy;
};
MongeJet monge_jet(const RadialSurface& surf, double x, double y);

// first/second/third fundamental forms and curvature invariants at a point.
// iii is computed from the derivatives of the unit normal, not through the
// Weingarten identity, so iii + K g - 2 M h == 0 is a real cross-check.
struct Forms {
  double g11, g12, g22;
  double h11, h12, h22;
  double iii11, iii12, iii22;
  double detg;
  double K, M;
  double kplus, kminus;
};
Forms fundamental_forms(const MongeJet& jet);

// curvature data along a radius, with first radial derivatives
// (km meridional, kc circumferential principal curvature)
struct CurvatureJet {
  double km, kc;
  double km_r, kc_r;
  double K, M;
  double K_r, M_r;
  double Fp, Fpp;
  double g;      // 1 + Fp^2
  double sqrtg;
};
CurvatureJet curvature_jet(const RadialSurface& surf, double r);

// sup over [0, radius] of |k+-|, dense sampling plus local refinement
double max_principal_curvature(const RadialSurface& surf, double radius,
                               int samples = 4001);

// total Gauss curvature 2 pi int_0^S K sqrt(g) r dr (zero for any compact
// deformation of the plane), and its split into positive/negative parts
double total_gauss_curvature(const RadialSurface& surf, double tol = 1e-10);

struct TotalCurvatureSplit {
  double total, positive, negative;
};
TotalCurvatureSplit total_gauss_curvature_split(const RadialSurface& surf,
                                                double tol = 1e-9);

}  // namespace qlayer
