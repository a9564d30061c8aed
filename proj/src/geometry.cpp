#include "qlayer/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "qlayer/errors.hpp"
#include "qlayer/quadrature.hpp"

namespace qlayer {

CompactBump::CompactBump(double amplitude, double width)
    : amp_(amplitude), width_(width) {
  if (!(width > 0.0)) throw InvalidParams("bump width must be positive");
}

ProfileJet CompactBump::profile(double r) const {
  ProfileJet jet;
  const double t = (r / width_) * (r / width_);
  const double eps = 1.0 - t;
  // exp(1/(t-1)) underflows past 1/eps > ~709; treat as exactly zero there
  if (t >= 1.0 || 1.0 / eps > 700.0) return jet;
  const double w0 = std::exp(-1.0 / eps);
  const double w1 = -w0 / (eps * eps);              // dW/dt, eps^2 = (t-1)^2
  const double w2 = w0 * (2.0 * t - 1.0) / (eps * eps * eps * eps);
  const double e6 = eps * eps * eps * eps * eps * eps;
  const double w3 = -w0 * (6.0 * t * t - 6.0 * t + 1.0) / e6;
  const double s2 = width_ * width_;
  const double tp = 2.0 * r / s2;  // dt/dr
  jet.F = amp_ * w0;
  jet.Fp = amp_ * w1 * tp;
  jet.Fp_over_r = amp_ * w1 * 2.0 / s2;
  jet.Fpp = amp_ * (w2 * tp * tp + w1 * 2.0 / s2);
  jet.Fppp = amp_ * (w3 * tp * tp * tp + w2 * 3.0 * tp * 2.0 / s2);
  return jet;
}

MongeJet monge_jet(const RadialSurface& surf, double x, double y) {
  const double r = std::hypot(x, y);
  const ProfileJet p = surf.profile(r);
  MongeJet m;
  m.f = p.F;
  // f_x = F' x/r etc.; all combinations stay finite through Fp_over_r
  m.fx = p.Fp_over_r * x;
  m.fy = p.Fp_over_r * y;
  if (r > 1e-14) {
    const double cx = x / r, cy = y / r;
    const double d = p.Fpp - p.Fp_over_r;  // radial minus tangential part
    m.fxx = p.Fp_over_r + d * cx * cx;
    m.fyy = p.Fp_over_r + d * cy * cy;
    m.fxy = d * cx * cy;
  } else {
    m.fxx = m.fyy = p.Fpp;
    m.fxy = 0.0;
  }
  return m;
}

Forms fundamental_forms(const MongeJet& jet) {
  Forms f;
  const double fx = jet.fx, fy = jet.fy;
  const double W2 = 1.0 + fx * fx + fy * fy;
  const double W = std::sqrt(W2);
  f.g11 = 1.0 + fx * fx;
  f.g12 = fx * fy;
  f.g22 = 1.0 + fy * fy;
  f.detg = W2;  // det g = 1 + |grad f|^2
  f.h11 = jet.fxx / W;
  f.h12 = jet.fxy / W;
  f.h22 = jet.fyy / W;
  const double deth = f.h11 * f.h22 - f.h12 * f.h12;
  f.K = deth / f.detg;
  f.M = (f.h11 * f.g22 - 2.0 * f.h12 * f.g12 + f.h22 * f.g11) / (2.0 * f.detg);
  const double disc = std::sqrt(std::fmax(f.M * f.M - f.K, 0.0));
  f.kplus = f.M + disc;
  f.kminus = f.M - disc;
  // third form from n_{,mu} . n_{,nu} with n = (-fx,-fy,1)/W
  const double Wx = (fx * jet.fxx + fy * jet.fxy) / W;
  const double Wy = (fx * jet.fxy + fy * jet.fyy) / W;
  // n_x = v_x/W - v Wx/W^2 with v = (-fx,-fy,1)
  const double nx0 = -jet.fxx / W + fx * Wx / W2;
  const double nx1 = -jet.fxy / W + fy * Wx / W2;
  const double nx2 = -Wx / W2;
  const double ny0 = -jet.fxy / W + fx * Wy / W2;
  const double ny1 = -jet.fyy / W + fy * Wy / W2;
  const double ny2 = -Wy / W2;
  f.iii11 = nx0 * nx0 + nx1 * nx1 + nx2 * nx2;
  f.iii12 = nx0 * ny0 + nx1 * ny1 + nx2 * ny2;
  f.iii22 = ny0 * ny0 + ny1 * ny1 + ny2 * ny2;
  return f;
}

CurvatureJet curvature_jet(const RadialSurface& surf, double r) {
  const ProfileJet p = surf.profile(r);
  CurvatureJet c;
  c.Fp = p.Fp;
  c.Fpp = p.Fpp;
  c.g = 1.0 + p.Fp * p.Fp;
  c.sqrtg = std::sqrt(c.g);
  const double g32 = c.g * c.sqrtg;
  c.km = p.Fpp / g32;
  c.kc = p.Fp_over_r / c.sqrtg;
  c.km_r = p.Fppp / g32 - 3.0 * p.Fpp * p.Fpp * p.Fp / (g32 * c.g);
  if (r > 1e-12 * (1.0 + surf.support_radius())) {
    // d/dr (F'/r) = (F'' - F'/r)/r; the difference vanishes like r^2 at 0
    const double dq = (p.Fpp - p.Fp_over_r) / r;
    c.kc_r = dq / c.sqrtg - p.Fp_over_r * p.Fp * p.Fpp / (c.g * c.sqrtg);
  } else {
    c.kc_r = 0.0;  // kc is even in r
  }
  c.K = c.km * c.kc;
  c.M = 0.5 * (c.km + c.kc);
  c.K_r = c.km_r * c.kc + c.km * c.kc_r;
  c.M_r = 0.5 * (c.km_r + c.kc_r);
  return c;
}

double max_principal_curvature(const RadialSurface& surf, double radius,
                               int samples) {
  if (radius <= 0.0) return 0.0;
  auto val = [&](double r) {
    const CurvatureJet c = curvature_jet(surf, r);
    return std::fmax(std::abs(c.km), std::abs(c.kc));
  };
  double best = 0.0, rbest = 0.0;
  double h = radius / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double r = i * h;
    const double v = val(r);
    if (v > best) {
      best = v;
      rbest = r;
    }
  }
  // two rounds of local refinement around the best sample
  for (int round = 0; round < 2; ++round) {
    const double lo = std::fmax(0.0, rbest - h), hi = std::fmin(radius, rbest + h);
    h = (hi - lo) / 1000.0;
    for (int i = 0; i <= 1000; ++i) {
      const double r = lo + i * h;
      const double v = val(r);
      if (v > best) {
        best = v;
        rbest = r;
      }
    }
  }
  return best;
}

double total_gauss_curvature(const RadialSurface& surf, double tol) {
  const double S = surf.support_radius();
  if (S <= 0.0) return 0.0;
  auto f = [&](double r) {
    const CurvatureJet c = curvature_jet(surf, r);
    return 2.0 * M_PI * r * c.K * c.sqrtg;
  };
  return integrate_adaptive(f, 0.0, S, tol).value;
}

TotalCurvatureSplit total_gauss_curvature_split(const RadialSurface& surf,
                                                double tol) {
  TotalCurvatureSplit out{0.0, 0.0, 0.0};
  const double S = surf.support_radius();
  if (S <= 0.0) return out;
  auto fp = [&](double r) {
    const CurvatureJet c = curvature_jet(surf, r);
    return 2.0 * M_PI * r * std::fmax(c.K, 0.0) * c.sqrtg;
  };
  auto fm = [&](double r) {
    const CurvatureJet c = curvature_jet(surf, r);
    return 2.0 * M_PI * r * std::fmin(c.K, 0.0) * c.sqrtg;
  };
  out.positive = integrate_adaptive(fp, 0.0, S, tol).value;
  out.negative = integrate_adaptive(fm, 0.0, S, tol).value;
  out.total = out.positive + out.negative;
  return out;
}

}  // namespace qlayer
