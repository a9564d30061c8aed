#include "qlayer/certificate.hpp"

#include <cmath>

#include "qlayer/errors.hpp"
#include "qlayer/quadrature.hpp"
#include "qlayer/specfun.hpp"

namespace qlayer {

namespace {
double bump_f(double z) { return z > 1e-300 ? std::exp(-1.0 / z) : 0.0; }
double bump_fp(double z) { return z > 1e-300 ? std::exp(-1.0 / z) / (z * z) : 0.0; }

double tfun(double y) {
  const double f = bump_f(y), g = bump_f(1.0 - y);
  return f / (f + g);
}
double tfun_d(double y) {
  const double f = bump_f(y), g = bump_f(1.0 - y);
  const double fp = bump_fp(y), gp = bump_fp(1.0 - y);
  const double den = f + g;
  return (fp * g + f * gp) / (den * den);
}
}  // namespace

double Localizer::jq(double r) const {
  if (r >= rj) return 0.0;
  if (r <= plat_r * rj) return 1.0;
  return tfun((1.0 - r / rj) / (1.0 - plat_r));
}
double Localizer::djq(double r) const {
  if (r >= rj || r <= plat_r * rj) return 0.0;
  return -tfun_d((1.0 - r / rj) / (1.0 - plat_r)) / (rj * (1.0 - plat_r));
}
double Localizer::ju(double u) const {
  const double au = std::abs(u);
  if (au >= aj) return 0.0;
  if (au <= plat_u * aj) return 1.0;
  return tfun((1.0 - au / aj) / (1.0 - plat_u));
}
double Localizer::dju(double u) const {
  const double au = std::abs(u);
  if (au >= aj || au <= plat_u * aj) return 0.0;
  const double sgn = u >= 0.0 ? 1.0 : -1.0;
  return -sgn * tfun_d((1.0 - au / aj) / (1.0 - plat_u)) / (aj * (1.0 - plat_u));
}

namespace {

// everything the sigma sweep needs, accumulated in one tensor pass
struct QuadAccum {
  double B_int = 0.0;   // int 2 pi r sqrt(g) j^2 (Ku-M)^2 sin^2 / w
  double q1 = 0.0;      // int meas lam_r Theta_r^2      (meas = 2 pi r sqrt(g) w)
  double q2 = 0.0;      // int meas Theta_u^2
  double nn = 0.0;      // int meas Theta^2
  double b = 0.0;       // int meas (chi' Theta_u - kap1^2 chi Theta)
  double m = 0.0;       // int meas chi Theta
  double npsi = 0.0;    // int meas chi^2   (curved part of ||psi||^2)
};

struct ThetaEval {
  double val, dr, du;
};

ThetaEval theta_eval(const CurvatureJet& c, const Localizer& loc,
                     const TransverseModes& tm, double cpre, double r,
                     double u) {
  const double kap = tm.kappa(1);
  const double w = 1.0 - 2.0 * c.M * u + c.K * u * u;
  const double w_r = -2.0 * c.M_r * u + c.K_r * u * u;
  const double w_u = -2.0 * c.M + 2.0 * c.K * u;
  const double P = (c.K * u - c.M) / w;
  const double P_r = (c.K_r * u - c.M_r) / w - (c.K * u - c.M) * w_r / (w * w);
  const double P_u = c.K / w - (c.K * u - c.M) * w_u / (w * w);
  const double jqv = loc.jq(r), juv = loc.ju(u);
  const double j2 = jqv * jqv * juv * juv;
  const double sn = std::sin(kap * u), cs = std::cos(kap * u);
  ThetaEval th;
  th.val = cpre * j2 * P * sn;
  th.dr = cpre * sn * (2.0 * jqv * loc.djq(r) * juv * juv * P + j2 * P_r);
  th.du = cpre * (2.0 * juv * loc.dju(u) * jqv * jqv * P * sn +
                  j2 * (P_u * sn + P * kap * cs));
  return th;
}

QuadAccum quad_pass(const RadialSurface& surf, const Localizer& loc,
                    const TransverseModes& tm, int order, int px, int py) {
  const double S = surf.support_radius();
  const double a = tm.a;
  const double kap = tm.kappa(1);
  const double cpre = M_PI * std::pow(2.0 / tm.d, 1.5);
  const GaussRule& g = gauss_rule(order);
  QuadAccum acc;
  const double hr = S / px, hu = 2.0 * a / py;
  for (int p = 0; p < px; ++p) {
    const double mr = (p + 0.5) * hr, halfr = 0.5 * hr;
    for (size_t i = 0; i < g.x.size(); ++i) {
      const double r = mr + halfr * g.x[i];
      const double wr = g.w[i] * halfr;
      const CurvatureJet c = curvature_jet(surf, r);
      const double jqv = loc.jq(r);
      const double ring = 2.0 * M_PI * r * c.sqrtg;
      for (int q = 0; q < py; ++q) {
        const double mu = -a + (q + 0.5) * hu, halfu = 0.5 * hu;
        for (size_t j = 0; j < g.x.size(); ++j) {
          const double u = mu + halfu * g.x[j];
          const double wt = wr * g.w[j] * halfu;
          const LayerFields lf = layer_fields(c, u);
          const double meas = ring * lf.w;
          const ThetaEval th = theta_eval(c, loc, tm, cpre, r, u);
          const double chi = tm.chi(1, u), dchi = tm.dchi(1, u);
          const double sn = std::sin(kap * u);
          const double juv = loc.ju(u);
          const double j2 = jqv * jqv * juv * juv;
          const double kum = lf.K * u - lf.M;
          acc.B_int += wt * ring * j2 * kum * kum * sn * sn / lf.w;
          acc.q1 += wt * meas * lf.lam_r * th.dr * th.dr;
          acc.q2 += wt * meas * th.du * th.du;
          acc.nn += wt * meas * th.val * th.val;
          acc.b += wt * meas * (dchi * th.du - kap * kap * chi * th.val);
          acc.m += wt * meas * chi * th.val;
          acc.npsi += wt * meas * chi * chi;
        }
      }
    }
  }
  return acc;
}

// direct quadrature of the shifted form at chi_1 + eps Theta over the curved
// region; the flat remainder contributes exactly ||grad phi||^2 since mode
// normalization kills the threshold shift there
double t_direct_curved(const RadialSurface& surf, const Localizer& loc,
                       const TransverseModes& tm, double eps, int order,
                       int px, int py) {
  const double S = surf.support_radius();
  const double a = tm.a;
  const double kap = tm.kappa(1);
  const double cpre = M_PI * std::pow(2.0 / tm.d, 1.5);
  auto f = [&](double r, double u) {
    const CurvatureJet c = curvature_jet(surf, r);
    const LayerFields lf = layer_fields(c, u);
    const double meas = 2.0 * M_PI * r * c.sqrtg * lf.w;
    const ThetaEval th = theta_eval(c, loc, tm, cpre, r, u);
    const double xi = tm.chi(1, u) + eps * th.val;
    const double xi_r = eps * th.dr;
    const double xi_u = tm.dchi(1, u) + eps * th.du;
    return meas * (lf.lam_r * xi_r * xi_r + xi_u * xi_u - kap * kap * xi * xi);
  };
  return integrate2(f, 0.0, S, -a, a, order, px, py);
}

}  // namespace

CertificateResult certify(const RadialSurface& surf, double half_thickness,
                          const CertificateConfig& cfg) {
  CertificateResult res;
  res.validity = require_valid_thickness(surf, half_thickness);
  const TransverseModes tm(half_thickness);
  res.kappa1_sq = tm.kappa1_sq();
  const double S = surf.support_radius();
  if (!(cfg.r0 > 0.0)) throw InvalidParams("certificate r0 must be positive");
  if (cfg.r0 < S)
    throw NonAdmissibleTrial(
        "mollifier plateau radius r0 must cover the deformation (r0 >= " +
        std::to_string(S) + ")");
  if (cfg.sigma_k_min > cfg.sigma_k_max)
    throw InvalidParams("empty sigma sweep");

  res.tot = total_gauss_curvature(surf);

  Localizer loc;
  loc.plat_r = cfg.localizer_plat_r;
  loc.plat_u = cfg.localizer_plat_u;
  loc.rj = cfg.localizer_r_frac * S;
  loc.aj = cfg.localizer_a_frac * half_thickness;

  double B = 0.0, C = 0.0, b = 0.0, m = 0.0, nn = 0.0, npsi_curved = 0.0;
  double dB2C = 0.0;
  const double pref_B = M_PI * M_PI * std::pow(2.0 / tm.d, 3.0);
  const double kap2 = res.kappa1_sq;
  const bool curved = S > 0.0 && loc.rj > 0.0;
  if (curved) {
    const QuadAccum a0 =
        quad_pass(surf, loc, tm, cfg.order, cfg.panels_r, cfg.panels_u);
    const QuadAccum a1 = quad_pass(surf, loc, tm, cfg.order, 2 * cfg.panels_r,
                                   2 * cfg.panels_u);
    B = pref_B * a1.B_int;
    C = a1.q1 + a1.q2 - kap2 * a1.nn;
    b = a1.b;
    m = a1.m;
    nn = a1.nn;
    npsi_curved = a1.npsi;
    const double B0 = pref_B * a0.B_int;
    const double C0 = a0.q1 + a0.q2 - kap2 * a0.nn;
    const double q_ref = C != 0.0 ? B * B / C : 0.0;
    const double q_base = C0 != 0.0 ? B0 * B0 / C0 : 0.0;
    dB2C = std::abs(q_ref - q_base);
    res.cross_check = B != 0.0 ? b / B - 1.0 : 0.0;
  }
  res.B = B;
  res.C = C;
  // the computed total curvature stands in for an exact zero inside t0, so
  // its magnitude counts as quadrature error in full
  res.quad_err = dB2C + std::abs(res.tot);

  double gain = 0.0;  // B^2/C, the sigma independent improvement over t0
  if (C > 0.0) {
    res.eps_star = -B / C;
    gain = B * B / C;
  } else if (curved && B != 0.0) {
    res.rayleigh_fallback = true;
  }

  // flat pieces of ||psi||^2: phi == 1 on the annulus S <= r <= r0
  const double annulus = M_PI * (cfg.r0 * cfg.r0 - S * S);

  for (int k = cfg.sigma_k_min; k <= cfg.sigma_k_max; ++k) {
    SigmaRow row;
    row.k = k;
    row.sigma = std::pow(10.0, -0.5 * k) / cfg.r0;
    row.x0 = row.sigma * cfg.r0;
    row.t0 = mollifier_grad_norm_sq(row.sigma, cfg.r0) + res.tot;
    double eps_row = res.eps_star;
    if (res.rayleigh_fallback) {
      // C <= 0 with coupling: minimize the full Rayleigh quotient in eps;
      // stationarity of (t0+2eB+e^2C)/(n0+2em+e^2nn) is quadratic in e
      const double n0 = npsi_curved + annulus +
                        mollifier_exterior_norm_sq(row.sigma, cfg.r0);
      const double A2 = C * m - B * nn;
      const double A1 = C * n0 - row.t0 * nn;
      const double A0 = B * n0 - row.t0 * m;
      auto rq = [&](double e) {
        return (row.t0 + 2.0 * e * B + e * e * C) /
               (n0 + 2.0 * e * m + e * e * nn);
      };
      if (A2 != 0.0) {
        const double disc = std::sqrt(std::fmax(A1 * A1 - 4.0 * A2 * A0, 0.0));
        const double e1 = (-A1 + disc) / (2.0 * A2);
        const double e2 = (-A1 - disc) / (2.0 * A2);
        eps_row = rq(e1) < rq(e2) ? e1 : e2;
      } else if (A1 != 0.0) {
        eps_row = -A0 / A1;
      }
      row.t_min = row.t0 + 2.0 * eps_row * B + eps_row * eps_row * C;
    } else {
      row.t_min = row.t0 - gain;
    }
    row.certified = row.t_min + res.quad_err < -cfg.delta_min * kap2;
    if (row.certified && res.certified_index < 0) {
      res.certified_index = static_cast<int>(res.sweep.size());
      res.certified = true;
      res.eps_star = eps_row;
      const double ext = mollifier_exterior_norm_sq(row.sigma, cfg.r0);
      const double n0 = npsi_curved + annulus + ext;
      res.trial_norm_sq = n0 + 2.0 * eps_row * m + eps_row * eps_row * nn;
      res.e_upper = kap2 + row.t_min / res.trial_norm_sq;
    }
    res.sweep.push_back(row);
  }

  // independent evaluation of t at eps*: re-integrate the squared form and
  // compare with the quadratic expansion through the measured cross term
  if (curved && !res.sweep.empty()) {
    const SigmaRow& row = res.certified_index >= 0
                              ? res.sweep[res.certified_index]
                              : res.sweep.back();
    const double eps = res.eps_star;
    const double direct = t_direct_curved(surf, loc, tm, eps, cfg.order,
                                          2 * cfg.panels_r, 2 * cfg.panels_u) +
                          mollifier_grad_norm_sq(row.sigma, cfg.r0);
    const double expanded = row.t0 + 2.0 * eps * b + eps * eps * C;
    res.t_direct_rel_err = std::abs(direct - expanded) /
                           std::fmax(std::abs(expanded), 1e-30);
  }
  return res;
}

}  // namespace qlayer
