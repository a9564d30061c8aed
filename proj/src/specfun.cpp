#include "qlayer/specfun.hpp"

#include <cmath>

#include "qlayer/errors.hpp"

namespace qlayer {

namespace {
constexpr double kEulerGamma = 0.57721566490153286060651209;

// e^x K_n(x) = integral_0^inf exp(-x(cosh t - 1)) cosh(nt) dt, trapezoid.
// step ~ 1/sqrt(x) keeps the discretization error below 1e-16 for x >= 2.
double scaled_integral(double x, int n) {
  const double h = std::fmin(0.22, 0.5 / std::sqrt(x));
  double sum = 0.5;  // t = 0 term: integrand is 1
  for (int k = 1;; ++k) {
    const double t = k * h;
    const double term = std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(n * t);
    sum += term;
    if (term < 1e-22 * sum) break;
    if (k > 40000) throw Error("bessel: tail did not converge");
  }
  return sum * h;
}

// ascending series, x < 2
void series_k0k1(double x, double& k0, double& k1) {
  const double q = 0.25 * x * x;
  const double lg = std::log(0.5 * x) + kEulerGamma;
  // K0 = -(ln(x/2)+g) I0 + sum H_k q^k/(k!)^2
  {
    double term = 1.0, i0 = 1.0, s = 0.0, hk = 0.0;
    for (int k = 1; k <= 60; ++k) {
      term *= q / (static_cast<double>(k) * k);
      i0 += term;
      hk += 1.0 / k;
      s += term * hk;
      if (term < 1e-19 * i0) break;
    }
    k0 = -lg * i0 + s;
  }
  // K1 = (ln(x/2)) I1 + 1/x - (x/4) sum [psi(k+1)+psi(k+2)] q^k/(k!(k+1)!)
  //    with psi(k+1)+psi(k+2) = -2g + H_k + H_{k+1}
  {
    double term = 1.0;  // q^k/(k!(k+1)!) at k=0
    double i1s = 1.0, s = -2.0 * kEulerGamma + 1.0;  // k=0: H_0 + H_1 = 1
    double hk = 0.0, hk1 = 1.0;
    double sterm = term * s;
    double ssum = sterm;
    for (int k = 1; k <= 60; ++k) {
      term *= q / (static_cast<double>(k) * (k + 1));
      i1s += term;
      hk += 1.0 / k;
      hk1 += 1.0 / (k + 1);
      ssum += term * (-2.0 * kEulerGamma + hk + hk1);
      if (term < 1e-19 * i1s) break;
    }
    const double i1 = 0.5 * x * i1s;
    k1 = std::log(0.5 * x) * i1 + 1.0 / x - 0.25 * x * ssum;
  }
}
}  // namespace

double bessel_k0(double x) {
  if (!(x > 0.0)) throw InvalidParams("bessel_k0: x must be positive");
  if (x < 2.0) {
    double k0, k1;
    series_k0k1(x, k0, k1);
    return k0;
  }
  return std::exp(-x) * scaled_integral(x, 0);
}

double bessel_k1(double x) {
  if (!(x > 0.0)) throw InvalidParams("bessel_k1: x must be positive");
  if (x < 2.0) {
    double k0, k1;
    series_k0k1(x, k0, k1);
    return k1;
  }
  return std::exp(-x) * scaled_integral(x, 1);
}

double bessel_k0_scaled(double x) {
  if (!(x > 0.0)) throw InvalidParams("bessel_k0_scaled: x must be positive");
  if (x < 2.0) {
    double k0, k1;
    series_k0k1(x, k0, k1);
    return std::exp(x) * k0;
  }
  return scaled_integral(x, 0);
}

double bessel_k1_scaled(double x) {
  if (!(x > 0.0)) throw InvalidParams("bessel_k1_scaled: x must be positive");
  if (x < 2.0) {
    double k0, k1;
    series_k0k1(x, k0, k1);
    return std::exp(x) * k1;
  }
  return scaled_integral(x, 1);
}

double bessel_k2(double x) {
  return bessel_k0(x) + 2.0 * bessel_k1(x) / x;
}

double mollifier_grad_norm_sq(double sigma, double r0) {
  const double x = sigma * r0;
  const double k0 = bessel_k0(x), k1 = bessel_k1(x);
  const double k2 = k0 + 2.0 * k1 / x;
  return M_PI * x * x * (k0 * k2 - k1 * k1) / (k0 * k0);
}

double mollifier_exterior_norm_sq(double sigma, double r0) {
  const double x = sigma * r0;
  const double k0 = bessel_k0(x), k1 = bessel_k1(x);
  return M_PI * r0 * r0 * (k1 * k1 - k0 * k0) / (k0 * k0);
}

}  // namespace qlayer
