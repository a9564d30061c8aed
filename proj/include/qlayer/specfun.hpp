#pragma once

namespace qlayer {

// modified Bessel functions of the second kind, double precision.
// series below x=2, exponentially scaled integral representation above.
double bessel_k0(double x);
double bessel_k1(double x);
double bessel_k2(double x);  // K2 = K0 + 2 K1 / x
double bessel_k0_scaled(double x);  // e^x K0(x)
double bessel_k1_scaled(double x);

// lateral mollifier phi_sigma(r) = min{1, K0(sigma r)/K0(sigma r0)}:
// closed forms at x0 = sigma*r0.
//
// ||grad phi||^2 over the plane   = pi x0^2 (K0 K2 - K1^2)/K0^2
// ||phi||^2 over the exterior r>r0 = pi r0^2 (K1^2 - K0^2)/K0^2
double mollifier_grad_norm_sq(double sigma, double r0);
double mollifier_exterior_norm_sq(double sigma, double r0);

}  // namespace qlayer
