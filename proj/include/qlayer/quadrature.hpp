#pragma once
#include <functional>
#include <vector>

namespace qlayer {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1,1]
  std::vector<double> w;
};

// Gauss-Legendre rule of order n (nodes by Newton on the recurrence, cached per n)
const GaussRule& gauss_rule(int n);

// composite Gauss: `panels` equal panels of order n on [a,b]
double integrate(const std::function<double(double)>& f, double a, double b,
                 int order = 32, int panels = 1);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;  // estimate from the final bisection level
  int panels = 0;
};

// panel-bisection adaptive Gauss; stops when a panel's refinement delta
// is below tol*(1+|total|) or depth runs out
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  double a, double b, double tol = 1e-12,
                                  int order = 16, int max_depth = 24);

// tensor Gauss on [ax,bx] x [ay,by] with px*py panels
double integrate2(const std::function<double(double, double)>& f, double ax,
                  double bx, double ay, double by, int order = 32, int px = 8,
                  int py = 4);

}  // namespace qlayer
