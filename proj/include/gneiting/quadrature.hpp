#pragma once
#include <functional>
#include <vector>

namespace gneiting {

// Adaptive Simpson on [a,b] with absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10, int max_depth = 50);

// n-point Gauss-Legendre rule on [-1,1] (nodes by Newton on P_n).
struct GaussLegendre {
  explicit GaussLegendre(int n);
  std::vector<double> node, weight;

  // Integrate f over [a,b] with this rule.
  template <class F>
  double apply(F&& f, double a, double b) const {
    double c = 0.5 * (a + b), h = 0.5 * (b - a), s = 0.0;
    for (std::size_t i = 0; i < node.size(); ++i) s += weight[i] * f(c + h * node[i]);
    return s * h;
  }
};

// n-point Gauss-Hermite rule for the probabilists' weight: E[f(N)] with
// N standard normal equals sum w_i f(x_i). Nodes via the symmetric
// tridiagonal Jacobi matrix (LAPACK dstev).
struct GaussHermite {
  explicit GaussHermite(int n);
  std::vector<double> node, weight;

  template <class F>
  double expectation(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < node.size(); ++i) s += weight[i] * f(node[i]);
    return s;
  }
};

// Composite Gauss-Legendre on a graded mesh of [0,1]: cell edges at
// (i/m)^grade. Derivative singularities at 0 integrate to near machine
// precision; for a value singularity x^{-a} the first-cell error is scale
// invariant, so accuracy improves with the grade (error ~ m^{-grade(1-a)}).
double integrate_graded01(const std::function<double(double)>& f, int cells, double grade,
                          int points_per_cell = 16);

// Surface measure of the unit sphere in R^d: 2 pi^{d/2} / Gamma(d/2).
double sphere_surface(int d);

// Volume of the unit ball in R^d.
double ball_volume(int d);

}  // namespace gneiting
