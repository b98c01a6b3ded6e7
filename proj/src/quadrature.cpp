#include "gneiting/quadrature.hpp"

#include <cmath>
#include <cstdlib>

#include "gneiting/common.hpp"

extern "C" void dstev_(const char* jobz, const int* n, double* d, double* e, double* z,
                       const int* ldz, double* work, int* info);

namespace gneiting {
namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b, double fb,
             double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, fa, m, fm, flm);
  double right = simpson(m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth) {
  if (!(b > a)) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson(a, fa, b, fb, fm);
  return adapt(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw ConfigError("Gauss-Legendre order must be positive");
  node.resize(n);
  weight.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, Newton refinement on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double pn = 1.0, pm = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = pm;
        pm = pn;
        pn = ((2.0 * k + 1.0) * x * pm - k * p2) / (k + 1.0);
      }
      pp = n * (x * pn - pm) / (x * x - 1.0);
      double dx = pn / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    node[i] = -x;
    node[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weight[i] = w;
    weight[n - 1 - i] = w;
  }
}

GaussHermite::GaussHermite(int n) {
  if (n < 1) throw ConfigError("Gauss-Hermite order must be positive");
  // Probabilists' Hermite: Jacobi matrix has zero diagonal, off-diagonal
  // sqrt(k). Eigenvalues are the nodes; weights are first-component^2.
  std::vector<double> d(n, 0.0), e(n - 1 > 0 ? n - 1 : 0), z(std::size_t(n) * n),
      work(n > 1 ? 2 * n - 2 : 1);
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(double(k));
  int info = 0;
  dstev_("V", &n, d.data(), e.data(), z.data(), &n, work.data(), &info);
  if (info != 0) throw NumericalError("dstev failed computing Gauss-Hermite nodes");
  node.resize(n);
  weight.resize(n);
  for (int i = 0; i < n; ++i) {
    node[i] = d[i];
    double v = z[std::size_t(i) * n];  // first component of eigenvector i
    weight[i] = v * v;                 // total mass 1 for the normal law
  }
}

double integrate_graded01(const std::function<double(double)>& f, int cells, double grade,
                          int points_per_cell) {
  static thread_local int cached_p = -1;
  static thread_local GaussLegendre* rule = nullptr;
  if (cached_p != points_per_cell) {
    delete rule;
    rule = new GaussLegendre(points_per_cell);
    cached_p = points_per_cell;
  }
  double total = 0.0;
  double prev = 0.0;
  for (int i = 1; i <= cells; ++i) {
    double edge = std::pow(double(i) / cells, grade);
    total += rule->apply(f, prev, edge);
    prev = edge;
  }
  return total;
}

double sphere_surface(int d) {
  if (d < 1) throw ConfigError("dimension must be positive");
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

double ball_volume(int d) { return sphere_surface(d) / d; }

}  // namespace gneiting
