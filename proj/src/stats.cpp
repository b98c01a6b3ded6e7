#include "gneiting/stats.hpp"

#include <algorithm>
#include <cmath>

#include "gneiting/hermite.hpp"

namespace gneiting {

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    double term = std::exp(-2.0 * double(j) * double(j) * lambda * lambda);
    s += (j % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * s));
}

KsResult ks_normal_test(std::vector<double> values, bool standardize) {
  std::size_t n = values.size();
  if (n < 8) throw ConfigError("KS test needs at least 8 points");
  if (standardize) {
    double m = pairwise_sum(values) / double(n);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    double sd = std::sqrt(ss / double(n - 1));
    if (!(sd > 0.0)) throw VarUndefined("KS standardization with zero variance");
    for (double& v : values) v = (v - m) / sd;
  }
  std::sort(values.begin(), values.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double cdf = normal_cdf(values[i]);
    double hi = double(i + 1) / double(n) - cdf;
    double lo = cdf - double(i) / double(n);
    d = std::max(d, std::max(hi, lo));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_tail(std::sqrt(double(n)) * d);
  return r;
}

KsResult ks_against(std::vector<double> values, const std::function<double(double)>& cdf) {
  std::size_t n = values.size();
  if (n < 8) throw ConfigError("KS test needs at least 8 points");
  std::sort(values.begin(), values.end());
  double d = 0.0, prev = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = cdf(values[i]);
    if (!std::isfinite(f) || f < prev - 1e-12 || f < -1e-9 || f > 1.0 + 1e-9)
      throw CDFUnavailable("reference CDF is non-finite or non-monotone");
    prev = f;
    d = std::max(d, std::max(double(i + 1) / double(n) - f, f - double(i) / double(n)));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_tail(std::sqrt(double(n)) * d);
  return r;
}

CumulantZ cumulant_compare(double k3, double se_k3, double k4, double se_k4,
                           double kappa3_theory, double kappa4_theory) {
  if (!(se_k3 > 0.0) || !(se_k4 > 0.0))
    throw ConfigError("cumulant_compare needs positive stderrs");
  return CumulantZ{(k3 - kappa3_theory) / se_k3, (k4 - kappa4_theory) / se_k4};
}

ExponentFit exponent_fit(const std::vector<double>& t, const std::vector<double>& var,
                         const std::vector<double>& se) {
  std::size_t n = t.size();
  if (n != var.size() || n != se.size()) throw ConfigError("exponent_fit: length mismatch");
  if (n < 4) throw DegenerateLadder("exponent fit needs at least four ladder points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(t[i] > t[i - 1])) throw DegenerateLadder("ladder values must be strictly increasing");
  double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
  std::vector<double> x(n), y(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(t[i] > 0.0) || !(var[i] > 0.0))
      throw DegenerateLadder("ladder and variance values must be positive");
    x[i] = std::log(t[i]);
    y[i] = std::log(var[i]);
    double sigma = se[i] > 0.0 ? se[i] / var[i] : 1.0;  // log-scale se
    w[i] = 1.0 / (sigma * sigma);
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
    swxx += w[i] * x[i] * x[i];
    swxy += w[i] * x[i] * y[i];
  }
  double det = sw * swxx - swx * swx;
  if (!(det > 0.0)) throw DegenerateLadder("exponent fit design is singular");
  ExponentFit f;
  f.slope = (sw * swxy - swx * swy) / det;
  f.intercept = (swxx * swy - swx * swxy) / det;
  f.se_slope = std::sqrt(sw / det);
  double ybar = swy / sw, ss_tot = 0.0, ss_res = 0.0;
  f.t_values = t;
  f.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double fit = f.intercept + f.slope * x[i];
    f.residuals[i] = y[i] - fit;
    ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
    ss_res += w[i] * (y[i] - fit) * (y[i] - fit);
  }
  f.r2 = ss_tot > 0.0 ? std::min(1.0, std::max(0.0, 1.0 - ss_res / ss_tot)) : 0.0;
  return f;
}

}  // namespace gneiting
