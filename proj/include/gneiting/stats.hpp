#pragma once
#include <functional>
#include <vector>

#include "gneiting/common.hpp"

namespace gneiting {

struct KsResult {
  double statistic = 0.0;  // sup |F_hat - F|
  double p_value = 1.0;    // asymptotic Kolmogorov tail at lambda = sqrt(n) D
};

// One-sample Kolmogorov-Smirnov test of `values` against N(0,1).
// standardize=true first centers/scales by the sample mean and sd.
KsResult ks_normal_test(std::vector<double> values, bool standardize = true);

// KS test against an arbitrary reference CDF (e.g. an inverted limit law).
// Throws CDFUnavailable if the CDF returns a non-finite or non-monotone value.
KsResult ks_against(std::vector<double> values, const std::function<double(double)>& cdf);

// Asymptotic Kolmogorov tail probability 2 sum (-1)^{j-1} exp(-2 j^2 x^2).
double kolmogorov_tail(double lambda);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double se_slope = 0.0;
  double r2 = 0.0;
  std::vector<double> t_values;
  std::vector<double> residuals;  // log-scale fit residuals, one per ladder point
};

// Weighted least squares of log(var) on log(t); weights 1/sigma_i^2 with
// sigma_i = se_i / var_i (the log-scale standard error).
ExponentFit exponent_fit(const std::vector<double>& t, const std::vector<double>& var,
                         const std::vector<double>& se);

// z-scores (k_stat - kappa_theory)/stderr for the third and fourth cumulant
// of an ensemble, given jackknife stderrs.
struct CumulantZ {
  double z3 = 0.0;
  double z4 = 0.0;
};
CumulantZ cumulant_compare(double k3, double se_k3, double k4, double se_k4,
                           double kappa3_theory, double kappa4_theory);

}  // namespace gneiting
