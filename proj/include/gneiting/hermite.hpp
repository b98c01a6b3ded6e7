#pragma once
#include <functional>
#include <vector>

#include "gneiting/common.hpp"

namespace gneiting {

// Probabilists' Hermite polynomial H_n(x): H_0=1, H_1=x,
// H_{n+1} = x H_n - n H_{n-1}.
double hermite_poly(int n, double x);

// Standard normal pdf and cdf.
double normal_pdf(double x);
double normal_cdf(double x);

enum class FunctionalKind { HermitePoly, IndicatorAbs, Indicator, Power, UserCallable };

// A square-integrable function of a standard normal, carrying its Hermite
// expansion phi(x) = sum_q a_q H_q(x), Hermite rank, and chaos L2 norm.
class HermiteFunctional {
 public:
  static constexpr int kDefaultQmax = 40;
  static constexpr double kRankTol = 1e-10;

  static HermiteFunctional hermite(int q);                  // phi = H_q
  static HermiteFunctional indicator_abs(double u, int q_max = kDefaultQmax);
  static HermiteFunctional indicator(double u, int q_max = kDefaultQmax);
  static HermiteFunctional power(int p);                    // phi = x^p
  static HermiteFunctional user_callable(std::function<double(double)> f,
                                         int q_max = kDefaultQmax);

  FunctionalKind kind() const { return kind_; }
  // Coefficients a_0..a_Qmax.
  const std::vector<double>& coeffs() const { return a_; }
  double coeff(int q) const { return q < int(a_.size()) ? a_[std::size_t(q)] : 0.0; }
  // Hermite rank: smallest q >= 1 with |a_q| > rank tolerance.
  int rank() const { return rank_; }
  // Chaos second moment of the centered functional: sum_{q>=1} q! a_q^2.
  double l2_norm_sq() const { return l2_; }
  int q_max() const { return int(a_.size()) - 1; }

  // Centered evaluation phi(x) - a_0, the functional's integrand.
  double eval_centered(double x) const;

 private:
  HermiteFunctional() = default;
  void finish();  // rank + l2 from coefficients
  FunctionalKind kind_ = FunctionalKind::HermitePoly;
  std::vector<double> a_;
  int rank_ = 0;
  double l2_ = 0.0;
  double u_ = 0.0;  // indicator threshold
  int p_ = 0;       // power / hermite order
  std::function<double(double)> f_;
};

}  // namespace gneiting
