#include "gneiting/hermite.hpp"

#include <cmath>

#include "gneiting/quadrature.hpp"

namespace gneiting {

double hermite_poly(int n, double x) {
  if (n < 0) throw ConfigError("Hermite order must be nonnegative");
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = x;
  for (int k = 1; k < n; ++k) {
    double h2 = x * h1 - double(k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void HermiteFunctional::finish() {
  rank_ = 0;
  l2_ = 0.0;
  double qfact = 1.0;
  for (int q = 1; q < int(a_.size()); ++q) {
    qfact *= double(q);
    double aq = a_[std::size_t(q)];
    l2_ += qfact * aq * aq;
    if (rank_ == 0 && std::abs(aq) > kRankTol) rank_ = q;
  }
  if (rank_ == 0) throw InvalidParams("functional has Hermite rank 0 (constant up to tolerance)");
}

HermiteFunctional HermiteFunctional::hermite(int q) {
  if (q < 1) throw ConfigError("hermite-poly functional needs order >= 1");
  HermiteFunctional f;
  f.kind_ = FunctionalKind::HermitePoly;
  f.p_ = q;
  f.a_.assign(std::size_t(q) + 1, 0.0);
  f.a_[std::size_t(q)] = 1.0;
  f.finish();
  return f;
}

HermiteFunctional HermiteFunctional::indicator_abs(double u, int q_max) {
  if (!(u > 0.0)) throw ConfigError("indicator-abs threshold must be positive");
  HermiteFunctional f;
  f.kind_ = FunctionalKind::IndicatorAbs;
  f.u_ = u;
  f.a_.assign(std::size_t(q_max) + 1, 0.0);
  f.a_[0] = 2.0 * (1.0 - normal_cdf(u));
  double qfact = 1.0;
  for (int q = 1; q <= q_max; ++q) {
    qfact *= double(q);
    if (q % 2 == 0) f.a_[std::size_t(q)] = 2.0 * hermite_poly(q - 1, u) * normal_pdf(u) / qfact;
  }
  f.finish();
  return f;
}

HermiteFunctional HermiteFunctional::indicator(double u, int q_max) {
  HermiteFunctional f;
  f.kind_ = FunctionalKind::Indicator;
  f.u_ = u;
  f.a_.assign(std::size_t(q_max) + 1, 0.0);
  f.a_[0] = 1.0 - normal_cdf(u);
  double qfact = 1.0;
  for (int q = 1; q <= q_max; ++q) {
    qfact *= double(q);
    f.a_[std::size_t(q)] = hermite_poly(q - 1, u) * normal_pdf(u) / qfact;
  }
  f.finish();
  return f;
}

HermiteFunctional HermiteFunctional::power(int p) {
  if (p < 1) throw ConfigError("power functional needs exponent >= 1");
  HermiteFunctional f;
  f.kind_ = FunctionalKind::Power;
  f.p_ = p;
  f.a_.assign(std::size_t(p) + 1, 0.0);
  // x^p = p! sum_{q = p, p-2, ...} H_q(x) / (q! 2^m m!), m = (p-q)/2.
  double pfact = 1.0;
  for (int k = 2; k <= p; ++k) pfact *= double(k);
  for (int q = p; q >= 0; q -= 2) {
    int m = (p - q) / 2;
    double qfact = 1.0;
    for (int k = 2; k <= q; ++k) qfact *= double(k);
    double mfact = 1.0;
    for (int k = 2; k <= m; ++k) mfact *= double(k);
    f.a_[std::size_t(q)] = pfact / (qfact * std::pow(2.0, m) * mfact);
  }
  f.finish();
  return f;
}

HermiteFunctional HermiteFunctional::user_callable(std::function<double(double)> fn, int q_max) {
  if (!fn) throw ConfigError("user functional is empty");
  HermiteFunctional f;
  f.kind_ = FunctionalKind::UserCallable;
  f.f_ = std::move(fn);
  f.a_.assign(std::size_t(q_max) + 1, 0.0);
  GaussHermite base(200), doubled(400);
  double qfact = 1.0;
  for (int q = 0; q <= q_max; ++q) {
    if (q > 0) qfact *= double(q);
    auto proj = [&](const GaussHermite& rule) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.node.size(); ++i)
        s += rule.weight[i] * hermite_poly(q, rule.node[i]) * f.f_(rule.node[i]);
      return s / qfact;
    };
    double c1 = proj(base), c2 = proj(doubled);
    if (std::abs(c1 - c2) > 1e-10 * std::max(1.0, std::abs(c2)))
      throw NumericalError("Hermite projection did not converge under node doubling; "
                           "use a closed-form functional kind");
    f.a_[std::size_t(q)] = c2;
  }
  f.finish();
  return f;
}

double HermiteFunctional::eval_centered(double x) const {
  switch (kind_) {
    case FunctionalKind::HermitePoly:
      return hermite_poly(p_, x);
    case FunctionalKind::IndicatorAbs:
      return (std::abs(x) >= u_ ? 1.0 : 0.0) - a_[0];
    case FunctionalKind::Indicator:
      return (x >= u_ ? 1.0 : 0.0) - a_[0];
    case FunctionalKind::Power:
      return std::pow(x, p_) - a_[0];
    case FunctionalKind::UserCallable:
      return f_(x) - a_[0];
  }
  return 0.0;
}

}  // namespace gneiting
