#include "gneiting/regimes.hpp"

#include <cmath>
#include <sstream>

#include "gneiting/quadrature.hpp"

namespace gneiting {
namespace {

// L^q norm (to the q-th power) of a radial function over R^d, by adaptive
// radial quadrature plus an analytic power-law tail bound.
double lq_norm_pow(const RadialCovariance& c, int q, int d) {
  double surf = sphere_surface(d);
  auto integrand = [&](double r) {
    double v = c.eval(r);
    return surf * std::pow(r, d - 1) * std::pow(std::fabs(v), q);
  };
  double cut = 80.0;
  double core = integrate_adaptive(integrand, 0.0, cut, 1e-12);
  // Tail: |c(r)| <= A r^{-rho} eventually; bound the remainder explicitly.
  double rho = c.rho();
  double tail = 0.0;
  if (rho != kRhoInf) {
    double qrho = double(q) * rho;
    if (qrho <= double(d)) throw SeriesTail("tail norm diverges: q*rho <= d");
    double a_tail = c.eval(cut) * std::pow(cut, rho);  // effective amplitude at the cut
    tail = surf * std::pow(a_tail, q) * std::pow(cut, double(d) - qrho) / (qrho - double(d));
  } else {
    // exponential tail beyond the cut is negligible at this range
    tail = integrate_adaptive(integrand, cut, cut + 60.0, 1e-14);
  }
  return core + tail;
}

}  // namespace

std::string RegimeReport::regime_name() const {
  switch (regime) {
    case Regime::Case1Gaussian: return "case1-gaussian";
    case Regime::Case2Gaussian: return "case2-gaussian";
    case Regime::Case3Gaussian: return "case3-gaussian";
    case Regime::Case4Rosenblatt: return "case4-rosenblatt";
    case Regime::Rank1Gaussian: return "rank1-gaussian";
    case Regime::Critical: return "critical";
    case Regime::Unsupported: return "unsupported";
  }
  return "unknown";
}

std::string RegimeReport::law_name() const {
  switch (law) {
    case LimitLaw::Gaussian: return "gaussian";
    case LimitLaw::Rosenblatt: {
      std::ostringstream os;
      os << "rosenblatt(" << alpha << "," << beta << ")";
      return os.str();
    }
    case LimitLaw::Unknown: return "unknown";
  }
  return "unknown";
}

bool range_dependence_long(int d1, int d2, int rank, double rho1, double rho2) {
  if (d1 < 1 || d2 < 1 || rank < 1) throw ConfigError("dimensions and rank must be positive");
  if (!(rho1 > 0.0) || !(rho2 > 0.0)) throw ConfigError("tail indices must be positive");
  if (rank == 1) return true;
  return rho1 <= double(d1) / double(rank) || rho2 <= double(d2) / double(rank - 1);
}

RegimeReport classify(int d1, int d2, int rank, double rho1, double rho2) {
  if (d1 < 1 || d2 < 1) throw ConfigError("block dimensions must be positive");
  if (rank < 1) throw ConfigError("Hermite rank must be positive");
  if (!(rho1 > 0.0) || !(rho2 > 0.0)) throw ConfigError("tail indices must be positive");

  RegimeReport rep;
  rep.d1 = d1;
  rep.d2 = d2;
  rep.rank = rank;
  rep.rho1 = rho1;
  rep.rho2 = rho2;
  rep.long_range = range_dependence_long(d1, d2, rank, rho1, rho2);

  double D1 = double(d1), D2 = double(d2), R = double(rank);

  if (rank == 1) {
    rep.regime = Regime::Rank1Gaussian;
    rep.law = LimitLaw::Gaussian;
    rep.exponent2 = 2.0 * D2;
    if (rho1 == D1) {
      rep.regime = Regime::Critical;
      rep.law = LimitLaw::Unknown;
      rep.exponent1 = D1;
      return rep;
    }
    rep.exponent1 = rho1 > D1 ? D1 : 2.0 * D1 - rho1;
    return rep;
  }

  double b1 = D1 / R;             // factor-1 boundary
  double b2 = D2 / (R - 1.0);     // factor-2 boundary in the light-rho1 half
  bool light1 = rho1 > b1;        // strict: exact ties are critical
  bool heavy1 = rho1 < b1;

  if (!light1 && !heavy1) {
    rep.regime = Regime::Critical;
    rep.law = LimitLaw::Unknown;
    return rep;
  }

  if (light1) {
    bool light2 = rho2 > b2;
    bool heavy2 = rho2 < b2;
    if (!light2 && !heavy2) {
      rep.regime = Regime::Critical;
      rep.law = LimitLaw::Unknown;
      return rep;
    }
    if (light2) {
      rep.regime = Regime::Case1Gaussian;
      rep.law = LimitLaw::Gaussian;
      rep.exponent1 = D1;
      rep.exponent2 = D2;
    } else {
      rep.regime = Regime::Case2Gaussian;
      rep.law = LimitLaw::Gaussian;
      rep.exponent1 = D1;
      rep.exponent2 = 2.0 * D2 - (R - 1.0) * rho2;
    }
    return rep;
  }

  // heavy factor 1: the coupling moves the factor-2 boundary
  double b2c = D1 * D2 / (R * (D1 - rho1));
  bool light2 = rho2 > b2c;
  bool heavy2 = rho2 < b2c;
  if (!light2 && !heavy2) {
    rep.regime = Regime::Critical;
    rep.law = LimitLaw::Unknown;
    return rep;
  }
  if (light2) {
    rep.regime = Regime::Case3Gaussian;
    rep.law = LimitLaw::Gaussian;
    rep.exponent1 = 2.0 * D1 - R * rho1;
    rep.exponent2 = D2;
    return rep;
  }
  if (rank != 2) {
    rep.regime = Regime::Unsupported;
    rep.law = LimitLaw::Unknown;
    return rep;
  }
  rep.regime = Regime::Case4Rosenblatt;
  rep.law = LimitLaw::Rosenblatt;
  rep.alpha = rho1;
  rep.beta = rho2 * (1.0 - rho1 / D1);
  rep.exponent1 = 2.0 * D1 - 2.0 * rho1;
  rep.exponent2 = 2.0 * D2 - 2.0 * rep.beta;
  return rep;
}

RegimeReport classify(const GneitingCovariance& cov, int d1, int d2, int rank) {
  return classify(d1, d2, rank, cov.factor1().rho(), cov.factor2().rho());
}

double leading_constant_case1(const GneitingCovariance& cov, const HermiteFunctional& phi,
                              const ConvexBody& body1, const ConvexBody& body2) {
  const RadialCovariance& c1 = cov.factor1();
  const RadialCovariance& c2 = cov.factor2();
  int d1 = body1.dim(), d2 = body2.dim();
  int rank = phi.rank();
  RegimeReport rep = classify(d1, d2, rank, c1.rho(), c2.rho());
  if (rep.regime != Regime::Case1Gaussian)
    throw Unsupported("leading constant defined only in the fully integrable regime");

  const auto& a = phi.coeffs();
  int qmax = int(a.size()) - 1;
  double sum = 0.0;
  double last_term = 0.0;
  double qfact = 1.0;
  for (int q = 1; q <= qmax; ++q) {
    qfact *= double(q);
    if (q < rank || a[q] == 0.0) continue;
    double n1 = lq_norm_pow(c1, q, d1);
    double n2 = q >= 2 ? lq_norm_pow(c2, q - 1, d2) : 1.0;
    double term = qfact * a[q] * a[q] * n1 * n2;
    sum += term;
    last_term = term;
  }
  if (sum <= 0.0) throw ConfigError("no non-zero coefficients at or above the rank");
  // Polynomial functionals carry their exact finite expansion; only a
  // truncated expansion needs the tail-safety check.
  bool truncated = phi.kind() == FunctionalKind::IndicatorAbs ||
                   phi.kind() == FunctionalKind::Indicator ||
                   phi.kind() == FunctionalKind::UserCallable;
  if (truncated && last_term > 0.01 * sum)
    throw SeriesTail("series truncation not converged: last term above 1% of partial sum");
  return body1.volume() * body2.volume() * sum;
}

SeparableFactors effective_separable_factors(const GneitingCovariance& cov, int d1) {
  const RadialCovariance& c1 = cov.factor1();
  const RadialCovariance& c2 = cov.factor2();
  if (c1.dim() != d1) throw ConfigError("factor-1 dimension mismatch");
  double rho2 = c2.rho();
  double rho2_eff = 0.0;
  switch (lq_membership(c1, 2)) {
    case Membership::Integrable:
      // squared factor 1 integrable: the cross-coupling halves the pair tail
      rho2_eff = rho2 / 2.0;
      break;
    case Membership::Borderline:
      throw Unsupported("effective factors undefined at the boundary 2*rho1 == d1");
    case Membership::NonIntegrable:
      rho2_eff = rho2 * (1.0 - c1.rho() / double(d1));
      break;
  }
  return SeparableFactors{
      c1, RadialCovariance::gen_cauchy(1.0, rho2_eff, c2.dim(), Role::Factor2), rho2_eff};
}

}  // namespace gneiting
