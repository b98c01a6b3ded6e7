#include <cmath>

#include "doctest.h"
#include "gneiting/geometry.hpp"
#include "gneiting/hermite.hpp"
#include "gneiting/regimes.hpp"
#include "oracle_quadrature.hpp"

using namespace gneiting;

TEST_SUITE("regimes") {

TEST_CASE("reference classifications land in the expected cells") {
  RegimeReport r = classify(2, 1, 2, 0.5, 0.3);
  CHECK(r.regime == Regime::Case4Rosenblatt);
  CHECK(r.law == LimitLaw::Rosenblatt);
  CHECK(r.exponent1 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(r.exponent2 == doctest::Approx(1.55).epsilon(1e-14));
  CHECK(r.alpha == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.beta == doctest::Approx(0.225).epsilon(1e-14));
  CHECK(r.long_range);

  CHECK(classify(2, 1, 2, 0.5, 2.0 / 3.0).regime == Regime::Critical);

  RegimeReport c2 = classify(1, 1, 2, 2.0, 0.4);
  CHECK(c2.regime == Regime::Case2Gaussian);
  CHECK(c2.law == LimitLaw::Gaussian);
  CHECK(c2.exponent1 == doctest::Approx(1.0));
  CHECK(c2.exponent2 == doctest::Approx(1.6).epsilon(1e-14));

  RegimeReport c1 = classify(1, 1, 2, 2.0, 1.5);
  CHECK(c1.regime == Regime::Case1Gaussian);
  CHECK(c1.exponent1 == doctest::Approx(1.0));
  CHECK(c1.exponent2 == doctest::Approx(1.0));

  RegimeReport c3 = classify(1, 1, 2, 0.4, 1.0);
  CHECK(c3.regime == Regime::Case3Gaussian);
  CHECK(c3.exponent1 == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(c3.exponent2 == doctest::Approx(1.0));
}

TEST_CASE("rank one is always Gaussian with its own exponents") {
  RegimeReport light = classify(1, 1, 1, 2.0, 0.7);
  CHECK(light.regime == Regime::Rank1Gaussian);
  CHECK(light.exponent1 == doctest::Approx(1.0));
  CHECK(light.exponent2 == doctest::Approx(2.0));
  RegimeReport heavy = classify(1, 1, 1, 0.5, 0.7);
  CHECK(heavy.exponent1 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(classify(1, 1, 1, 1.0, 0.7).regime == Regime::Critical);
}

TEST_CASE("deep-rank doubly-heavy inputs report unsupported without throwing") {
  RegimeReport r = classify(2, 1, 3, 0.3, 0.2);
  CHECK(r.regime == Regime::Unsupported);
  CHECK(r.law == LimitLaw::Unknown);
}

TEST_CASE("boundaries flag critical and exponents join continuously") {
  // Vertical boundary rho1 = d1/R.
  CHECK(classify(2, 1, 2, 1.0, 1.2).regime == Regime::Critical);
  // Horizontal boundary rho2 = d2/(R-1) on the light-rho1 side.
  CHECK(classify(2, 1, 2, 1.5, 1.0).regime == Regime::Critical);
  // Curved boundary rho2 = d1 d2 / (R (d1 - rho1)) on the heavy-rho1 side.
  CHECK(classify(2, 1, 2, 0.5, 2.0 / 3.0).regime == Regime::Critical);

  double eps = 1e-9;
  auto e = [](const RegimeReport& r) { return std::pair<double, double>{r.exponent1, r.exponent2}; };
  {
    auto above = e(classify(2, 1, 2, 1.5, 1.0 + eps));
    auto below = e(classify(2, 1, 2, 1.5, 1.0 - eps));
    CHECK(std::abs(above.first - below.first) < 1e-7);
    CHECK(std::abs(above.second - below.second) < 1e-7);
  }
  {
    auto right = e(classify(2, 1, 2, 1.0 + eps, 1.2));
    auto left = e(classify(2, 1, 2, 1.0 - eps, 1.2));
    CHECK(std::abs(right.first - left.first) < 1e-7);
    CHECK(std::abs(right.second - left.second) < 1e-7);
  }
  {
    auto above = e(classify(2, 1, 2, 0.5, 2.0 / 3.0 + eps));
    auto below = e(classify(2, 1, 2, 0.5, 2.0 / 3.0 - eps));
    CHECK(std::abs(above.first - below.first) < 1e-7);
    CHECK(std::abs(above.second - below.second) < 1e-7);
  }
}

TEST_CASE("range flag follows the tail comparison") {
  CHECK(range_dependence_long(1, 1, 1, 5.0, 5.0));
  CHECK(range_dependence_long(1, 1, 2, 0.4, 2.0));
  CHECK(range_dependence_long(1, 1, 2, 2.0, 0.9));
  CHECK_FALSE(range_dependence_long(1, 1, 2, 2.0, 1.5));
  CHECK_THROWS_AS(range_dependence_long(0, 1, 2, 1.0, 1.0), ConfigError);
}

TEST_CASE("covariance overload forwards tail indices and the sentinel") {
  GneitingCovariance cov(RadialCovariance::gen_cauchy(1.0, 0.5, 2, Role::Factor1),
                         RadialCovariance::gen_cauchy(1.0, 0.3, 1, Role::Factor2));
  RegimeReport a = classify(cov, 2, 1, 2);
  RegimeReport b = classify(2, 1, 2, 0.5, 0.3);
  CHECK(a.regime == b.regime);
  CHECK(a.exponent1 == doctest::Approx(b.exponent1));
  CHECK(a.exponent2 == doctest::Approx(b.exponent2));

  GneitingCovariance fast(RadialCovariance::exponential(1.0, 1, Role::Factor1),
                          RadialCovariance::exponential(1.0, 1, Role::Factor2));
  RegimeReport r = classify(fast, 1, 1, 2);
  CHECK(r.regime == Regime::Case1Gaussian);
}

TEST_CASE("series-chain constant matches the rank-three exponential fixture") {
  GneitingCovariance cov(RadialCovariance::exponential(1.0, 1, Role::Factor1),
                         RadialCovariance::exponential(1.0, 1, Role::Factor2));
  auto phi = HermiteFunctional::hermite(3);
  double ell = leading_constant_case1(cov, phi, ConvexBody::unit_box(1), ConvexBody::unit_box(1));
  CHECK(ell == doctest::Approx(oracle::kChainConstantExpCubic).epsilon(1e-6));
}

TEST_CASE("effective factor reduction matches the membership split") {
  {
    // Non-integrable square: rho2* = rho2 (1 - rho1/d1).
    GneitingCovariance cov(RadialCovariance::gen_cauchy(1.0, 0.3, 1, Role::Factor1),
                           RadialCovariance::gen_cauchy(1.0, 0.4, 1, Role::Factor2));
    SeparableFactors sf = effective_separable_factors(cov, 1);
    CHECK(sf.rho2_effective == doctest::Approx(0.28).epsilon(1e-12));
    CHECK(sf.factor2.rho() == doctest::Approx(0.28).epsilon(1e-12));
  }
  {
    // Integrable square: rho2* = rho2 / 2.
    GneitingCovariance cov(RadialCovariance::gen_cauchy(1.0, 2.0, 1, Role::Factor1),
                           RadialCovariance::gen_cauchy(1.0, 0.8, 1, Role::Factor2));
    SeparableFactors sf = effective_separable_factors(cov, 1);
    CHECK(sf.rho2_effective == doctest::Approx(0.4).epsilon(1e-12));
  }
  {
    // Borderline square has no effective reduction.
    GneitingCovariance cov(RadialCovariance::gen_cauchy(1.0, 0.5, 1, Role::Factor1),
                           RadialCovariance::gen_cauchy(1.0, 0.4, 1, Role::Factor2));
    CHECK_THROWS_AS(effective_separable_factors(cov, 1), Unsupported);
  }
}

}  // TEST_SUITE
