#include <cmath>

#include "doctest.h"
#include "gneiting/hermite.hpp"
#include "gneiting/quadrature.hpp"
#include "oracle_quadrature.hpp"

using namespace gneiting;

TEST_SUITE("hermite") {

TEST_CASE("polynomial recurrence matches the explicit low orders") {
  double x = 1.3;
  CHECK(hermite_poly(0, x) == doctest::Approx(1.0));
  CHECK(hermite_poly(1, x) == doctest::Approx(x));
  CHECK(hermite_poly(2, x) == doctest::Approx(x * x - 1.0).epsilon(1e-14));
  CHECK(hermite_poly(3, x) == doctest::Approx(x * x * x - 3.0 * x).epsilon(1e-14));
  CHECK(hermite_poly(4, x) ==
        doctest::Approx(x * x * x * x - 6.0 * x * x + 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(hermite_poly(-1, 0.0), ConfigError);
}

TEST_CASE("polynomials are orthogonal with norms q! under the normal weight") {
  GaussHermite rule(60);
  for (int p = 0; p <= 8; ++p)
    for (int q = p; q <= 8; ++q) {
      double ip = rule.expectation(
          [&](double x) { return hermite_poly(p, x) * hermite_poly(q, x); });
      double want = (p == q) ? oracle::factorial(p) : 0.0;
      CHECK(ip == doctest::Approx(want).epsilon(1e-9).scale(want + 1.0));
    }
}

TEST_CASE("single-polynomial functional is its own expansion") {
  auto f = HermiteFunctional::hermite(3);
  CHECK(f.rank() == 3);
  CHECK(f.coeff(3) == doctest::Approx(1.0));
  CHECK(f.coeff(1) == doctest::Approx(0.0));
  CHECK(f.l2_norm_sq() == doctest::Approx(6.0));
  CHECK(f.eval_centered(1.7) == doctest::Approx(hermite_poly(3, 1.7)).epsilon(1e-14));
}

TEST_CASE("power functionals expand with the parity ladder") {
  auto sq = HermiteFunctional::power(2);
  CHECK(sq.rank() == 2);
  CHECK(sq.coeff(2) == doctest::Approx(1.0));
  CHECK(sq.coeff(0) == doctest::Approx(1.0));  // E[x^2]
  CHECK(sq.eval_centered(2.0) == doctest::Approx(3.0).epsilon(1e-14));

  auto cube = HermiteFunctional::power(3);
  CHECK(cube.rank() == 1);
  CHECK(cube.coeff(1) == doctest::Approx(3.0));
  CHECK(cube.coeff(3) == doctest::Approx(1.0));

  auto quartic = HermiteFunctional::power(4);
  CHECK(quartic.coeff(4) == doctest::Approx(1.0));
  CHECK(quartic.coeff(2) == doctest::Approx(6.0));
  CHECK(quartic.coeff(0) == doctest::Approx(3.0));
}

TEST_CASE("two-sided exceedance coefficients match an independent quadrature") {
  auto f = HermiteFunctional::indicator_abs(1.0);
  CHECK(f.rank() == 2);
  CHECK(f.coeff(0) == doctest::Approx(2.0 * (1.0 - normal_cdf(1.0))).epsilon(1e-14));
  for (int q = 1; q <= 10; ++q)
    CHECK(f.coeff(q) ==
          doctest::Approx(oracle::indicator_abs_coeff(1.0, q)).epsilon(1e-10).scale(1.0));
  // Spot the sign structure: a_2 = phi(1) > 0, a_4 = -phi(1)/6 < 0.
  CHECK(f.coeff(2) == doctest::Approx(normal_pdf(1.0)).epsilon(1e-13));
  CHECK(f.coeff(4) == doctest::Approx(-normal_pdf(1.0) / 6.0).epsilon(1e-13));
}

TEST_CASE("one-sided exceedance has rank one") {
  auto f = HermiteFunctional::indicator(0.5);
  CHECK(f.rank() == 1);
  CHECK(f.coeff(0) == doctest::Approx(1.0 - normal_cdf(0.5)).epsilon(1e-14));
  CHECK(f.coeff(1) == doctest::Approx(normal_pdf(0.5)).epsilon(1e-13));
  CHECK(f.eval_centered(1.0) == doctest::Approx(1.0 - f.coeff(0)).epsilon(1e-14));
  CHECK(f.eval_centered(0.0) == doctest::Approx(-f.coeff(0)).epsilon(1e-14));
}

TEST_CASE("truncation deficit of the jump functional matches the reference") {
  // A discontinuous functional has a heavy chaos tail (the partial Parseval
  // sums close only like Q^{-1/2}); the order-40 deficit is a fixed number,
  // frozen from a 50-digit computation of p(1-p) - sum q! a_q^2.
  auto f = HermiteFunctional::indicator_abs(1.0);
  double a0 = f.coeff(0);
  double var = a0 * (1.0 - a0);  // Bernoulli variance of the exceedance
  CHECK(f.l2_norm_sq() <= var + 1e-12);
  CHECK(var - f.l2_norm_sq() == doctest::Approx(oracle::kParsevalDeficitQ40).epsilon(1e-6));
}

TEST_CASE("projected user functional reproduces a known expansion") {
  auto f = HermiteFunctional::user_callable([](double x) { return x * x; }, 6);
  CHECK(f.rank() == 2);
  CHECK(f.coeff(2) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(f.coeff(4)) < 1e-9);
}

}  // TEST_SUITE
