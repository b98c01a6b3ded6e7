#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "gneiting/geometry.hpp"
#include "gneiting/rosenblatt.hpp"
#include "oracle_quadrature.hpp"

using namespace gneiting;

namespace {

const RosenblattSpec& shared_spec() {
  static RosenblattSpec spec = make_rosenblatt_spec(0.3, 0.28, ConvexBody::unit_box(1),
                                                    ConvexBody::unit_box(1), 40, 1200);
  return spec;
}

}  // namespace

TEST_SUITE("rosenblatt") {

TEST_CASE("construction pins the variance exactly and the skew to the product rule") {
  const RosenblattSpec& spec = shared_spec();
  auto kappa = rosenblatt_cumulants(spec, 4);
  REQUIRE(kappa.size() == 5);
  CHECK(kappa[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kappa[3] == doctest::Approx(oracle::kJointKappa3).epsilon(5e-3));
  CHECK(kappa[4] == doctest::Approx(oracle::kJointKappa4).epsilon(5e-3));
  // Two-block normalization: c_2 = 2^{-1} * 1 * 1, so kappa_2 = 2 c_2 = 1.
  CHECK(spec_ck(spec, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(spec_ck(spec, 3) == doctest::Approx(oracle::kJointC3).epsilon(5e-3));
  CHECK_THROWS_AS(make_rosenblatt_spec(0.3, 0.28, ConvexBody::unit_box(1),
                                       ConvexBody::unit_box(1), 3, 1200),
                  ConfigError);
}

TEST_CASE("characteristic function is hermitian with unit value at zero") {
  const RosenblattSpec& spec = shared_spec();
  CHECK(std::abs(char_fn(spec, 0.0) - 1.0) < 1e-14);
  for (double xi : {0.3, 1.0, 4.0, 17.0}) {
    auto p = char_fn(spec, xi), m = char_fn(spec, -xi);
    CHECK(std::abs(p - std::conj(m)) < 1e-13);
    CHECK(std::abs(p) < 1.0);
  }
}

TEST_CASE("characteristic function matches the frozen reference magnitudes") {
  const RosenblattSpec& spec = shared_spec();
  for (const auto& pt : oracle::kPhiTable) {
    double got = std::abs(char_fn(spec, pt.xi));
    CHECK(got == doctest::Approx(pt.abs_phi).epsilon(pt.xi < 3.0 ? 1e-5 : 1e-4));
  }
}

TEST_CASE("curvature at the origin equals minus the variance") {
  const RosenblattSpec& spec = shared_spec();
  double h = 1e-4;
  double second =
      (char_fn(spec, h).real() - 2.0 + char_fn(spec, -h).real()) / (h * h);
  CHECK(std::abs(second + 1.0) < 1e-6);
}

TEST_CASE("series evaluation agrees inside its radius and refuses beyond") {
  const RosenblattSpec& spec = shared_spec();
  for (double xi : {0.05, 0.2, 0.5}) {
    auto a = char_fn_series(spec, xi);
    auto b = char_fn(spec, xi);
    CHECK(std::abs(a - b) < 1e-8);
  }
  CHECK_THROWS_AS(char_fn_series(spec, 5.0), SeriesDiverging);
}

TEST_CASE("inverted density carries its mass where the cumulants say") {
  const RosenblattSpec& spec = shared_spec();
  std::vector<double> xs;
  for (double x = -8.0; x <= 20.0 + 1e-12; x += 0.01) xs.push_back(x);
  DensityResult den = rosenblatt_pdf(spec, xs);
  REQUIRE(den.pdf.size() == xs.size());
  CHECK(den.aliasing_bound < 1e-6);
  CHECK(den.clipped_mass < 1e-9);
  for (double p : den.pdf) CHECK(p >= 0.0);

  // Trapezoid moments against the Bell-polynomial references.
  double h = 0.01;
  double mass = 0.0, m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double w = (i == 0 || i + 1 == xs.size()) ? 0.5 : 1.0;
    double p = w * den.pdf[i];
    mass += p;
    m1 += p * xs[i];
    m2 += p * xs[i] * xs[i];
    m3 += p * std::pow(xs[i], 3);
    m4 += p * std::pow(xs[i], 4);
  }
  mass *= h;
  m1 *= h;
  m2 *= h;
  m3 *= h;
  m4 *= h;
  auto kappa = rosenblatt_cumulants(spec, 4);
  CHECK(std::abs(mass - 1.0) < 1e-4);
  CHECK(std::abs(m1) < 1e-3);
  CHECK(std::abs(m2 - 1.0) < 1e-3);
  CHECK(m3 == doctest::Approx(kappa[3]).epsilon(2e-3));
  CHECK(m4 == doctest::Approx(kappa[4] + 3.0).epsilon(5e-3));
}

TEST_CASE("truncation order has no visible effect on the density") {
  RosenblattSpec lo = make_rosenblatt_spec(0.3, 0.28, ConvexBody::unit_box(1),
                                           ConvexBody::unit_box(1), 20, 1200);
  std::vector<double> xs;
  for (double x = -4.0; x <= 8.0 + 1e-12; x += 0.05) xs.push_back(x);
  DensityResult a = rosenblatt_pdf(lo, xs);
  DensityResult b = rosenblatt_pdf(shared_spec(), xs);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    worst = std::max(worst, std::abs(a.pdf[i] - b.pdf[i]));
  CHECK(worst < 1e-8);
}

TEST_CASE("distribution function is a proper monotone cdf") {
  const RosenblattSpec& spec = shared_spec();
  std::vector<double> xs;
  for (double x = -6.0; x <= 10.0 + 1e-12; x += 0.05) xs.push_back(x);
  std::vector<double> cdf = rosenblatt_cdf_grid(spec, xs);
  REQUIRE(cdf.size() == xs.size());
  for (std::size_t i = 1; i < cdf.size(); ++i) CHECK(cdf[i] >= cdf[i - 1] - 1e-9);
  CHECK(cdf.front() >= 0.0);
  CHECK(cdf.front() < 1e-3);
  CHECK(cdf.back() <= 1.0);
  CHECK(cdf.back() > 1.0 - 1e-3);
  // Pointwise evaluation goes through the same table.
  CHECK(rosenblatt_cdf(spec, 1.0) == doctest::Approx(cdf[std::size_t((1.0 + 6.0) / 0.05 + 0.5)])
                                         .epsilon(1e-9));
  CHECK(1.0 - rosenblatt_cdf(spec, 6.0) == doctest::Approx(oracle::kTailAtSix).epsilon(5e-3));
}

TEST_CASE("support is skewed to the right of the mode") {
  const RosenblattSpec& spec = shared_spec();
  // Left tail dies much faster than the right tail.
  std::vector<double> xs{-3.0, 3.0};
  DensityResult den = rosenblatt_pdf(spec, xs);
  CHECK(den.pdf[0] < den.pdf[1] * 1e-2);
}

}  // TEST_SUITE
