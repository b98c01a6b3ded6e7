// Acceptance gate: twelve end-to-end checks, one pass/fail line each.
// Every reference value is either exact arithmetic, a closed form evaluated
// by an independent quadrature in oracle_quadrature.hpp, or a frozen golden
// that was produced by an external high-precision computation.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "gneiting/covariance.hpp"
#include "gneiting/cyclic.hpp"
#include "gneiting/experiments.hpp"
#include "gneiting/functional.hpp"
#include "gneiting/geometry.hpp"
#include "gneiting/hermite.hpp"
#include "gneiting/regimes.hpp"
#include "gneiting/rng.hpp"
#include "gneiting/rosenblatt.hpp"
#include "gneiting/stats.hpp"
#include "oracle_quadrature.hpp"

using namespace gneiting;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---- 1: regime partition vs an independent re-derivation ------------------

// Reference partition for (d1, d2, R) = (2, 1, 2), written from scratch:
// vertical boundary rho1 = 1, horizontal boundary rho2 = 1 (light rho1 half),
// curved boundary rho2 = 1/(2 - rho1) (heavy rho1 half).
struct RefCell {
  int region = 0;  // 1..4; 0 = on a boundary
  double e1 = 0.0, e2 = 0.0;
};

RefCell ref_partition(double r1, double r2) {
  RefCell out;
  if (r1 > 1.0) {
    if (r2 > 1.0) {
      out = {1, 2.0, 1.0};
    } else if (r2 < 1.0) {
      out = {2, 2.0, 2.0 - r2};
    }
  } else if (r1 < 1.0) {
    double curve = 1.0 / (2.0 - r1);
    if (r2 > curve) {
      out = {3, 4.0 - 2.0 * r1, 1.0};
    } else if (r2 < curve) {
      out = {4, 4.0 - 2.0 * r1, 2.0 - 2.0 * r2 * (1.0 - r1 / 2.0)};
    }
  }
  return out;
}

int region_index(Regime r) {
  switch (r) {
    case Regime::Case1Gaussian: return 1;
    case Regime::Case2Gaussian: return 2;
    case Regime::Case3Gaussian: return 3;
    case Regime::Case4Rosenblatt: return 4;
    default: return 0;
  }
}

Outcome criterion1() {
  int mismatches = 0;
  double max_exp_diff = 0.0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      double r1 = (i + 0.5) * 2.0 / 100.0;
      double r2 = (j + 0.5) * 1.5 / 100.0;
      RegimeReport rep = classify(2, 1, 2, r1, r2);
      RefCell ref = ref_partition(r1, r2);
      if (region_index(rep.regime) != ref.region) {
        ++mismatches;
        continue;
      }
      max_exp_diff = std::max(max_exp_diff, std::fabs(rep.exponent1 - ref.e1));
      max_exp_diff = std::max(max_exp_diff, std::fabs(rep.exponent2 - ref.e2));
    }
  }

  bool boundaries_ok = classify(2, 1, 2, 1.0, 1.2).regime == Regime::Critical &&
                       classify(2, 1, 2, 1.5, 1.0).regime == Regime::Critical &&
                       classify(2, 1, 2, 0.5, 2.0 / 3.0).regime == Regime::Critical;

  // Exponent continuity across each boundary, probed at +-1e-9.
  double eps = 1e-9, cont = 0.0;
  auto probe = [&](double a1, double a2, double b1, double b2) {
    RegimeReport ra = classify(2, 1, 2, a1, a2);
    RegimeReport rb = classify(2, 1, 2, b1, b2);
    cont = std::max(cont, std::fabs(ra.exponent1 - rb.exponent1));
    cont = std::max(cont, std::fabs(ra.exponent2 - rb.exponent2));
  };
  probe(1.0 - eps, 1.2, 1.0 + eps, 1.2);                    // vertical
  probe(1.5, 1.0 - eps, 1.5, 1.0 + eps);                    // horizontal
  probe(0.5, 2.0 / 3.0 - eps, 0.5, 2.0 / 3.0 + eps);        // curved

  bool pass = mismatches == 0 && max_exp_diff <= 1e-12 && boundaries_ok && cont <= 1e-7;
  return {pass, fmt("%d/10000 cells mismatched, exponent diff %.1e, boundaries %s, "
                    "continuity %.1e",
                    mismatches, max_exp_diff, boundaries_ok ? "critical" : "WRONG", cont)};
}

// ---- 2: cyclic normalization c2 on five kernel/domain fixtures -------------

Outcome criterion2() {
  struct Fixture {
    LagKernel kernel;
    ConvexBody body;
    const char* name;
  };
  std::vector<Fixture> fx;
  fx.push_back({LagKernel::power_law(0.4, 1), ConvexBody::unit_box(1), "pl04/box1"});
  fx.push_back({LagKernel::power_law(0.2, 1), ConvexBody::scaled_box({3.0}), "pl02/box3"});
  fx.push_back({LagKernel::profile(RadialCovariance::gen_cauchy(1.0, 0.3, 1, Role::Factor1)),
                ConvexBody::scaled_box({2.0}), "gc/box2"});
  fx.push_back({LagKernel::profile(RadialCovariance::exponential(1.0, 1, Role::Factor1)),
                ConvexBody::unit_box(1), "exp/box1"});
  fx.push_back({LagKernel::profile(RadialCovariance::inv_bernstein(0.9, 0.5, 1, Role::Factor1)),
                ConvexBody::scaled_box({4.0}), "ib/box4"});

  CyclicBudget budget;
  budget.seed = 20260802;
  double worst_mc = 0.0;
  bool quad_exact = true;
  for (const auto& f : fx) {
    CyclicCoefficient quad = cyclic_integral(f.kernel, f.body, 2, CyclicMethod::TensorQuadrature,
                                             budget);
    if (quad.value != 1.0) quad_exact = false;
    CyclicCoefficient mc = cyclic_integral(f.kernel, f.body, 2, CyclicMethod::MonteCarlo, budget);
    worst_mc = std::max(worst_mc, std::fabs(mc.value - 1.0));
  }
  bool pass = quad_exact && worst_mc <= 1e-2;
  return {pass, fmt("quadrature c2 %s 1 on 5 fixtures, worst MC |c2-1| = %.2e",
                    quad_exact ? "==" : "!=", worst_mc)};
}

// ---- 3: singular cyclic integrals vs frozen tensor-quadrature goldens ------

Outcome criterion3() {
  struct Case {
    double alpha;
    int k;
    double golden;
  };
  const Case cases[] = {{0.2, 3, oracle::kC3_alpha02},
                        {0.2, 4, oracle::kC4_alpha02},
                        {0.4, 3, oracle::kC3_alpha04},
                        {0.4, 4, oracle::kC4_alpha04}};
  double worst = 0.0;
  for (const Case& c : cases) {
    CyclicCoefficient got = cyclic_integral(LagKernel::power_law(c.alpha, 1),
                                            ConvexBody::unit_box(1), c.k,
                                            CyclicMethod::TensorQuadrature);
    worst = std::max(worst, std::fabs(got.value - c.golden) / c.golden);
  }
  return {worst <= 0.02, fmt("worst relative gap %.3e over c3,c4 at alpha in {0.2, 0.4}", worst)};
}

// ---- 4: second-chaos cumulant identity on the single-node fixture ----------

Outcome criterion4() {
  const std::size_t n = 1000000;
  CounterRng rng(20260804, 0);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = rng.normal(i);
    y[i] = (x * x - 1.0) / std::sqrt(2.0);
  }
  EnsembleStats s = ensemble_stats(std::move(y));
  double target = 2.0 * std::sqrt(2.0);
  double z = (s.k3 - target) / s.se_k3;
  bool pass = std::fabs(s.k3 - target) <= 3.0 * s.se_k3;
  return {pass, fmt("k3 = %.4f vs 2*sqrt(2) = %.4f, |z| = %.2f (3-sigma gate)", s.k3, target,
                    std::fabs(z))};
}

// ---- 5/6/7: ensemble suites over the two reference models ------------------

const char* kHeavyHeavyConfig = R"({
  "schema": 1,
  "covariance": {
    "factor1": {"family": "gen-cauchy", "gamma": 1.0, "rho": 0.3, "dim": 1},
    "factor2": {"family": "gen-cauchy", "gamma": 1.0, "rho": 0.4, "dim": 1}
  },
  "window": {
    "body1": {"kind": "unit-box", "dim": 1},
    "body2": {"kind": "unit-box", "dim": 1},
    "gamma1": 1.0,
    "gamma2": 1.0
  },
  "functional": {"kind": "hermite", "q": 2},
  "t_ladder": [32, 64, 128, 256],
  "n_reps": 2000,
  "master_seed": 20260805,
  "mesh": 1.0,
  "threads": 1
})";

const char* kLightHeavyConfig = R"({
  "schema": 1,
  "covariance": {
    "factor1": {"family": "gen-cauchy", "gamma": 1.0, "rho": 2.0, "dim": 1},
    "factor2": {"family": "gen-cauchy", "gamma": 1.0, "rho": 0.4, "dim": 1}
  },
  "window": {
    "body1": {"kind": "unit-box", "dim": 1},
    "body2": {"kind": "unit-box", "dim": 1},
    "gamma1": 1.0,
    "gamma2": 1.0
  },
  "functional": {"kind": "hermite", "q": 2},
  "t_ladder": [64],
  "n_reps": 2000,
  "master_seed": 20260806,
  "mesh": 1.0,
  "threads": 1
})";

std::string with_patch(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

Outcome criterion5() {
  ExperimentConfig cfg = parse_config(kHeavyHeavyConfig);
  VarianceSuite suite = run_variance_suite(cfg);
  double gap = std::fabs(suite.fit.slope - suite.theory_slope);
  bool pass = suite.theory_slope == 2.84 && gap <= 0.25;
  return {pass, fmt("fitted slope %.4f +- %.4f vs theory %.2f (|gap| = %.3f, gate 0.25)",
                    suite.fit.slope, suite.fit.se_slope, suite.theory_slope, gap)};
}

Outcome criterion6() {
  ExperimentConfig cfg = parse_config(kLightHeavyConfig);
  CltSuite s = run_clt_suite(cfg);
  bool pass = s.ks.p_value > 0.01 && std::fabs(s.z3) < 4.0 && std::fabs(s.z4) < 4.0;
  Outcome out{pass, fmt("KS p = %.3g, z3 = %.2f, z4 = %.2f at t = 64, 2000 reps",
                        s.ks.p_value, s.z3, s.z4)};

  // Informational control: the odd rank-3 functional at the same scale is
  // already well inside the normal limit, isolating the slow even-rank
  // convergence as the cause of a failure above.
  ExperimentConfig ctrl = parse_config(with_patch(kLightHeavyConfig, "\"q\": 2", "\"q\": 3"));
  CltSuite c = run_clt_suite(ctrl);
  out.detail += fmt("; rank-3 control: KS p = %.3g, z3 = %.2f, z4 = %.2f",
                    c.ks.p_value, c.z3, c.z4);
  return out;
}

Outcome criterion7() {
  ExperimentConfig cfg = parse_config(with_patch(with_patch(std::string(kHeavyHeavyConfig),
      "\"t_ladder\": [32, 64, 128, 256]", "\"t_ladder\": [256]"),
      "\"master_seed\": 20260805", "\"master_seed\": 20260807"));
  RosenblattSuite s = run_rosenblatt_suite(cfg);
  bool pass = s.rel_gap <= 0.25 && s.z_from_zero > 5.0;
  return {pass, fmt("skewness %.4f +- %.4f vs theory %.4f (rel gap %.1f%%, %.1f sigma from 0)",
                    s.kappa3_emp, s.se, s.kappa3_theory, 100.0 * s.rel_gap, s.z_from_zero)};
}

// ---- 8: distributional fixed point of the two-block limit law --------------

Outcome criterion8() {
  std::vector<double> grid;
  for (int i = 0; i <= 2800; ++i) grid.push_back(-8.0 + 0.01 * i);

  RosenblattSpec spec40 = make_rosenblatt_spec(0.3, 0.28, ConvexBody::unit_box(1),
                                               ConvexBody::unit_box(1), 40);
  DensityResult d40 = rosenblatt_pdf(spec40, grid);
  double mass = 0.0, mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    double h = grid[i + 1] - grid[i];
    mass += 0.5 * h * (d40.pdf[i] + d40.pdf[i + 1]);
    mean += 0.5 * h * (grid[i] * d40.pdf[i] + grid[i + 1] * d40.pdf[i + 1]);
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    double h = grid[i + 1] - grid[i];
    auto c2 = [&](std::size_t j) {
      return (grid[j] - mean) * (grid[j] - mean) * d40.pdf[j];
    };
    var += 0.5 * h * (c2(i) + c2(i + 1));
  }

  RosenblattSpec spec20 = make_rosenblatt_spec(0.3, 0.28, ConvexBody::unit_box(1),
                                               ConvexBody::unit_box(1), 20);
  DensityResult d20 = rosenblatt_pdf(spec20, grid);
  double drift = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    drift = std::max(drift, std::fabs(d40.pdf[i] - d20.pdf[i]));

  bool pass = std::fabs(mass - 1.0) <= 1e-4 && std::fabs(mean) <= 1e-3 &&
              std::fabs(var - 1.0) <= 1e-3 && drift < 1e-8;
  return {pass, fmt("mass-1 = %.2e, mean = %.2e, var-1 = %.2e, K=20->40 drift = %.2e",
                    mass - 1.0, mean, var - 1.0, drift)};
}

// ---- 9: scaled-window ratios toward the power-law coefficient --------------

Outcome criterion9() {
  RadialCovariance c = RadialCovariance::gen_cauchy(1.0, 0.3, 1, Role::Factor1);
  ConvexBody delta = ConvexBody::unit_box(1);
  CyclicBudget budget;
  budget.seed = 20260809;
  double target = oracle::n3_power(0.3);

  std::vector<RatioPoint> pts;
  for (double t : {4.0, 8.0, 16.0, 32.0}) pts.push_back(appendixA_ratio(c, delta, 3, t, budget));

  bool monotone = true;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (std::fabs(pts[i].ratio - target) >= std::fabs(pts[i - 1].ratio - target))
      monotone = false;
  double final_gap = std::fabs(pts.back().ratio - target) / target;

  bool pass = monotone && final_gap < 0.10;
  std::string seq;
  for (const RatioPoint& p : pts) seq += fmt(" %.3f", p.ratio);
  return {pass, fmt("ratios%s vs target %.4f: %s, final rel gap %.1f%% (gate 10%%)", seq.c_str(),
                    target, monotone ? "monotone" : "NOT monotone", 100.0 * final_gap)};
}

// ---- 10: separability gap decay + separable-null control -------------------

Outcome criterion10() {
  WindowSpec window{ConvexBody::unit_box(1), ConvexBody::unit_box(1), GrowthSchedule(1.0, 1.0)};
  std::vector<double> ts = {8.0, 16.0, 32.0, 64.0};
  CyclicBudget budget;
  budget.seed = 20260810;

  GneitingCovariance cov(RadialCovariance::gen_cauchy(1.0, 0.3, 1, Role::Factor1),
                         RadialCovariance::gen_cauchy(1.0, 0.4, 1, Role::Factor2));
  SeparabilityGap g = separability_gap(cov, window, 3, ts, budget);
  bool decreasing = true;
  double worst_margin = 1e300;
  for (std::size_t i = 0; i < g.decrease.size(); ++i) {
    if (!(g.decrease[i] > g.se_decrease[i])) decreasing = false;
    worst_margin = std::min(worst_margin, g.decrease[i] / std::max(g.se_decrease[i], 1e-300));
  }

  RadialCovariance c1 = RadialCovariance::gen_cauchy(1.0, 0.8, 1, Role::Factor1);
  RadialCovariance c2 = RadialCovariance::gen_cauchy(1.0, 0.6, 1, Role::Factor2);
  SeparabilityGap null_gap = separability_gap_kernels(LagKernel::tensor(c1, c2),
                                                      LagKernel::profile(c1),
                                                      LagKernel::profile(c2), window, 3, ts,
                                                      budget);
  bool null_ok = true;
  double worst_null = 0.0;
  for (std::size_t i = 0; i < null_gap.gap.size(); ++i) {
    double z = std::fabs(null_gap.gap[i]) / std::max(null_gap.se[i], 1e-300);
    worst_null = std::max(worst_null, z);
    if (std::fabs(null_gap.gap[i]) > 3.0 * null_gap.se[i] + 1e-12) null_ok = false;
  }

  bool pass = decreasing && null_ok;
  return {pass, fmt("gap decreases with min margin %.2f sigma; separable null worst |z| = %.2f "
                    "(gate 3)",
                    worst_margin, worst_null)};
}

// ---- 11: threshold-functional coefficients vs direct quadrature ------------

Outcome criterion11() {
  HermiteFunctional phi = HermiteFunctional::indicator_abs(1.0, 40);
  double worst = 0.0;
  for (int q = 1; q <= 10; ++q)
    worst = std::max(worst, std::fabs(phi.coeff(q) - oracle::indicator_abs_coeff(1.0, q)));
  double p = phi.coeff(0);
  double deficit = p * (1.0 - p) - phi.l2_norm_sq();
  bool pass = worst <= 1e-8 && deficit >= -1e-12 && deficit < 1e-4;
  return {pass, fmt("worst |a_q - oracle| = %.2e for q <= 10, Parseval deficit = %.2e", worst,
                    deficit)};
}

// ---- 12: covariogram identities --------------------------------------------

Outcome criterion12() {
  // Scaling identity on boxes, exact to rounding.
  double worst_scale = 0.0;
  std::vector<ConvexBody> boxes = {ConvexBody::unit_box(1), ConvexBody::unit_box(2),
                                   ConvexBody::scaled_box({2.0, 0.5}), ConvexBody::unit_box(3)};
  for (const ConvexBody& b : boxes) {
    std::vector<double> z(static_cast<std::size_t>(b.dim()));
    for (int i = 0; i < b.dim(); ++i) z[std::size_t(i)] = 0.1 + 0.07 * i;
    for (double t : {2.0, 7.5, 30.0}) {
      auto [lhs, rhs] = covariogram_scaling_check(b, z, t);
      worst_scale = std::max(worst_scale, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
    }
  }

  // Ball overlap closed forms vs Monte Carlo.
  double worst_ball = 0.0;
  {
    ConvexBody disk = ConvexBody::centered_ball(2, 1.0);
    auto [mc2, se2] = covariogram_mc(disk, {0.7, 0.3}, 1000000, 20260812);
    worst_ball = std::max(worst_ball, std::fabs(covariogram(disk, {0.7, 0.3}) - mc2) /
                                          std::max(se2, 1e-300));
    ConvexBody ball = ConvexBody::centered_ball(3, 1.0);
    auto [mc3, se3] = covariogram_mc(ball, {0.5, 0.2, 0.4}, 1000000, 20260813);
    worst_ball = std::max(worst_ball, std::fabs(covariogram(ball, {0.5, 0.2, 0.4}) - mc3) /
                                          std::max(se3, 1e-300));
  }

  // Radial monotonicity along 100 random rays for a box and a ball.
  CounterRng rng(20260814, 0);
  bool monotone = true;
  std::vector<ConvexBody> bodies = {ConvexBody::unit_box(2), ConvexBody::centered_ball(2, 1.0)};
  std::uint64_t ctr = 0;
  for (const ConvexBody& b : bodies) {
    for (int ray = 0; ray < 100; ++ray) {
      double u0 = rng.normal(ctr++), u1 = rng.normal(ctr++);
      double norm = std::hypot(u0, u1);
      if (norm < 1e-12) continue;
      double prev = b.volume() + 1.0;
      for (int s = 0; s <= 50; ++s) {
        double r = b.diameter() * s / 50.0;
        double g = covariogram(b, {r * u0 / norm, r * u1 / norm});
        if (g > prev + 1e-12) monotone = false;
        prev = g;
      }
    }
  }

  bool pass = worst_scale <= 1e-12 && worst_ball <= 3.0 && monotone;
  return {pass, fmt("scaling identity worst rel err %.1e, lens-vs-MC worst |z| = %.2f, "
                    "100 rays %s",
                    worst_scale, worst_ball, monotone ? "monotone" : "NOT monotone")};
}

using CriterionFn = Outcome (*)();

const CriterionFn kCriteria[12] = {criterion1, criterion2,  criterion3,  criterion4,
                                   criterion5, criterion6,  criterion7,  criterion8,
                                   criterion9, criterion10, criterion11, criterion12};

bool run_one(int idx) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = kCriteria[idx - 1]();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("criterion %d: %s (%s; %.2f s)\n", idx, out.pass ? "PASS" : "FAIL",
              out.detail.c_str(), secs);
  std::fflush(stdout);
  return out.pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
      if (only < 1 || only > 12) {
        std::fprintf(stderr, "criterion index must be in 1..12\n");
        return 2;
      }
    } else if (std::strcmp(argv[i], "--all") == 0) {
      only = 0;
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N | --all]\n", argv[0]);
      return 2;
    }
  }

  if (only != 0) return run_one(only) ? 0 : 1;

  int passed = 0;
  for (int i = 1; i <= 12; ++i) passed += run_one(i) ? 1 : 0;
  std::printf("acceptance: %d/12 criteria passed\n", passed);
  return passed == 12 ? 0 : 1;
}
