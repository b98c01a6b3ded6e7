#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "gneiting/common.hpp"
#include "gneiting/covariance.hpp"
#include "gneiting/cyclic.hpp"
#include "gneiting/functional.hpp"
#include "gneiting/geometry.hpp"
#include "gneiting/hermite.hpp"
#include "gneiting/regimes.hpp"
#include "gneiting/stats.hpp"

namespace gneiting {

// Parsed schema-1 experiment configuration. Parsing validates every
// sub-spec and hashes the canonical document before any random number is
// drawn; unknown keys anywhere in the document are errors.
struct ExperimentConfig {
  RadialCovariance factor1 = RadialCovariance::exponential(1.0, 1, Role::Factor1);
  RadialCovariance factor2 = RadialCovariance::exponential(1.0, 1, Role::Factor2);
  WindowSpec window{ConvexBody::unit_box(1), ConvexBody::unit_box(1), GrowthSchedule(1.0, 1.0)};
  HermiteFunctional functional = HermiteFunctional::hermite(2);
  std::vector<double> t_ladder;
  std::size_t n_reps = 200;
  std::uint64_t master_seed = 20260822;
  double mesh = 1.0;
  int threads = 1;
  int cyclic_k = 3;          // chain length for the cyclic-integral suites
  CyclicBudget budget;       // seed follows master_seed unless set explicitly
  std::string output_dir = ".";
  std::uint64_t config_hash = 0;  // FNV-1a over the canonical JSON dump
  bool admissible = true;         // growth-rate admissibility at parse time

  GneitingCovariance covariance() const { return GneitingCovariance(factor1, factor2); }
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// GNEITING_THREADS overrides the flag value; the result is always >= 1.
int resolve_threads(int flag_value);

// {"config_hash":"0x...","seed":...,"version":"..."}. CSV artifacts carry
// it as a leading '#' comment line.
std::string provenance_json(std::uint64_t config_hash, std::uint64_t seed);
std::string provenance_line(const ExperimentConfig& cfg);
// Shortest round-trip decimal rendering used by every CSV writer.
std::string format_g17(double v);
// Binary write (LF endings regardless of platform); ConfigError on failure.
void write_text_file(const std::string& path, const std::string& text);

// Simulation artifacts: replicate table (replicate, t, y_raw) and summary
// statistics with stderrs.
std::string ensemble_csv(const ExperimentConfig& cfg, double t, const EnsembleStats& stats);
std::string ensemble_summary_json(const ExperimentConfig& cfg, double t, const EnsembleStats& stats);

// One ensemble at window scale t (the simulate command's workhorse).
EnsembleStats simulate_at(const ExperimentConfig& cfg, double t, std::uint64_t seed);

// Midpoint-lattice sweep of the regime map over (0, rho1_max) x (0, rho2_max):
// one CSV row rho1,rho2,regime,e1,e2 per cell.
std::string classify_grid_csv(int d1, int d2, int rank, double rho1_max, double rho2_max, int n1,
                              int n2);

// ---- verification suites -------------------------------------------------
// Each runner is deterministic given the config. Ladder rung r draws from
// seed master_seed + 1000003*r; single-scale suites use master_seed itself.

// Variance-growth ladder: per-rung ensembles, weighted log-log fit, and the
// theoretical slope gamma1*e1 + gamma2*e2 from the regime report.
struct VarianceSuite {
  RegimeReport report;
  double theory_slope = 0.0;
  std::vector<double> t;
  std::vector<double> var;
  std::vector<double> se;
  std::vector<EnsembleStats> stats;
  ExponentFit fit;
};
VarianceSuite run_variance_suite(const ExperimentConfig& cfg);

// Normal-limit check at the largest ladder scale: KS against N(0,1) plus
// standardized third/fourth cumulant z-scores.
struct CltSuite {
  RegimeReport report;
  double t = 0.0;
  EnsembleStats stats;
  KsResult ks;
  double z3 = 0.0, z4 = 0.0;
};
CltSuite run_clt_suite(const ExperimentConfig& cfg);

// Non-Gaussian limit check at the largest ladder scale: empirical
// standardized third cumulant against the two-block theory value. Requires a
// fourth-regime classification.
struct RosenblattSuite {
  RegimeReport report;
  double t = 0.0;
  EnsembleStats stats;
  double kappa3_theory = 0.0;
  double kappa3_emp = 0.0;  // skewness = k3 / k2^{3/2}
  double se = 0.0;          // jackknife stderr of the skewness
  double rel_gap = 0.0;
  double z_from_zero = 0.0;
};
RosenblattSuite run_rosenblatt_suite(const ExperimentConfig& cfg);

// Joint-vs-product cyclic coefficient gap over the t ladder.
struct SeparabilitySuite {
  int k = 3;
  SeparabilityGap gap;
};
SeparabilitySuite run_separability_suite(const ExperimentConfig& cfg);

// Scaled-window ratio ladder of factor 1 against its power-law target.
struct AppendixASuite {
  int k = 3;
  double target = 0.0;  // raw cyclic integral of the limiting power law
  std::vector<RatioPoint> points;
  bool monotone = true;
  double final_rel_gap = 0.0;
};
AppendixASuite run_appendixA_suite(const ExperimentConfig& cfg);

// CLI-facing wrapper: runs the named suite, applies the default thresholds,
// and renders the CSV artifact plus the JSON verdict (with a warning block
// when the growth schedule fails the admissibility check).
struct SuiteReport {
  std::string suite;
  bool pass = false;
  bool assumption_violated = false;
  std::string csv_text;
  std::string json_text;
};
SuiteReport run_suite(const std::string& suite, const ExperimentConfig& cfg);

}  // namespace gneiting
