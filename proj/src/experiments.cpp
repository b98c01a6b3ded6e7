#include "gneiting/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "gneiting/fieldsim.hpp"

namespace gneiting {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& o, const char* where, std::initializer_list<const char*> allowed) {
  if (!o.is_object()) bad(std::string(where) + " must be a JSON object");
  for (auto it = o.begin(); it != o.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) bad("unknown key '" + it.key() + "' in " + where);
  }
}

const json& at(const json& o, const char* where, const char* key) {
  auto it = o.find(key);
  if (it == o.end()) bad(std::string(where) + " is missing required key '" + key + "'");
  return *it;
}

double num(const json& o, const char* where, const char* key) {
  const json& v = at(o, where, key);
  if (!v.is_number()) bad(std::string(where) + "." + key + " must be a number");
  return v.get<double>();
}

double num_or(const json& o, const char* where, const char* key, double dflt) {
  auto it = o.find(key);
  if (it == o.end()) return dflt;
  if (!it->is_number()) bad(std::string(where) + "." + key + " must be a number");
  return it->get<double>();
}

std::int64_t int_req(const json& o, const char* where, const char* key) {
  const json& v = at(o, where, key);
  if (!v.is_number_integer()) bad(std::string(where) + "." + key + " must be an integer");
  return v.get<std::int64_t>();
}

std::int64_t int_or(const json& o, const char* where, const char* key, std::int64_t dflt) {
  auto it = o.find(key);
  if (it == o.end()) return dflt;
  if (!it->is_number_integer()) bad(std::string(where) + "." + key + " must be an integer");
  return it->get<std::int64_t>();
}

std::string str(const json& o, const char* where, const char* key) {
  const json& v = at(o, where, key);
  if (!v.is_string()) bad(std::string(where) + "." + key + " must be a string");
  return v.get<std::string>();
}

std::vector<double> num_array(const json& v, const char* where) {
  if (!v.is_array()) bad(std::string(where) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) bad(std::string(where) + " must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

RadialCovariance parse_factor(const json& o, const char* where, Role role) {
  if (!o.is_object()) bad(std::string(where) + " must be a JSON object");
  std::string family = str(o, where, "family");
  if (family == "gen-cauchy") {
    check_keys(o, where, {"family", "gamma", "rho", "dim"});
    return RadialCovariance::gen_cauchy(num(o, where, "gamma"), num(o, where, "rho"),
                                        int(int_or(o, where, "dim", 1)), role);
  }
  if (family == "exponential") {
    check_keys(o, where, {"family", "a", "dim"});
    return RadialCovariance::exponential(num(o, where, "a"), int(int_or(o, where, "dim", 1)),
                                         role);
  }
  if (family == "inv-bernstein") {
    check_keys(o, where, {"family", "gamma", "s", "dim"});
    return RadialCovariance::inv_bernstein(num(o, where, "gamma"), num(o, where, "s"),
                                           int(int_or(o, where, "dim", 1)), role);
  }
  if (family == "user-table") {
    check_keys(o, where, {"family", "r", "c", "dim", "rho"});
    std::optional<double> rho;
    if (o.contains("rho")) rho = num(o, where, "rho");
    return RadialCovariance::user_table(num_array(at(o, where, "r"), where),
                                        num_array(at(o, where, "c"), where),
                                        int(int_or(o, where, "dim", 1)), role, rho);
  }
  bad(std::string(where) + ": unknown family '" + family + "'");
}

ConvexBody parse_body(const json& o, const char* where) {
  if (!o.is_object()) bad(std::string(where) + " must be a JSON object");
  std::string kind = str(o, where, "kind");
  if (kind == "unit-box") {
    check_keys(o, where, {"kind", "dim"});
    return ConvexBody::unit_box(int(int_or(o, where, "dim", 1)));
  }
  if (kind == "ball") {
    check_keys(o, where, {"kind", "dim", "radius"});
    return ConvexBody::centered_ball(int(int_or(o, where, "dim", 1)), num(o, where, "radius"));
  }
  if (kind == "box") {
    check_keys(o, where, {"kind", "sides"});
    return ConvexBody::scaled_box(num_array(at(o, where, "sides"), where));
  }
  bad(std::string(where) + ": unknown body kind '" + kind + "'");
}

HermiteFunctional parse_functional(const json& o, const char* where) {
  if (!o.is_object()) bad(std::string(where) + " must be a JSON object");
  std::string kind = str(o, where, "kind");
  if (kind == "hermite") {
    check_keys(o, where, {"kind", "q"});
    return HermiteFunctional::hermite(int(int_req(o, where, "q")));
  }
  if (kind == "indicator-abs") {
    check_keys(o, where, {"kind", "u", "q_max"});
    return HermiteFunctional::indicator_abs(
        num(o, where, "u"), int(int_or(o, where, "q_max", HermiteFunctional::kDefaultQmax)));
  }
  if (kind == "indicator") {
    check_keys(o, where, {"kind", "u", "q_max"});
    return HermiteFunctional::indicator(
        num(o, where, "u"), int(int_or(o, where, "q_max", HermiteFunctional::kDefaultQmax)));
  }
  if (kind == "power") {
    check_keys(o, where, {"kind", "p"});
    return HermiteFunctional::power(int(int_req(o, where, "p")));
  }
  bad(std::string(where) + ": unknown functional kind '" + kind + "'");
}

json prov(std::uint64_t config_hash, std::uint64_t seed) {
  char hex[32];
  std::snprintf(hex, sizeof(hex), "0x%016llx", static_cast<unsigned long long>(config_hash));
  json j;
  j["config_hash"] = hex;
  j["seed"] = seed;
  j["version"] = kVersion;
  return j;
}

std::uint64_t rung_seed(const ExperimentConfig& cfg, std::size_t r) {
  return cfg.master_seed + 1000003ULL * r;
}

EnsembleStats run_at_scale(const ExperimentConfig& cfg, double t, std::uint64_t seed) {
  GneitingCovariance cov = cfg.covariance();
  GridSpec grid = make_grid(cfg.window, t, cfg.mesh);
  std::vector<std::uint8_t> mask = window_mask(grid, cfg.window, t);
  CirculantEmbedding emb(cov, grid);
  return run_ensemble(emb, cfg.functional, mask.empty() ? nullptr : &mask, seed, cfg.n_reps,
                      resolve_threads(cfg.threads));
}

json check_item(const char* name, double statistic, double threshold, bool pass) {
  json j;
  j["test"] = name;
  j["statistic"] = statistic;
  j["threshold"] = threshold;
  j["pass"] = pass;
  return j;
}

std::string render_verdict(const ExperimentConfig& cfg, const std::string& suite,
                           const json& checks, const json& extra, bool pass) {
  json j;
  j["provenance"] = prov(cfg.config_hash, cfg.master_seed);
  j["suite"] = suite;
  j["checks"] = checks;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  if (!cfg.admissible) {
    j["assumption_violated"] = true;
    j["warnings"] = json::array(
        {json{{"type", "assumption-violated"},
              {"detail", "growth schedule fails the effective-rescaling admissibility check: "
                         "the rescaled first-block window does not diverge"}}});
  }
  j["pass"] = pass;
  return j.dump(2) + "\n";
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const std::exception& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc, "config", {"schema", "covariance", "window", "functional", "t_ladder", "n_reps",
                             "master_seed", "mesh", "threads", "cyclic", "output_dir"});
  if (int_req(doc, "config", "schema") != 1) bad("config.schema must be 1");

  ExperimentConfig cfg;
  const json& cov = at(doc, "config", "covariance");
  check_keys(cov, "covariance", {"factor1", "factor2"});
  cfg.factor1 = parse_factor(at(cov, "covariance", "factor1"), "covariance.factor1", Role::Factor1);
  cfg.factor2 = parse_factor(at(cov, "covariance", "factor2"), "covariance.factor2", Role::Factor2);

  const json& win = at(doc, "config", "window");
  check_keys(win, "window", {"body1", "body2", "gamma1", "gamma2"});
  ConvexBody b1 = parse_body(at(win, "window", "body1"), "window.body1");
  ConvexBody b2 = parse_body(at(win, "window", "body2"), "window.body2");
  GrowthSchedule sched(num_or(win, "window", "gamma1", 1.0), num_or(win, "window", "gamma2", 1.0));
  cfg.window = WindowSpec{std::move(b1), std::move(b2), sched};

  cfg.functional = parse_functional(at(doc, "config", "functional"), "functional");

  if (doc.contains("t_ladder")) {
    cfg.t_ladder = num_array(doc["t_ladder"], "t_ladder");
    for (double t : cfg.t_ladder)
      if (!(t > 0.0)) bad("t_ladder entries must be positive");
  }
  std::int64_t reps = int_or(doc, "config", "n_reps", 200);
  if (reps < 1) bad("config.n_reps must be positive");
  cfg.n_reps = std::size_t(reps);
  cfg.master_seed = std::uint64_t(int_or(doc, "config", "master_seed", 20260822));
  cfg.mesh = num_or(doc, "config", "mesh", 1.0);
  if (!(cfg.mesh > 0.0)) bad("config.mesh must be positive");
  cfg.threads = int(int_or(doc, "config", "threads", 1));
  if (cfg.threads < 1) bad("config.threads must be >= 1");

  cfg.budget.seed = cfg.master_seed;
  if (doc.contains("cyclic")) {
    const json& cy = doc["cyclic"];
    check_keys(cy, "cyclic", {"k", "n_points", "batches", "seed", "quad_cells", "max_rel_stderr"});
    cfg.cyclic_k = int(int_or(cy, "cyclic", "k", cfg.cyclic_k));
    cfg.budget.n_points = int_or(cy, "cyclic", "n_points", cfg.budget.n_points);
    cfg.budget.batches = int(int_or(cy, "cyclic", "batches", cfg.budget.batches));
    cfg.budget.seed = std::uint64_t(int_or(cy, "cyclic", "seed", std::int64_t(cfg.master_seed)));
    cfg.budget.quad_cells = int(int_or(cy, "cyclic", "quad_cells", cfg.budget.quad_cells));
    cfg.budget.max_rel_stderr = num_or(cy, "cyclic", "max_rel_stderr", cfg.budget.max_rel_stderr);
    if (cfg.budget.n_points < 1 || cfg.budget.batches < 2)
      bad("cyclic budget needs n_points >= 1 and batches >= 2");
  }
  if (doc.contains("output_dir")) cfg.output_dir = str(doc, "config", "output_dir");

  if (cfg.factor1.dim() != cfg.window.body1.dim() || cfg.factor2.dim() != cfg.window.body2.dim())
    bad("factor dimensions must match the window body dimensions");
  (void)cfg.covariance();  // validates the factor roles before any sampling
  cfg.admissible = rate_admissible(cfg.window.schedule, cfg.factor2, cfg.factor1.dim());
  cfg.config_hash = fnv1a(doc.dump());
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

int resolve_threads(int flag_value) {
  int v = flag_value;
  if (const char* env = std::getenv("GNEITING_THREADS")) {
    char* end = nullptr;
    long parsed = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || parsed < 1) bad("GNEITING_THREADS must be a positive integer");
    v = int(parsed);
  }
  return v < 1 ? 1 : v;
}

std::string provenance_json(std::uint64_t config_hash, std::uint64_t seed) {
  return prov(config_hash, seed).dump();
}

std::string provenance_line(const ExperimentConfig& cfg) {
  return "# " + provenance_json(cfg.config_hash, cfg.master_seed) + "\n";
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) bad("cannot open output file for writing: " + path);
  out.write(text.data(), std::streamsize(text.size()));
  if (!out) bad("write failed: " + path);
}

std::string ensemble_csv(const ExperimentConfig& cfg, double t, const EnsembleStats& stats) {
  std::string out = provenance_line(cfg);
  out += "replicate,t,y_raw\n";
  for (std::size_t i = 0; i < stats.values.size(); ++i)
    out += std::to_string(i) + "," + format_g17(t) + "," + format_g17(stats.values[i]) + "\n";
  return out;
}

std::string ensemble_summary_json(const ExperimentConfig& cfg, double t,
                                  const EnsembleStats& stats) {
  json j;
  j["provenance"] = prov(cfg.config_hash, cfg.master_seed);
  j["t"] = t;
  j["n"] = stats.n;
  j["mean"] = stats.mean;
  j["k2"] = stats.k2;
  j["k3"] = stats.k3;
  j["k4"] = stats.k4;
  j["skew"] = stats.skew;
  j["exkurt"] = stats.exkurt;
  j["se_mean"] = stats.se_mean;
  j["se_k2"] = stats.se_k2;
  j["se_k3"] = stats.se_k3;
  j["se_skew"] = stats.se_skew;
  j["se_exkurt"] = stats.se_exkurt;
  return j.dump(2) + "\n";
}

EnsembleStats simulate_at(const ExperimentConfig& cfg, double t, std::uint64_t seed) {
  return run_at_scale(cfg, t, seed);
}

std::string classify_grid_csv(int d1, int d2, int rank, double rho1_max, double rho2_max, int n1,
                              int n2) {
  if (n1 < 1 || n2 < 1) bad("grid sizes must be positive");
  if (!(rho1_max > 0.0) || !(rho2_max > 0.0)) bad("grid tail-index ranges must be positive");
  std::string out = "rho1,rho2,regime,e1,e2\n";
  for (int i = 0; i < n1; ++i) {
    double rho1 = (i + 0.5) * rho1_max / n1;
    for (int j = 0; j < n2; ++j) {
      double rho2 = (j + 0.5) * rho2_max / n2;
      RegimeReport rep = classify(d1, d2, rank, rho1, rho2);
      out += format_g17(rho1) + "," + format_g17(rho2) + "," + rep.regime_name() + "," +
             format_g17(rep.exponent1) + "," + format_g17(rep.exponent2) + "\n";
    }
  }
  return out;
}

VarianceSuite run_variance_suite(const ExperimentConfig& cfg) {
  if (cfg.t_ladder.size() < 4)
    bad("variance suite needs a t_ladder with at least 4 rungs");
  VarianceSuite s;
  s.report = classify(cfg.covariance(), cfg.factor1.dim(), cfg.factor2.dim(),
                      cfg.functional.rank());
  s.theory_slope = cfg.window.schedule.gamma1 * s.report.exponent1 +
                   cfg.window.schedule.gamma2 * s.report.exponent2;
  for (std::size_t r = 0; r < cfg.t_ladder.size(); ++r) {
    double t = cfg.t_ladder[r];
    EnsembleStats st = run_at_scale(cfg, t, rung_seed(cfg, r));
    s.t.push_back(t);
    s.var.push_back(st.k2);
    s.se.push_back(st.se_k2);
    s.stats.push_back(std::move(st));
  }
  s.fit = exponent_fit(s.t, s.var, s.se);
  return s;
}

CltSuite run_clt_suite(const ExperimentConfig& cfg) {
  if (cfg.t_ladder.empty()) bad("clt suite needs a non-empty t_ladder");
  CltSuite s;
  s.report = classify(cfg.covariance(), cfg.factor1.dim(), cfg.factor2.dim(),
                      cfg.functional.rank());
  s.t = cfg.t_ladder.back();
  s.stats = run_at_scale(cfg, s.t, cfg.master_seed);
  s.ks = ks_normal_test(s.stats.values);
  s.z3 = s.stats.se_skew > 0.0 ? s.stats.skew / s.stats.se_skew : 0.0;
  s.z4 = s.stats.se_exkurt > 0.0 ? s.stats.exkurt / s.stats.se_exkurt : 0.0;
  return s;
}

RosenblattSuite run_rosenblatt_suite(const ExperimentConfig& cfg) {
  if (cfg.t_ladder.empty()) bad("rosenblatt suite needs a non-empty t_ladder");
  RosenblattSuite s;
  s.report = classify(cfg.covariance(), cfg.factor1.dim(), cfg.factor2.dim(),
                      cfg.functional.rank());
  if (s.report.regime != Regime::Case4Rosenblatt)
    bad("rosenblatt suite requires a model in the non-Gaussian regime (classified as " +
        s.report.regime_name() + ")");
  CyclicCoefficient c3 =
      rosenblatt_ck(s.report.alpha, s.report.beta, cfg.window.body1, cfg.window.body2, 3,
                    CyclicMethod::TensorQuadrature, cfg.budget);
  s.kappa3_theory = 8.0 * c3.value;  // 2^{k-1}(k-1)! at k = 3
  s.t = cfg.t_ladder.back();
  s.stats = run_at_scale(cfg, s.t, cfg.master_seed);
  s.kappa3_emp = s.stats.skew;
  s.se = s.stats.se_skew;
  s.rel_gap = std::abs(s.kappa3_emp - s.kappa3_theory) / std::abs(s.kappa3_theory);
  s.z_from_zero = s.se > 0.0 ? s.kappa3_emp / s.se : 0.0;
  return s;
}

SeparabilitySuite run_separability_suite(const ExperimentConfig& cfg) {
  if (cfg.t_ladder.empty()) bad("separability suite needs a non-empty t_ladder");
  SeparabilitySuite s;
  s.k = cfg.cyclic_k;
  s.gap = separability_gap(cfg.covariance(), cfg.window, s.k, cfg.t_ladder, cfg.budget);
  return s;
}

AppendixASuite run_appendixA_suite(const ExperimentConfig& cfg) {
  if (cfg.t_ladder.empty()) bad("appendixA suite needs a non-empty t_ladder");
  if (!cfg.factor1.has_rho()) bad("appendixA suite needs a regularly varying factor 1");
  double rho = cfg.factor1.rho();
  int d = cfg.factor1.dim();
  if (!(rho > 0.0 && rho < 0.5 * double(d)))
    bad("appendixA suite requires 0 < rho < dim/2 for factor 1");
  AppendixASuite s;
  s.k = cfg.cyclic_k;
  CyclicCoefficient target = cyclic_integral(LagKernel::power_law(rho, d), cfg.window.body1, s.k,
                                             CyclicMethod::TensorQuadrature, cfg.budget);
  s.target = target.numerator;
  for (double t : cfg.t_ladder)
    s.points.push_back(appendixA_ratio(cfg.factor1, cfg.window.body1, s.k, t, cfg.budget));
  double prev = std::numeric_limits<double>::infinity();
  for (const RatioPoint& p : s.points) {
    double gap = std::abs(p.ratio - s.target);
    if (gap > prev) s.monotone = false;
    prev = gap;
  }
  s.final_rel_gap = std::abs(s.points.back().ratio - s.target) / std::abs(s.target);
  return s;
}

SuiteReport run_suite(const std::string& suite, const ExperimentConfig& cfg) {
  SuiteReport rep;
  rep.suite = suite;
  rep.assumption_violated = !cfg.admissible;
  json checks = json::array();
  json extra = json::object();

  if (suite == "variance") {
    VarianceSuite s = run_variance_suite(cfg);
    double dev = std::abs(s.fit.slope - s.theory_slope);
    bool ok = dev <= 0.25;
    checks.push_back(check_item("slope-deviation", dev, 0.25, ok));
    extra["slope"] = s.fit.slope;
    extra["se_slope"] = s.fit.se_slope;
    extra["theory_slope"] = s.theory_slope;
    extra["r2"] = s.fit.r2;
    extra["regime"] = s.report.regime_name();
    rep.pass = ok;
    std::string csv = provenance_line(cfg);
    csv += "t,n_reps,variance,stderr\n";
    for (std::size_t i = 0; i < s.t.size(); ++i)
      csv += format_g17(s.t[i]) + "," + std::to_string(s.stats[i].n) + "," + format_g17(s.var[i]) +
             "," + format_g17(s.se[i]) + "\n";
    rep.csv_text = std::move(csv);
  } else if (suite == "clt") {
    CltSuite s = run_clt_suite(cfg);
    bool ks_ok = s.ks.p_value > 0.01;
    bool z3_ok = std::abs(s.z3) < 4.0;
    bool z4_ok = std::abs(s.z4) < 4.0;
    json ks = check_item("ks-normal", s.ks.statistic, 0.01, ks_ok);
    ks["p_value"] = s.ks.p_value;
    checks.push_back(ks);
    checks.push_back(check_item("z3-abs", std::abs(s.z3), 4.0, z3_ok));
    checks.push_back(check_item("z4-abs", std::abs(s.z4), 4.0, z4_ok));
    extra["t"] = s.t;
    extra["regime"] = s.report.regime_name();
    rep.pass = ks_ok && z3_ok && z4_ok;
    rep.csv_text = ensemble_csv(cfg, s.t, s.stats);
  } else if (suite == "rosenblatt") {
    RosenblattSuite s = run_rosenblatt_suite(cfg);
    bool gap_ok = s.rel_gap <= 0.25;
    bool sep_ok = s.z_from_zero > 5.0;
    checks.push_back(check_item("kappa3-relative-gap", s.rel_gap, 0.25, gap_ok));
    checks.push_back(check_item("kappa3-separation-from-zero", s.z_from_zero, 5.0, sep_ok));
    extra["t"] = s.t;
    extra["kappa3_theory"] = s.kappa3_theory;
    extra["kappa3_empirical"] = s.kappa3_emp;
    extra["se"] = s.se;
    extra["alpha"] = s.report.alpha;
    extra["beta"] = s.report.beta;
    rep.pass = gap_ok && sep_ok;
    rep.csv_text = ensemble_csv(cfg, s.t, s.stats);
  } else if (suite == "separability") {
    SeparabilitySuite s = run_separability_suite(cfg);
    bool ok = true;
    for (std::size_t i = 0; i < s.gap.decrease.size(); ++i)
      if (!(s.gap.decrease[i] > s.gap.se_decrease[i])) ok = false;
    checks.push_back(check_item("gap-strictly-decreasing", ok ? 1.0 : 0.0, 1.0, ok));
    extra["k"] = s.k;
    rep.pass = ok;
    std::string csv = provenance_line(cfg);
    csv += "t,gap,stderr,decrease_to_next,decrease_stderr\n";
    for (std::size_t i = 0; i < s.gap.t.size(); ++i) {
      csv += format_g17(s.gap.t[i]) + "," + format_g17(s.gap.gap[i]) + "," +
             format_g17(s.gap.se[i]) + ",";
      if (i < s.gap.decrease.size())
        csv += format_g17(s.gap.decrease[i]) + "," + format_g17(s.gap.se_decrease[i]);
      else
        csv += ",";
      csv += "\n";
    }
    rep.csv_text = std::move(csv);
  } else if (suite == "appendixA") {
    AppendixASuite s = run_appendixA_suite(cfg);
    bool gap_ok = s.final_rel_gap < 0.10;
    checks.push_back(check_item("ratio-monotone", s.monotone ? 1.0 : 0.0, 1.0, s.monotone));
    checks.push_back(check_item("final-relative-gap", s.final_rel_gap, 0.10, gap_ok));
    extra["k"] = s.k;
    extra["target"] = s.target;
    rep.pass = s.monotone && gap_ok;
    std::string csv = provenance_line(cfg);
    csv += "t,ratio,stderr,target\n";
    for (const RatioPoint& p : s.points)
      csv += format_g17(p.t) + "," + format_g17(p.ratio) + "," + format_g17(p.stderr_value) + "," +
             format_g17(s.target) + "\n";
    rep.csv_text = std::move(csv);
  } else {
    bad("unknown verification suite: " + suite);
  }

  rep.json_text = render_verdict(cfg, suite, checks, extra, rep.pass);
  return rep;
}

}  // namespace gneiting
