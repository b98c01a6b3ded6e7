// Command-line front end: regime classification, field-ensemble simulation,
// cyclic-integral tables, limit-law evaluation, and verification suites.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gneiting/common.hpp"
#include "gneiting/covariance.hpp"
#include "gneiting/cyclic.hpp"
#include "gneiting/experiments.hpp"
#include "gneiting/geometry.hpp"
#include "gneiting/regimes.hpp"
#include "gneiting/rosenblatt.hpp"

using namespace gneiting;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double to_num(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse number for ") + what + ": '" + s + "'");
  }
}

int to_int(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse integer for ") + what + ": '" + s + "'");
  }
}

// "box1" | "box:2x3" | "ball2:1.5"
ConvexBody parse_domain(const std::string& s) {
  if (s.rfind("box:", 0) == 0) {
    std::vector<double> sides;
    for (const std::string& p : split(s.substr(4), 'x')) sides.push_back(to_num(p, "box side"));
    return ConvexBody::scaled_box(std::move(sides));
  }
  if (s.rfind("box", 0) == 0) return ConvexBody::unit_box(to_int(s.substr(3), "box dimension"));
  if (s.rfind("ball", 0) == 0) {
    std::vector<std::string> parts = split(s.substr(4), ':');
    if (parts.size() != 2) throw ConfigError("ball domain wants 'ball<d>:<radius>'");
    return ConvexBody::centered_ball(to_int(parts[0], "ball dimension"),
                                     to_num(parts[1], "ball radius"));
  }
  throw ConfigError("unknown domain '" + s + "' (use box<d>, box:<s1>x..., or ball<d>:<radius>)");
}

std::pair<double, int> parse_axis(const std::string& s) {
  std::vector<std::string> parts = split(s, ':');
  if (parts.size() != 2) throw ConfigError("grid axis wants 'max:n'");
  return {to_num(parts[0], "grid max"), to_int(parts[1], "grid size")};
}

std::vector<double> parse_xgrid(const std::string& s) {
  std::vector<std::string> parts = split(s, ':');
  if (parts.size() != 3) throw ConfigError("grid wants 'lo:hi:step'");
  double lo = to_num(parts[0], "grid lo");
  double hi = to_num(parts[1], "grid hi");
  double step = to_num(parts[2], "grid step");
  if (!(step > 0.0) || !(hi > lo)) throw ConfigError("grid needs hi > lo and step > 0");
  std::vector<double> xs;
  long n = std::lround((hi - lo) / step);
  xs.reserve(std::size_t(n) + 1);
  for (long i = 0; i <= n; ++i) xs.push_back(lo + double(i) * step);
  return xs;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_text_file(path, text);
}

json report_json(const RegimeReport& r) {
  json j;
  j["regime"] = r.regime_name();
  j["law"] = r.law_name();
  j["exponent1"] = r.exponent1;
  j["exponent2"] = r.exponent2;
  if (r.law == LimitLaw::Rosenblatt) {
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
  }
  if (r.leading_constant) j["leading_constant"] = *r.leading_constant;
  j["d1"] = r.d1;
  j["d2"] = r.d2;
  j["rank"] = r.rank;
  j["rho1"] = r.rho1;
  j["rho2"] = r.rho2;
  j["long_range"] = r.long_range;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time covariance laboratory: regime classification, Gaussian-field "
               "ensembles, cyclic integrals, and second-chaos limit laws"};
  app.require_subcommand(1);
  int threads_flag = 0;
  app.add_option("--threads", threads_flag, "worker threads (env GNEITING_THREADS overrides)");
  int exit_status = 0;

  std::string invocation;
  for (int i = 1; i < argc; ++i) {
    invocation += argv[i];
    invocation += ' ';
  }

  // classify ---------------------------------------------------------------
  auto* cls = app.add_subcommand("classify", "regime report from dimensions, rank, tail indices");
  struct {
    int d1 = 1, d2 = 1, R = 2;
    double rho1 = 0.0, rho2 = 0.0;
    std::string grid, out;
  } cl;
  cls->add_option("--d1", cl.d1, "first-block dimension")->required();
  cls->add_option("--d2", cl.d2, "second-block dimension")->required();
  cls->add_option("--R", cl.R, "Hermite rank")->required();
  cls->add_option("--rho1", cl.rho1, "factor-1 tail index");
  cls->add_option("--rho2", cl.rho2, "factor-2 tail index");
  cls->add_option("--grid", cl.grid, "midpoint lattice sweep 'rho1max:n1,rho2max:n2' (CSV out)");
  cls->add_option("--out", cl.out, "output file (default stdout)");
  cls->callback([&] {
    if (!cl.grid.empty()) {
      std::vector<std::string> axes = split(cl.grid, ',');
      if (axes.size() != 2) throw ConfigError("--grid wants 'rho1max:n1,rho2max:n2'");
      auto [m1, n1] = parse_axis(axes[0]);
      auto [m2, n2] = parse_axis(axes[1]);
      std::string csv = "# " + provenance_json(fnv1a(invocation), 0) + "\n" +
                        classify_grid_csv(cl.d1, cl.d2, cl.R, m1, m2, n1, n2);
      emit(cl.out, csv);
      return;
    }
    if (cls->count("--rho1") == 0 || cls->count("--rho2") == 0)
      throw ConfigError("classify needs --rho1 and --rho2, or --grid");
    RegimeReport r = classify(cl.d1, cl.d2, cl.R, cl.rho1, cl.rho2);
    json j = report_json(r);
    j["provenance"] = json::parse(provenance_json(fnv1a(invocation), 0));
    emit(cl.out, j.dump(2) + "\n");
  });

  // simulate ---------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "replicate ensemble at one window scale");
  struct {
    std::string config, out, summary;
    double t = 0.0;
  } sm;
  sim->add_option("--config", sm.config, "experiment config JSON")->required();
  sim->add_option("--t", sm.t, "window scale (default: last t_ladder rung)");
  sim->add_option("--out", sm.out, "replicate CSV (default stdout)");
  sim->add_option("--summary", sm.summary, "summary-statistics JSON file");
  sim->callback([&] {
    ExperimentConfig cfg = load_config(sm.config);
    if (threads_flag > 0) cfg.threads = threads_flag;
    cfg.threads = resolve_threads(cfg.threads);
    double t = sim->count("--t") ? sm.t : (cfg.t_ladder.empty() ? 0.0 : cfg.t_ladder.back());
    if (!(t > 0.0)) throw ConfigError("simulate needs --t or a non-empty t_ladder");
    EnsembleStats st = simulate_at(cfg, t, cfg.master_seed);
    emit(sm.out, ensemble_csv(cfg, t, st));
    std::string summary = ensemble_summary_json(cfg, t, st);
    if (!sm.summary.empty())
      write_text_file(sm.summary, summary);
    else if (!sm.out.empty())
      std::cout << summary;
  });

  // cumulants --------------------------------------------------------------
  auto* cum = app.add_subcommand("cumulants", "normalized cyclic coefficients c_k over a body");
  struct {
    std::string kernel, domain = "box1", krange = "2..4", method = "quadrature", out;
    double alpha = 0.3, gamma = 1.0, rho = 0.5, a = 1.0, s = 0.5;
    std::int64_t n_points = 0;
    int batches = 0, cells = 0;
    std::uint64_t seed = 0;
    double mrse = 0.0;
  } cu;
  cum->add_option("--kernel", cu.kernel, "kernel family")
      ->required()
      ->check(CLI::IsMember({"power-law", "gen-cauchy", "exponential", "inv-bernstein"}));
  cum->add_option("--alpha", cu.alpha, "power-law singularity exponent");
  cum->add_option("--gamma", cu.gamma, "shape exponent (gen-cauchy / inv-bernstein)");
  cum->add_option("--rho", cu.rho, "gen-cauchy tail index");
  cum->add_option("--a", cu.a, "exponential rate");
  cum->add_option("--s", cu.s, "inv-bernstein outer exponent");
  cum->add_option("--domain", cu.domain, "box<d>, box:<s1>x..., or ball<d>:<radius>");
  cum->add_option("--k", cu.krange, "order range 'lo..hi' or a single order");
  cum->add_option("--method", cu.method, "integration path")
      ->check(CLI::IsMember({"quadrature", "mc", "qmc"}));
  cum->add_option("--n-points", cu.n_points, "MC/QMC sample budget");
  cum->add_option("--batches", cu.batches, "MC/QMC batch count");
  cum->add_option("--seed", cu.seed, "MC/QMC stream seed");
  cum->add_option("--quad-cells", cu.cells, "quadrature cells");
  cum->add_option("--max-rel-stderr", cu.mrse, "relative-stderr budget");
  cum->add_option("--out", cu.out, "output CSV (default stdout)");
  cum->callback([&] {
    ConvexBody body = parse_domain(cu.domain);
    LagKernel kernel = [&] {
      if (cu.kernel == "power-law") return LagKernel::power_law(cu.alpha, body.dim());
      if (cu.kernel == "gen-cauchy")
        return LagKernel::profile(
            RadialCovariance::gen_cauchy(cu.gamma, cu.rho, body.dim(), Role::Factor1));
      if (cu.kernel == "exponential")
        return LagKernel::profile(RadialCovariance::exponential(cu.a, body.dim(), Role::Factor1));
      return LagKernel::profile(
          RadialCovariance::inv_bernstein(cu.gamma, cu.s, body.dim(), Role::Factor1));
    }();
    int klo = 0, khi = 0;
    auto dots = cu.krange.find("..");
    if (dots == std::string::npos) {
      klo = khi = to_int(cu.krange, "order");
    } else {
      klo = to_int(cu.krange.substr(0, dots), "order range lo");
      khi = to_int(cu.krange.substr(dots + 2), "order range hi");
    }
    if (klo > khi) throw ConfigError("order range is empty");
    CyclicMethod method = cu.method == "quadrature" ? CyclicMethod::TensorQuadrature
                          : cu.method == "mc"       ? CyclicMethod::MonteCarlo
                                                    : CyclicMethod::QuasiMonteCarlo;
    CyclicBudget budget;
    if (cum->count("--n-points")) budget.n_points = cu.n_points;
    if (cum->count("--batches")) budget.batches = cu.batches;
    if (cum->count("--seed")) budget.seed = cu.seed;
    if (cum->count("--quad-cells")) budget.quad_cells = cu.cells;
    if (cum->count("--max-rel-stderr")) budget.max_rel_stderr = cu.mrse;
    std::string csv = "# " + provenance_json(fnv1a(invocation), budget.seed) + "\n";
    csv += "k,value,stderr,n_points\n";
    for (int k = klo; k <= khi; ++k) {
      CyclicCoefficient c = cyclic_integral(kernel, body, k, method, budget);
      csv += std::to_string(k) + "," + format_g17(c.value) + ",";
      if (c.stderr_value) csv += format_g17(*c.stderr_value);
      csv += "," + std::to_string(c.n_points) + "\n";
    }
    emit(cu.out, csv);
  });

  // rosenblatt -------------------------------------------------------------
  auto* ros = app.add_subcommand("rosenblatt", "limit-law density, cdf, and cumulant table");
  struct {
    double alpha = 0.3, beta = 0.28;
    int K = 40, cells = 1200, kmax = 8;
    std::string grid = "-8:12:0.01", body1 = "box1", body2 = "box1", out, cum_out;
  } ro;
  ros->add_option("--alpha", ro.alpha, "first-block exponent")->required();
  ros->add_option("--beta", ro.beta, "second-block exponent")->required();
  ros->add_option("--K", ro.K, "cumulant-series truncation order");
  ros->add_option("--cells", ro.cells, "spectral cells per block");
  ros->add_option("--kmax", ro.kmax, "highest cumulant order in the table");
  ros->add_option("--grid", ro.grid, "'lo:hi:step' evaluation grid");
  ros->add_option("--body1", ro.body1, "first-block body");
  ros->add_option("--body2", ro.body2, "second-block body");
  ros->add_option("--out", ro.out, "density CSV (default stdout)");
  ros->add_option("--cumulants-out", ro.cum_out, "cumulant-table JSON file");
  ros->callback([&] {
    ConvexBody b1 = parse_domain(ro.body1), b2 = parse_domain(ro.body2);
    RosenblattSpec spec = make_rosenblatt_spec(ro.alpha, ro.beta, b1, b2, ro.K, ro.cells);
    std::vector<double> xs = parse_xgrid(ro.grid);
    DensityResult den = rosenblatt_pdf(spec, xs);
    std::vector<double> cdf = rosenblatt_cdf_grid(spec, xs);
    std::string csv = "# " + provenance_json(fnv1a(invocation), 0) + "\nx,pdf,cdf\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
      csv += format_g17(xs[i]) + "," + format_g17(den.pdf[i]) + "," + format_g17(cdf[i]) + "\n";
    emit(ro.out, csv);
    std::vector<double> kappa = rosenblatt_cumulants(spec, ro.kmax);
    json table;
    table["provenance"] = json::parse(provenance_json(fnv1a(invocation), 0));
    table["alpha"] = ro.alpha;
    table["beta"] = ro.beta;
    table["clipped_mass"] = den.clipped_mass;
    table["aliasing_bound"] = den.aliasing_bound;
    json rows = json::array();
    for (int k = 2; k < int(kappa.size()); ++k)
      rows.push_back(json{{"k", k}, {"kappa", kappa[std::size_t(k)]}, {"c", spec_ck(spec, k)}});
    table["cumulants"] = rows;
    std::string table_text = table.dump(2) + "\n";
    if (!ro.cum_out.empty())
      write_text_file(ro.cum_out, table_text);
    else if (!ro.out.empty())
      std::cout << table_text;
  });

  // verify -----------------------------------------------------------------
  auto* ver = app.add_subcommand("verify", "run a named verification suite from a config");
  struct {
    std::string suite, config, csv_out, json_out;
  } ve;
  ver->add_option("suite", ve.suite, "variance | clt | rosenblatt | separability | appendixA")
      ->required()
      ->check(CLI::IsMember({"variance", "clt", "rosenblatt", "separability", "appendixA"}));
  ver->add_option("--config", ve.config, "experiment config JSON")->required();
  ver->add_option("--csv-out", ve.csv_out, "data CSV path (default <output_dir>/<suite>_data.csv)");
  ver->add_option("--json-out", ve.json_out,
                  "verdict JSON path (default <output_dir>/<suite>_verdict.json)");
  ver->callback([&] {
    ExperimentConfig cfg = load_config(ve.config);
    if (threads_flag > 0) cfg.threads = threads_flag;
    cfg.threads = resolve_threads(cfg.threads);
    if (!cfg.admissible)
      std::cerr << "warning: assumption-violated: growth schedule fails the "
                   "effective-rescaling admissibility check; running anyway\n";
    SuiteReport rep = run_suite(ve.suite, cfg);
    std::string dir = cfg.output_dir.empty() ? "." : cfg.output_dir;
    std::filesystem::create_directories(dir);
    std::string csv_path = ve.csv_out.empty() ? dir + "/" + ve.suite + "_data.csv" : ve.csv_out;
    std::string json_path =
        ve.json_out.empty() ? dir + "/" + ve.suite + "_verdict.json" : ve.json_out;
    write_text_file(csv_path, rep.csv_text);
    write_text_file(json_path, rep.json_text);
    std::cout << rep.json_text;
    exit_status = rep.pass ? 0 : 1;
  });

  // separability -----------------------------------------------------------
  auto* sep = app.add_subcommand("separability", "joint-vs-product coefficient gap ladder");
  struct {
    std::string config, out;
  } sg;
  sep->add_option("--config", sg.config, "experiment config JSON")->required();
  sep->add_option("--out", sg.out, "gap CSV (default stdout)");
  sep->callback([&] {
    ExperimentConfig cfg = load_config(sg.config);
    if (threads_flag > 0) cfg.threads = threads_flag;
    cfg.threads = resolve_threads(cfg.threads);
    SuiteReport rep = run_suite("separability", cfg);
    emit(sg.out, rep.csv_text);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Unsupported& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_status;
}
