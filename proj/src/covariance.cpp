#include "gneiting/covariance.hpp"

#include <algorithm>
#include <cmath>

namespace gneiting {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidParams(msg);
}

}  // namespace

RadialCovariance RadialCovariance::gen_cauchy(double gamma, double rho, int dim, Role role) {
  require(dim >= 1, "dimension must be positive");
  require(gamma > 0.0 && gamma <= 1.0, "gen-cauchy requires gamma in (0,1]");
  require(rho > 0.0, "gen-cauchy requires rho > 0");
  if (role == Role::Factor2)
    require(rho <= 1.0, "factor-2 gen-cauchy requires rho <= 1 (1/c2 derivative alternation)");
  RadialCovariance c;
  c.family_ = Family::GenCauchy;
  c.role_ = role;
  c.dim_ = dim;
  c.rho_ = rho;
  c.params_ = {gamma, rho};
  return c;
}

RadialCovariance RadialCovariance::exponential(double a, int dim, Role role) {
  require(dim >= 1, "dimension must be positive");
  require(a > 0.0, "exponential requires rate a > 0");
  RadialCovariance c;
  c.family_ = Family::Exponential;
  c.role_ = role;
  c.dim_ = dim;
  c.rho_ = kRhoInf;
  c.params_ = {a};
  return c;
}

RadialCovariance RadialCovariance::inv_bernstein(double gamma, double s, int dim, Role role) {
  require(dim >= 1, "dimension must be positive");
  require(gamma > 0.0 && gamma <= 1.0, "inv-bernstein requires gamma in (0,1]");
  require(s > 0.0, "inv-bernstein requires s > 0");
  double rho = gamma * s;
  if (role == Role::Factor2)
    require(rho <= 1.0, "factor-2 inv-bernstein requires gamma*s <= 1");
  RadialCovariance c;
  c.family_ = Family::InvBernstein;
  c.role_ = role;
  c.dim_ = dim;
  c.rho_ = rho;
  c.params_ = {gamma, s};
  return c;
}

RadialCovariance RadialCovariance::user_table(std::vector<double> r, std::vector<double> cval,
                                              int dim, Role role,
                                              std::optional<double> declared_rho) {
  require(dim >= 1, "dimension must be positive");
  require(r.size() == cval.size() && r.size() >= 2, "table needs matching knots, at least two");
  require(r.front() == 0.0, "table must start at r=0");
  require(std::abs(cval.front() - 1.0) < 1e-12, "table must have c(0)=1");
  for (std::size_t i = 1; i < r.size(); ++i) {
    require(r[i] > r[i - 1], "table radii must be strictly increasing");
    require(cval[i] <= cval[i - 1] + 1e-12, "table values must be nonincreasing");
    require(cval[i] >= 0.0, "table values must be nonnegative");
  }
  if (declared_rho) require(*declared_rho > 0.0, "declared rho must be positive");
  RadialCovariance c;
  c.family_ = Family::UserTable;
  c.role_ = role;
  c.dim_ = dim;
  c.has_rho_ = declared_rho.has_value();
  c.rho_ = declared_rho.value_or(0.0);
  c.table_r_ = std::move(r);
  c.table_c_ = std::move(cval);
  return c;
}

double RadialCovariance::eval(double r) const {
  r = std::abs(r);
  switch (family_) {
    case Family::GenCauchy:
      return std::pow(1.0 + std::pow(r, params_[0]), -params_[1] / params_[0]);
    case Family::Exponential:
      return std::exp(-params_[0] * r);
    case Family::InvBernstein:
      return std::pow(1.0 + std::pow(r, params_[0]), -params_[1]);
    case Family::UserTable: {
      if (r >= table_r_.back()) return table_c_.back();
      auto it = std::upper_bound(table_r_.begin(), table_r_.end(), r);
      std::size_t i = std::size_t(it - table_r_.begin());  // r < table_r_[i]
      double w = (r - table_r_[i - 1]) / (table_r_[i] - table_r_[i - 1]);
      return table_c_[i - 1] + w * (table_c_[i] - table_c_[i - 1]);
    }
  }
  return 0.0;
}

double RadialCovariance::rho() const {
  if (!has_rho_) throw Unsupported("user-table profile has no declared tail index");
  return rho_;
}

std::string RadialCovariance::family_name() const {
  switch (family_) {
    case Family::GenCauchy: return "gen-cauchy";
    case Family::Exponential: return "exponential";
    case Family::InvBernstein: return "inv-bernstein";
    case Family::UserTable: return "user-table";
  }
  return "?";
}

Membership lq_membership(const RadialCovariance& c, double q) {
  if (q <= 0.0) throw ConfigError("lq_membership requires q > 0");
  if (c.is_exponential()) return Membership::Integrable;
  double rho = c.rho();  // throws Unsupported for undeclared tables
  double lhs = q * rho, rhs = double(c.dim());
  if (lhs > rhs) return Membership::Integrable;
  if (lhs == rhs) return Membership::Borderline;
  return Membership::NonIntegrable;
}

bool cm_alternation_ok(const RadialCovariance& c, Role role, int max_order, double tol) {
  // Factor 1: (-1)^n c^(n) >= 0. Factor 2: same alternation for (1/c)'.
  auto f = [&](double r) {
    if (role == Role::Factor1) return c.eval(r);
    double h = 5e-4 * std::max(r, 1e-3);
    return (1.0 / c.eval(r + h) - 1.0 / c.eval(r - h)) / (2.0 * h);
  };
  for (double r = 1e-3; r <= 1e3; r *= 1.6) {
    double h = 0.02 * r;
    for (int n = 0; n <= max_order; ++n) {
      // n-th centered difference with binomial weights.
      double acc = 0.0;
      for (int j = 0; j <= n; ++j) {
        double binom = 1.0;
        for (int m = 0; m < j; ++m) binom = binom * (n - m) / (m + 1);
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binom * f(r + (0.5 * n - j) * h);
      }
      double want = (n % 2 == 0) ? 1.0 : -1.0;
      double scale = std::abs(f(r)) + std::abs(acc) + 1e-300;
      if (want * acc < -tol * scale) return false;
    }
  }
  return true;
}

GneitingCovariance::GneitingCovariance(RadialCovariance factor1, RadialCovariance factor2)
    : f1_(std::move(factor1)), f2_(std::move(factor2)) {
  if (f1_.role() != Role::Factor1) throw InvalidParams("factor1 profile not validated for factor-1 role");
  if (f2_.role() != Role::Factor2) throw InvalidParams("factor2 profile not validated for factor-2 role");
}

double GneitingCovariance::eval_radii(double r1, double r2) const {
  double c2 = f2_.eval(r2);
  return c2 * f1_.eval(std::abs(r1) * std::pow(c2, 1.0 / double(d1())));
}

double GneitingCovariance::eval(const std::vector<double>& x1, const std::vector<double>& x2) const {
  if (int(x1.size()) != d1() || int(x2.size()) != d2())
    throw ConfigError("eval: point dimensions do not match the covariance");
  double s1 = 0.0, s2 = 0.0;
  for (double v : x1) s1 += v * v;
  for (double v : x2) s2 += v * v;
  return eval_radii(std::sqrt(s1), std::sqrt(s2));
}

}  // namespace gneiting
