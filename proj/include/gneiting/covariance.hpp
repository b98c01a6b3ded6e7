#pragma once
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gneiting/common.hpp"

namespace gneiting {

enum class Family { GenCauchy, Exponential, InvBernstein, UserTable };
enum class Role { Factor1, Factor2 };
enum class Membership { Integrable, NonIntegrable, Borderline };

inline constexpr double kRhoInf = std::numeric_limits<double>::infinity();

// Radial covariance profile c(r), r >= 0, c(0)=1, nonincreasing, with a
// regular-variation tail index rho (exponential carries the +inf sentinel:
// faster than any power law). Role records which slot of the composed
// covariance the profile was validated for.
class RadialCovariance {
 public:
  static RadialCovariance gen_cauchy(double gamma, double rho, int dim, Role role);
  static RadialCovariance exponential(double a, int dim, Role role);
  static RadialCovariance inv_bernstein(double gamma, double s, int dim, Role role);
  static RadialCovariance user_table(std::vector<double> r, std::vector<double> c, int dim,
                                     Role role, std::optional<double> declared_rho = {});

  double eval(double r) const;
  // Tail index; +inf for exponential. has_rho() is false only for
  // user tables without a declared index.
  double rho() const;
  bool has_rho() const { return has_rho_; }
  int dim() const { return dim_; }
  Role role() const { return role_; }
  Family family() const { return family_; }
  bool is_exponential() const { return family_ == Family::Exponential; }
  const std::vector<double>& params() const { return params_; }
  std::string family_name() const;

 private:
  RadialCovariance() = default;
  Family family_ = Family::GenCauchy;
  Role role_ = Role::Factor1;
  int dim_ = 1;
  double rho_ = 0.0;
  bool has_rho_ = true;
  std::vector<double> params_;              // family parameters, serialized order
  std::vector<double> table_r_, table_c_;   // user tables only
};

// L^q membership of the profile over R^dim: integrable iff q*rho > dim.
Membership lq_membership(const RadialCovariance& c, double q);

// Numerical sanity check (whitelist is the source of truth): sampled
// centered differences on a geometric grid alternate in sign as complete
// monotonicity of c (factor 1) or of (1/c)' (factor 2) demands.
bool cm_alternation_ok(const RadialCovariance& c, Role role, int max_order = 4,
                       double tol = 1e-8);

// Composed space-time covariance C(x1,x2) = c2(|x2|) c1(|x1| c2(|x2|)^{1/d1}).
class GneitingCovariance {
 public:
  GneitingCovariance(RadialCovariance factor1, RadialCovariance factor2);

  double eval_radii(double r1, double r2) const;
  double eval(const std::vector<double>& x1, const std::vector<double>& x2) const;

  const RadialCovariance& factor1() const { return f1_; }
  const RadialCovariance& factor2() const { return f2_; }
  int d1() const { return f1_.dim(); }
  int d2() const { return f2_.dim(); }
  bool valid() const { return true; }  // construction throws otherwise

 private:
  RadialCovariance f1_, f2_;
};

}  // namespace gneiting
