#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "gneiting/common.hpp"
#include "gneiting/covariance.hpp"

namespace gneiting {

enum class BodyKind { UnitBox, CenteredBall, ScaledBox };

// Convex observation body: [0,1]^d, a centered ball of given radius, or an
// axis-aligned box with given side lengths anchored at the origin.
class ConvexBody {
 public:
  static ConvexBody unit_box(int dim);
  static ConvexBody centered_ball(int dim, double radius);
  static ConvexBody scaled_box(std::vector<double> sides);

  BodyKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<double>& extent() const { return extent_; }
  double volume() const;
  double diameter() const;
  bool contains(const std::vector<double>& x) const;
  // Axis-aligned bounding box [lo_i, hi_i].
  std::pair<std::vector<double>, std::vector<double>> bounding_box() const;
  // The body scaled by t about the origin.
  ConvexBody scaled(double t) const;

 private:
  BodyKind kind_ = BodyKind::UnitBox;
  int dim_ = 1;
  std::vector<double> extent_;
};

// Power-law growth schedule t1(t) = t^gamma1, t2(t) = t^gamma2.
struct GrowthSchedule {
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  GrowthSchedule(double g1, double g2) : gamma1(g1), gamma2(g2) {
    if (!(g1 > 0.0) || !(g2 > 0.0)) throw ConfigError("growth exponents must be positive");
  }
};

struct WindowSpec {
  ConvexBody body1;
  ConvexBody body2;
  GrowthSchedule schedule;
};

// Covariogram g_d(D, z) = vol(D intersect (D+z)). Closed form for boxes and
// for balls in dims 1-3; Monte Carlo otherwise.
double covariogram(const ConvexBody& body, const std::vector<double>& z);

// Monte Carlo covariogram with reported standard error.
std::pair<double, double> covariogram_mc(const ConvexBody& body, const std::vector<double>& z,
                                         std::uint64_t n_points = 1000000,
                                         std::uint64_t seed = 1);

// Both sides of the scaling identity g(tD, z) = t^d g(D, z/t).
std::pair<double, double> covariogram_scaling_check(const ConvexBody& body,
                                                    const std::vector<double>& z, double t);

// Effective-rescaling admissibility of a schedule for a given temporal
// factor: the spatial window must still diverge after the induced
// contraction, i.e. gamma1 - gamma2 * rho2 / d1 > 0 strictly.
bool rate_admissible(const GrowthSchedule& schedule, const RadialCovariance& factor2, int d1);

}  // namespace gneiting
