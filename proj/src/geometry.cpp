#include "gneiting/geometry.hpp"

#include <cmath>

#include "gneiting/quadrature.hpp"
#include "gneiting/rng.hpp"

namespace gneiting {

ConvexBody ConvexBody::unit_box(int dim) {
  if (dim < 1) throw ConfigError("dimension must be positive");
  ConvexBody b;
  b.kind_ = BodyKind::UnitBox;
  b.dim_ = dim;
  b.extent_.assign(std::size_t(dim), 1.0);
  return b;
}

ConvexBody ConvexBody::centered_ball(int dim, double radius) {
  if (dim < 1) throw ConfigError("dimension must be positive");
  if (!(radius > 0.0)) throw ConfigError("ball radius must be positive");
  ConvexBody b;
  b.kind_ = BodyKind::CenteredBall;
  b.dim_ = dim;
  b.extent_ = {radius};
  return b;
}

ConvexBody ConvexBody::scaled_box(std::vector<double> sides) {
  if (sides.empty()) throw ConfigError("box needs at least one side");
  for (double s : sides)
    if (!(s > 0.0)) throw ConfigError("box sides must be positive");
  ConvexBody b;
  b.kind_ = BodyKind::ScaledBox;
  b.dim_ = int(sides.size());
  b.extent_ = std::move(sides);
  return b;
}

double ConvexBody::volume() const {
  if (kind_ == BodyKind::CenteredBall) return ball_volume(dim_) * std::pow(extent_[0], dim_);
  double v = 1.0;
  for (double s : extent_) v *= s;
  return v;
}

double ConvexBody::diameter() const {
  if (kind_ == BodyKind::CenteredBall) return 2.0 * extent_[0];
  double s2 = 0.0;
  for (double s : extent_) s2 += s * s;
  return std::sqrt(s2);
}

bool ConvexBody::contains(const std::vector<double>& x) const {
  if (int(x.size()) != dim_) throw ConfigError("contains: dimension mismatch");
  if (kind_ == BodyKind::CenteredBall) {
    double s2 = 0.0;
    for (double v : x) s2 += v * v;
    return s2 <= extent_[0] * extent_[0];
  }
  for (int i = 0; i < dim_; ++i)
    if (x[i] < 0.0 || x[i] > extent_[i]) return false;
  return true;
}

std::pair<std::vector<double>, std::vector<double>> ConvexBody::bounding_box() const {
  std::vector<double> lo(static_cast<std::size_t>(dim_));
  std::vector<double> hi(static_cast<std::size_t>(dim_));
  if (kind_ == BodyKind::CenteredBall) {
    for (int i = 0; i < dim_; ++i) {
      lo[i] = -extent_[0];
      hi[i] = extent_[0];
    }
  } else {
    for (int i = 0; i < dim_; ++i) {
      lo[i] = 0.0;
      hi[i] = extent_[i];
    }
  }
  return {lo, hi};
}

ConvexBody ConvexBody::scaled(double t) const {
  if (!(t > 0.0)) throw ConfigError("scale factor must be positive");
  ConvexBody b = *this;
  if (kind_ == BodyKind::UnitBox) b.kind_ = BodyKind::ScaledBox;
  for (double& s : b.extent_) s *= t;
  return b;
}

namespace {

double ball_lens(int dim, double r, double u) {
  // Volume of the intersection of two radius-r balls with centers u apart.
  if (u >= 2.0 * r) return 0.0;
  switch (dim) {
    case 1:
      return 2.0 * r - u;
    case 2:
      return 2.0 * r * r * std::acos(u / (2.0 * r)) - 0.5 * u * std::sqrt(4.0 * r * r - u * u);
    case 3:
      return M_PI * (4.0 * r + u) * (2.0 * r - u) * (2.0 * r - u) / 12.0;
    default:
      return -1.0;  // no closed form wired; caller falls back to MC
  }
}

}  // namespace

double covariogram(const ConvexBody& body, const std::vector<double>& z) {
  if (int(z.size()) != body.dim()) throw ConfigError("covariogram: dimension mismatch");
  if (body.kind() == BodyKind::CenteredBall) {
    double u = 0.0;
    for (double v : z) u += v * v;
    u = std::sqrt(u);
    double g = ball_lens(body.dim(), body.extent()[0], u);
    if (g >= 0.0) return g;
    return covariogram_mc(body, z).first;
  }
  double g = 1.0;
  for (int i = 0; i < body.dim(); ++i) {
    double overlap = body.extent()[i] - std::abs(z[i]);
    if (overlap <= 0.0) return 0.0;
    g *= overlap;
  }
  return g;
}

std::pair<double, double> covariogram_mc(const ConvexBody& body, const std::vector<double>& z,
                                         std::uint64_t n_points, std::uint64_t seed) {
  if (int(z.size()) != body.dim()) throw ConfigError("covariogram: dimension mismatch");
  auto [lo, hi] = body.bounding_box();
  int d = body.dim();
  CounterRng rng(seed, 0x636f76ull /* stream tag */);
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<double> xs(static_cast<std::size_t>(d));
  std::uint64_t hits = 0, inside = 0, idx = 0;
  double box_vol = 1.0;
  for (int i = 0; i < d; ++i) box_vol *= hi[i] - lo[i];
  for (std::uint64_t p = 0; p < n_points; ++p) {
    for (int i = 0; i < d; ++i) x[std::size_t(i)] = lo[i] + (hi[i] - lo[i]) * rng.uniform(idx++);
    if (!body.contains(x)) continue;
    ++inside;
    for (int i = 0; i < d; ++i) xs[std::size_t(i)] = x[std::size_t(i)] - z[std::size_t(i)];
    if (body.contains(xs)) ++hits;
  }
  // g = vol(D) * P(x - z in D | x in D); estimate both factors from the
  // same point set so the ratio is exact as inside -> n.
  double p_in = double(inside) / double(n_points);
  double p_hit = inside ? double(hits) / double(inside) : 0.0;
  double g = box_vol * p_in * p_hit;
  double se = box_vol * p_in * std::sqrt(std::max(p_hit * (1.0 - p_hit), 1e-300) /
                                         std::max<double>(1.0, double(inside)));
  return {g, se};
}

std::pair<double, double> covariogram_scaling_check(const ConvexBody& body,
                                                    const std::vector<double>& z, double t) {
  if (!(t > 0.0)) throw ConfigError("scale factor must be positive");
  std::vector<double> zt(z);
  for (double& v : zt) v /= t;
  double lhs = covariogram(body.scaled(t), z);
  double rhs = std::pow(t, body.dim()) * covariogram(body, zt);
  return {lhs, rhs};
}

bool rate_admissible(const GrowthSchedule& schedule, const RadialCovariance& factor2, int d1) {
  if (d1 < 1) throw ConfigError("dimension must be positive");
  if (factor2.is_exponential()) return schedule.gamma2 == 0.0;  // never, for valid schedules
  double rho2 = factor2.rho();
  return schedule.gamma1 - schedule.gamma2 * rho2 / double(d1) > 0.0;
}

}  // namespace gneiting
