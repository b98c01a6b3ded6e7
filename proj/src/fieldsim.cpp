#include "gneiting/fieldsim.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

#include "gneiting/rng.hpp"

namespace gneiting {
namespace {

// FFTW's planner is not thread-safe; all plan create/destroy goes
// through this mutex.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> node_coords(const GridSpec& g, int axis) {
  std::vector<double> c(std::size_t(g.n[std::size_t(axis)]));
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] = g.origin[std::size_t(axis)] + (double(k) + 0.5) * g.h;
  return c;
}

}  // namespace

GridSpec make_grid(const WindowSpec& window, double t, double h) {
  if (!(t > 0.0) || !(h > 0.0)) throw ConfigError("window scale and mesh width must be positive");
  double t1 = std::pow(t, window.schedule.gamma1);
  double t2 = std::pow(t, window.schedule.gamma2);
  GridSpec g;
  g.h = h;
  g.d1 = window.body1.dim();
  auto add_body = [&](const ConvexBody& body, double scale) {
    auto [lo, hi] = body.scaled(scale).bounding_box();
    for (std::size_t i = 0; i < lo.size(); ++i) {
      int n = std::max(1, int(std::llround((hi[i] - lo[i]) / h)));
      g.n.push_back(n);
      g.origin.push_back(lo[i]);
    }
  };
  add_body(window.body1, t1);
  add_body(window.body2, t2);
  if (g.total() > kGridNodeCap)
    throw ConfigError("grid exceeds the node cap 2^22; increase h or reduce t");
  return g;
}

std::vector<std::uint8_t> window_mask(const GridSpec& grid, const WindowSpec& window, double t) {
  double t1 = std::pow(t, window.schedule.gamma1);
  double t2 = std::pow(t, window.schedule.gamma2);
  ConvexBody b1 = window.body1.scaled(t1);
  ConvexBody b2 = window.body2.scaled(t2);
  if (b1.kind() != BodyKind::CenteredBall && b2.kind() != BodyKind::CenteredBall) return {};
  int d = grid.dim(), d1 = grid.d1;
  std::vector<std::vector<double>> axes;
  for (int i = 0; i < d; ++i) axes.push_back(node_coords(grid, i));
  std::vector<std::uint8_t> mask(grid.total());
  std::vector<int> idx(std::size_t(d), 0);
  std::vector<double> x1(static_cast<std::size_t>(d1));
  std::vector<double> x2(std::size_t(d - d1));
  for (std::size_t flat = 0; flat < mask.size(); ++flat) {
    for (int i = 0; i < d1; ++i) x1[std::size_t(i)] = axes[std::size_t(i)][std::size_t(idx[std::size_t(i)])];
    for (int i = d1; i < d; ++i) x2[std::size_t(i - d1)] = axes[std::size_t(i)][std::size_t(idx[std::size_t(i)])];
    mask[flat] = b1.contains(x1) && b2.contains(x2) ? 1 : 0;
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[std::size_t(i)] < grid.n[std::size_t(i)]) break;
      idx[std::size_t(i)] = 0;
    }
  }
  return mask;
}

CirculantEmbedding::CirculantEmbedding(const GneitingCovariance& cov, const GridSpec& grid)
    : grid_(grid) {
  if (grid_.dim() != cov.d1() + cov.d2())
    throw ConfigError("grid dimension does not match the covariance");
  if (grid_.d1 != cov.d1()) throw ConfigError("grid block split does not match the covariance");
  for (int factor : {2, 4, 8}) {
    factor_ = factor;
    build_spectrum(cov);
    if (!amp_.empty()) return;
  }
  if (grid_.total() <= 4096) {
    factor_ = 0;
    build_cholesky(cov);
    return;
  }
  throw EmbeddingFailed(
      "circulant embedding not nonnegative at factors 2/4/8 and grid too large for the "
      "Cholesky fallback");
}

void CirculantEmbedding::build_spectrum(const GneitingCovariance& cov) {
  amp_.clear();
  m_.assign(grid_.n.begin(), grid_.n.end());
  for (int& v : m_) v *= factor_;
  m_total_ = 1;
  for (int v : m_) m_total_ *= std::size_t(v);
  if (m_total_ > (std::size_t(1) << 26)) return;  // torus too large; try fallback path

  fftw_complex* buf;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf = fftw_alloc_complex(m_total_);
  }
  // Covariance of the torus lag: per-axis distance min(k, M-k) * h.
  int d = grid_.dim(), d1 = grid_.d1;
  std::vector<int> idx(std::size_t(d), 0);
  for (std::size_t flat = 0; flat < m_total_; ++flat) {
    double r1 = 0.0, r2 = 0.0;
    for (int i = 0; i < d; ++i) {
      int k = idx[std::size_t(i)], M = m_[std::size_t(i)];
      double lag = double(std::min(k, M - k)) * grid_.h;
      if (i < d1)
        r1 += lag * lag;
      else
        r2 += lag * lag;
    }
    buf[flat][0] = cov.eval_radii(std::sqrt(r1), std::sqrt(r2));
    buf[flat][1] = 0.0;
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[std::size_t(i)] < m_[std::size_t(i)]) break;
      idx[std::size_t(i)] = 0;
    }
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(d, m_.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  double neg_mass = 0.0, abs_mass = 0.0, min_ev = 0.0;
  for (std::size_t i = 0; i < m_total_; ++i) {
    double ev = buf[i][0];
    abs_mass += std::abs(ev);
    if (ev < 0.0) neg_mass -= ev;
    if (ev < min_ev) min_ev = ev;
  }
  double rel = abs_mass > 0.0 ? neg_mass / abs_mass : 0.0;
  if (min_ev < 0.0 && rel > 1e-3) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_free(buf);
    return;  // caller advances the doubling factor
  }
  clipped_mass_ = rel;
  amp_.resize(m_total_);
  for (std::size_t i = 0; i < m_total_; ++i) {
    double ev = buf[i][0] > 0.0 ? buf[i][0] : 0.0;
    amp_[i] = std::sqrt(ev / double(m_total_));
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_free(buf);
  }
}

void CirculantEmbedding::build_cholesky(const GneitingCovariance& cov) {
  // Dense covariance over the grid nodes; packed lower-triangular LL^T.
  std::size_t n = grid_.total();
  int d = grid_.dim(), d1 = grid_.d1;
  std::vector<std::vector<double>> axes;
  for (int i = 0; i < d; ++i) axes.push_back(node_coords(grid_, i));
  auto coords = [&](std::size_t flat, std::vector<double>& x) {
    for (int i = d - 1; i >= 0; --i) {
      int ni = grid_.n[std::size_t(i)];
      x[std::size_t(i)] = axes[std::size_t(i)][flat % std::size_t(ni)];
      flat /= std::size_t(ni);
    }
  };
  chol_.assign(n * (n + 1) / 2, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return chol_[i * (i + 1) / 2 + j]; };
  std::vector<double> xi(static_cast<std::size_t>(d));
  std::vector<double> xj(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < n; ++i) {
    coords(i, xi);
    for (std::size_t j = 0; j <= i; ++j) {
      coords(j, xj);
      double r1 = 0.0, r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        double diff = xi[std::size_t(a)] - xj[std::size_t(a)];
        if (a < d1)
          r1 += diff * diff;
        else
          r2 += diff * diff;
      }
      at(i, j) = cov.eval_radii(std::sqrt(r1), std::sqrt(r2));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    double diag = at(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= at(j, k) * at(j, k);
    if (diag <= 0.0) throw EmbeddingFailed("covariance matrix not positive definite in fallback");
    diag = std::sqrt(diag);
    at(j, j) = diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = at(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= at(i, k) * at(j, k);
      at(i, j) = v / diag;
    }
  }
}

CirculantEmbedding::Sampler::Sampler(const CirculantEmbedding& owner) : owner_(owner) {
  if (owner_.used_cholesky()) return;
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_complex* buf = fftw_alloc_complex(owner_.m_total_);
  buf_ = buf;
  plan_ = fftw_plan_dft(owner_.grid_.dim(), const_cast<int*>(owner_.m_.data()), buf, buf,
                        FFTW_FORWARD, FFTW_ESTIMATE);
}

CirculantEmbedding::Sampler::~Sampler() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  if (buf_) fftw_free(static_cast<fftw_complex*>(buf_));
}

void CirculantEmbedding::Sampler::sample(std::uint64_t seed, std::uint64_t rep,
                                         std::vector<double>& out) {
  const GridSpec& g = owner_.grid_;
  out.resize(g.total());
  CounterRng rng(seed, rep);
  if (owner_.used_cholesky()) {
    std::size_t n = g.total();
    std::vector<double> xi(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = rng.normal(i);
    const std::vector<double>& L = owner_.chol_;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      const double* row = &L[i * (i + 1) / 2];
      for (std::size_t j = 0; j <= i; ++j) s += row[j] * xi[j];
      out[i] = s;
    }
    return;
  }
  fftw_complex* buf = static_cast<fftw_complex*>(buf_);
  std::size_t mt = owner_.m_total_;
  for (std::size_t i = 0; i < mt; ++i) {
    double a = owner_.amp_[i];
    buf[i][0] = a * rng.normal(2 * i);
    buf[i][1] = a * rng.normal(2 * i + 1);
  }
  fftw_execute(static_cast<fftw_plan>(plan_));
  // Restrict the torus field to the grid block; real part carries the law.
  int d = g.dim();
  std::vector<int> idx(std::size_t(d), 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t src = 0;
    for (int i = 0; i < d; ++i) src = src * std::size_t(owner_.m_[std::size_t(i)]) + std::size_t(idx[std::size_t(i)]);
    out[flat] = buf[src][0];
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[std::size_t(i)] < g.n[std::size_t(i)]) break;
      idx[std::size_t(i)] = 0;
    }
  }
}

}  // namespace gneiting
