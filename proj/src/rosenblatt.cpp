#include "gneiting/rosenblatt.hpp"

#include <algorithm>
#include <cmath>

namespace gneiting {
namespace {

constexpr double kXiMax = 24.0;    // inversion half-range
constexpr double kDxi = 0.01;      // frequency spacing
constexpr double kBigPair = 0.35;  // |2 xi mu| threshold marking a dominant pair
constexpr double kTwoPi = 6.283185307179586476925286766559;

using cplx = std::complex<double>;

struct PairSplit {
  std::vector<double> big;            // dominant pair weights mu_i nu_j / sqrt(2)
  std::vector<double> small_sums;     // S_k of the small pairs, k = 0..K (0,1 unused)
  double var_deficit = 0.0;           // 1 - 2 sum of all pair weights squared
};

PairSplit split_pairs(const RosenblattSpec& spec) {
  double thresh = kBigPair / (2.0 * kXiMax);
  PairSplit out;
  out.small_sums.assign(std::size_t(spec.K) + 1, 0.0);
  // Accumulate the small-pair power sums pair by pair: they are sums of
  // like-signed tiny terms. A factorized all-pair total minus the dominant
  // pairs cancels catastrophically at high order (the true remainder sits
  // ~70 digits below the subtracted pieces) and the (2 xi)^k growth then
  // amplifies the garbage into overflow at the grid edge.
  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  double s2_pairs = 0.0;
  for (double m : spec.mu) {
    for (double v : spec.nu) {
      double w = m * v * inv_sqrt2;
      s2_pairs += w * w;
      if (std::abs(w) >= thresh) {
        out.big.push_back(w);
        continue;
      }
      double p = w * w;
      for (int k = 2; k <= spec.K; ++k) {
        out.small_sums[std::size_t(k)] += p;
        p *= w;
        if (p == 0.0) break;
      }
    }
  }
  std::sort(out.big.rbegin(), out.big.rend());
  out.var_deficit = 1.0 - 2.0 * s2_pairs;
  if (out.var_deficit < 0.0) {
    if (out.var_deficit < -1e-6)
      throw NumericalError("spectral variance exceeds the exact normalization");
    out.var_deficit = 0.0;
  }
  return out;
}

}  // namespace

RosenblattSpec make_rosenblatt_spec(double alpha, double beta, const ConvexBody& body1,
                                    const ConvexBody& body2, int K, int cells) {
  if (K < 4) throw ConfigError("truncation order must be at least 4");
  RosenblattSpec spec;
  spec.alpha = alpha;
  spec.beta = beta;
  spec.body1 = body1;
  spec.body2 = body2;
  spec.K = K;
  spec.mu = normalized_spectrum(alpha, body1, cells);
  spec.nu = normalized_spectrum(beta, body2, cells);
  CyclicBudget budget;
  budget.quad_cells = cells;
  for (int k = 2; k <= std::min(K, 8); ++k)
    spec.ck_table.push_back(
        rosenblatt_ck(alpha, beta, body1, body2, k, CyclicMethod::TensorQuadrature, budget));
  for (int k = 9; k <= K; ++k) {
    CyclicCoefficient ck;
    ck.k = k;
    ck.method = CyclicMethod::TensorQuadrature;
    ck.n_points = cells;
    double pk = 0.0, qk = 0.0;
    for (double m : spec.mu) pk += std::pow(m, double(k));
    for (double v : spec.nu) qk += std::pow(v, double(k));
    ck.value = std::pow(2.0, -0.5 * double(k)) * pk * qk;
    spec.ck_table.push_back(ck);
  }
  return spec;
}

double spec_ck(const RosenblattSpec& spec, int k) {
  if (k < 2) throw ConfigError("coefficient order must be at least 2");
  for (const auto& c : spec.ck_table)
    if (c.k == k) return c.value;
  throw ConfigError("coefficient order beyond the spec's table");
}

std::vector<double> rosenblatt_cumulants(const RosenblattSpec& spec, int kmax) {
  if (kmax < 2) throw ConfigError("cumulant order must be at least 2");
  std::vector<double> kappa(std::size_t(kmax) + 1, 0.0);
  double fact = 1.0;
  for (int k = 2; k <= kmax; ++k) {
    fact *= double(k - 1);
    kappa[std::size_t(k)] = std::pow(2.0, double(k - 1)) * fact * spec_ck(spec, k);
  }
  return kappa;
}

std::complex<double> char_fn_series(const RosenblattSpec& spec, double xi) {
  cplx z(0.0, 2.0 * xi);
  cplx zp = z;  // z^k accumulator, starts at k=1
  cplx sum(0.0, 0.0);
  double last_mag = 0.0;
  int k_stop = spec.K;
  for (int k = 2; k <= spec.K; ++k) {
    zp *= z;
    cplx term = zp * (spec_ck(spec, k) / (2.0 * double(k)));
    sum += term;
    last_mag = std::abs(term);
    if (last_mag < 1e-12) {
      k_stop = k;
      break;
    }
  }
  if (k_stop == spec.K && last_mag > 1e-8 * std::abs(sum))
    throw SeriesDiverging("cumulant series not converged at the truncation order");
  return std::exp(sum);
}

std::complex<double> char_fn(const RosenblattSpec& spec, double xi) {
  PairSplit split = split_pairs(spec);
  cplx log_phi(0.0, 0.0);
  for (double w : split.big) {
    cplx one_minus(1.0, -2.0 * xi * w);
    log_phi += -0.5 * std::log(one_minus) - cplx(0.0, xi * w);
  }
  cplx z(0.0, 2.0 * xi);
  cplx zp = z;
  for (int k = 2; k <= spec.K; ++k) {
    zp *= z;
    log_phi += zp * (split.small_sums[std::size_t(k)] / (2.0 * double(k)));
  }
  log_phi += -0.5 * split.var_deficit * xi * xi;
  return std::exp(log_phi);
}

namespace {

// Frequency table of char_fn on the midpoint grid, shared by pdf and cdf.
struct PhiTable {
  std::vector<double> xi;
  std::vector<cplx> phi;
};

PhiTable build_phi_table(const RosenblattSpec& spec) {
  PairSplit split = split_pairs(spec);
  int n = int(std::llround(2.0 * kXiMax / kDxi));
  PhiTable tab;
  tab.xi.resize(n);
  tab.phi.resize(n);
  for (int j = 0; j < n; ++j) {
    double xi = -kXiMax + (double(j) + 0.5) * kDxi;
    cplx log_phi(0.0, 0.0);
    for (double w : split.big) {
      cplx one_minus(1.0, -2.0 * xi * w);
      log_phi += -0.5 * std::log(one_minus) - cplx(0.0, xi * w);
    }
    cplx z(0.0, 2.0 * xi);
    cplx zp = z;
    for (int k = 2; k <= spec.K; ++k) {
      zp *= z;
      log_phi += zp * (split.small_sums[std::size_t(k)] / (2.0 * double(k)));
    }
    log_phi += -0.5 * split.var_deficit * xi * xi;
    tab.xi[std::size_t(j)] = xi;
    tab.phi[std::size_t(j)] = std::exp(log_phi);
  }
  return tab;
}

}  // namespace

DensityResult rosenblatt_pdf(const RosenblattSpec& spec, const std::vector<double>& xgrid) {
  if (xgrid.empty()) throw ConfigError("empty density grid");
  PhiTable tab = build_phi_table(spec);
  double edge = std::max(std::abs(tab.phi.front()), std::abs(tab.phi.back()));
  DensityResult out;
  // Neglected tail mass of the inversion integral, taken as if |phi| stayed
  // at its edge value over one more half-range on each side.
  out.aliasing_bound = 2.0 * edge * kXiMax / kTwoPi;
  if (out.aliasing_bound > 1e-6)
    throw InversionUnstable("characteristic function not negligible at the grid edge");
  out.x = xgrid;
  out.pdf.resize(xgrid.size());
  std::size_t n = tab.xi.size();
  for (std::size_t ix = 0; ix < xgrid.size(); ++ix) {
    double x = xgrid[ix];
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double ph = -tab.xi[j] * x;
      cplx e(std::cos(ph), std::sin(ph));
      acc += (e * tab.phi[j]).real();
    }
    double v = acc * kDxi / kTwoPi;
    if (v < 0.0) {
      out.clipped_mass += -v;
      v = 0.0;
    }
    out.pdf[ix] = v;
  }
  // Convert the clip tally from a node sum to a mass using the x spacing.
  if (xgrid.size() > 1) out.clipped_mass *= (xgrid.back() - xgrid.front()) / double(xgrid.size() - 1);
  return out;
}

namespace {

// F(x) = 1/2 - (1/pi) int_0^Xi Im[e^{-i xi x} phi(xi)] / xi d(xi).
double cdf_from_table(const PhiTable& tab, double x) {
  double acc = 0.0;
  std::size_t n = tab.xi.size();
  for (std::size_t j = 0; j < n; ++j) {
    double xi = tab.xi[j];
    if (xi <= 0.0) continue;
    double ph = -xi * x;
    cplx e(std::cos(ph), std::sin(ph));
    acc += (e * tab.phi[j]).imag() / xi;
  }
  double f = 0.5 - acc * kDxi / M_PI;
  return std::min(1.0, std::max(0.0, f));
}

}  // namespace

double rosenblatt_cdf(const RosenblattSpec& spec, double x) {
  PhiTable tab = build_phi_table(spec);
  return cdf_from_table(tab, x);
}

std::vector<double> rosenblatt_cdf_grid(const RosenblattSpec& spec,
                                        const std::vector<double>& xgrid) {
  PhiTable tab = build_phi_table(spec);
  std::vector<double> out(xgrid.size());
  for (std::size_t i = 0; i < xgrid.size(); ++i) out[i] = cdf_from_table(tab, xgrid[i]);
  return out;
}

}  // namespace gneiting
