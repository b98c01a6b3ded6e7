#include "gneiting/cyclic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "gneiting/quadrature.hpp"
#include "gneiting/regimes.hpp"
#include "gneiting/rng.hpp"

extern "C" void dsyev_(const char* jobz, const char* uplo, const int* n, double* a,
                       const int* lda, double* w, double* work, const int* lwork, int* info);

namespace gneiting {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr int kQmcShifts = 8;

double vec_norm(const double* z, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += z[i] * z[i];
  return std::sqrt(s);
}

// ---- uniform-stream point and direction maps -------------------------------
// Everything below consumes plain uniforms at explicit cursor positions so
// that paired estimators and scaled re-runs see identical draws.

int body_uniform_count(const ConvexBody& b) {
  if (b.kind() == BodyKind::CenteredBall) return 2 * ((b.dim() + 1) / 2) + 1;
  return b.dim();
}

void point_from_uniforms(const ConvexBody& b, const double* u, double* out) {
  int d = b.dim();
  switch (b.kind()) {
    case BodyKind::UnitBox:
      for (int i = 0; i < d; ++i) out[i] = u[i];
      return;
    case BodyKind::ScaledBox:
      for (int i = 0; i < d; ++i) out[i] = b.extent()[i] * u[i];
      return;
    case BodyKind::CenteredBall: {
      int m = (d + 1) / 2;
      double s = 0.0;
      for (int p = 0; p < m; ++p) {
        double r = std::sqrt(-2.0 * std::log(u[2 * p]));
        double th = kTwoPi * u[2 * p + 1];
        double n0 = r * std::cos(th), n1 = r * std::sin(th);
        out[2 * p] = n0;
        if (2 * p + 1 < d) out[2 * p + 1] = n1;
      }
      for (int i = 0; i < d; ++i) s += out[i] * out[i];
      s = std::sqrt(s);
      if (s < 1e-150) s = 1.0;
      double radius = b.extent()[0] * std::pow(u[2 * m], 1.0 / double(d));
      for (int i = 0; i < d; ++i) out[i] = out[i] / s * radius;
      return;
    }
  }
}

int dir_uniform_count(int d) { return 2 * ((d + 1) / 2); }

void dir_from_uniforms(int d, const double* u, double* out) {
  if (d == 1) {
    out[0] = u[0] < 0.5 ? -1.0 : 1.0;
    return;
  }
  int m = (d + 1) / 2;
  for (int p = 0; p < m; ++p) {
    double r = std::sqrt(-2.0 * std::log(u[2 * p]));
    double th = kTwoPi * u[2 * p + 1];
    out[2 * p] = r * std::cos(th);
    if (2 * p + 1 < d) out[2 * p + 1] = r * std::sin(th);
  }
  double s = vec_norm(out, d);
  if (s < 1e-150) {
    for (int i = 1; i < d; ++i) out[i] = 0.0;
    out[0] = 1.0;
    return;
  }
  for (int i = 0; i < d; ++i) out[i] /= s;
}

struct UniformCursor {
  const CounterRng* rng;
  std::uint64_t pos;
  double next() { return rng->uniform(pos++); }
  void fill(double* buf, int n) {
    for (int i = 0; i < n; ++i) buf[i] = next();
  }
};

void sample_point(const ConvexBody& b, UniformCursor& cur, double* out) {
  double u[8];
  cur.fill(u, body_uniform_count(b));
  point_from_uniforms(b, u, out);
}

void sample_dir(int d, UniformCursor& cur, double* out) {
  double u[8];
  cur.fill(u, dir_uniform_count(d));
  dir_from_uniforms(d, u, out);
}

// Mass of |z|^{-a} over the centered ball of radius R in dimension d.
double singular_mass(double a, int d, double R) {
  return sphere_surface(d) * std::pow(R, double(d) - a) / (double(d) - a);
}

// ---- 1-D Galerkin spectral path --------------------------------------------

double interval_length(const ConvexBody& b) {
  if (b.dim() != 1) return 0.0;
  if (b.kind() == BodyKind::CenteredBall) return 2.0 * b.extent()[0];
  return b.extent()[0];
}

// Exact N_2 of the kernel over an interval of length L: 2 int_0^L (L-u) f(u)^2 du.
double n2_exact_interval(const LagKernel& kernel, double L) {
  if (kernel.kind() == LagKernel::Kind::PowerLaw) {
    double g = 2.0 * kernel.alpha();
    if (g == 0.0) return L * L;
    return 2.0 * std::pow(L, 2.0 - g) / ((1.0 - g) * (2.0 - g));
  }
  auto f2 = [&](double v) {
    double c = kernel.eval_radial(L * v);
    return (1.0 - v) * c * c;
  };
  return 2.0 * L * L * integrate_graded01(f2, 800, 2.5, 12);
}

// Cell-averaged Toeplitz row of the kernel operator on [0, L] with n cells:
// row[m] = (1/h) * double integral of f over two cells at offset m.
std::vector<double> toeplitz_row(const LagKernel& kernel, double L, int n) {
  double h = L / double(n);
  std::vector<double> row(n);
  if (kernel.kind() == LagKernel::Kind::PowerLaw) {
    double a = kernel.alpha();
    // Even double-primitive of |u|^{-a}; second differences give the
    // exact cell-pair integrals including the singular diagonal.
    auto psi = [&](double u) {
      u = std::fabs(u);
      if (a == 0.0) return 0.5 * u * u;
      return std::pow(u, 2.0 - a) / ((1.0 - a) * (2.0 - a));
    };
    for (int m = 0; m < n; ++m)
      row[m] = (psi((m + 1) * h) - 2.0 * psi(m * h) + psi((m - 1) * h)) / h;
    return row;
  }
  GaussLegendre gl(8);
  for (int m = 0; m < n; ++m) {
    double c = m * h;
    auto tent = [&](double u) { return (h - std::fabs(u - c)) * kernel.eval_radial(std::fabs(u)); };
    double lo = std::max(0.0, c - h);
    double v = gl.apply(tent, c, c + h);
    if (m >= 1) v += gl.apply(tent, lo, c);
    else v *= 2.0;  // fold the negative-lag half onto [0, h]
    row[m] = v / h;
  }
  return row;
}

std::vector<double> toeplitz_eigs(std::vector<double> row) {
  int n = int(row.size());
  std::vector<double> a(std::size_t(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a[std::size_t(j) * n + i] = row[std::size_t(std::abs(i - j))];
  std::vector<double> w(n);
  int info = 0, lwork = -1;
  double wk_query = 0.0;
  dsyev_("N", "U", &n, a.data(), &n, w.data(), &wk_query, &lwork, &info);
  lwork = int(wk_query);
  std::vector<double> work(std::size_t(std::max(lwork, 3 * n)));
  lwork = int(work.size());
  dsyev_("N", "U", &n, a.data(), &n, w.data(), work.data(), &lwork, &info);
  if (info != 0) throw NumericalError("symmetric eigensolver failed");
  return w;
}

std::mutex g_spectrum_mutex;
std::map<std::string, std::vector<double>> g_spectrum_cache;

const std::vector<double>& galerkin_eigs(const LagKernel& kernel, double L, int cells) {
  std::ostringstream key;
  key << kernel.signature() << "|L=" << L << "|n=" << cells;
  std::lock_guard<std::mutex> lock(g_spectrum_mutex);
  auto it = g_spectrum_cache.find(key.str());
  if (it != g_spectrum_cache.end()) return it->second;
  auto eigs = toeplitz_eigs(toeplitz_row(kernel, L, cells));
  return g_spectrum_cache.emplace(key.str(), std::move(eigs)).first->second;
}

CyclicCoefficient quad_path(const LagKernel& kernel, const ConvexBody& body, int k,
                            const CyclicBudget& budget) {
  double L = interval_length(body);
  if (L <= 0.0 || kernel.blocks() != 1)
    throw Unsupported("tensor-quadrature path covers one-dimensional single-block domains");
  CyclicCoefficient out;
  out.k = k;
  out.method = CyclicMethod::TensorQuadrature;
  out.n_points = budget.quad_cells;
  double n2 = n2_exact_interval(kernel, L);
  if (k == 2) {
    out.value = 1.0;
    out.numerator = n2;
    out.denominator = n2;
    return out;
  }
  const auto& eigs = galerkin_eigs(kernel, L, budget.quad_cells);
  double sk = 0.0;
  for (double lam : eigs) sk += std::pow(lam, double(k));
  out.numerator = sk;
  out.denominator = n2;
  out.value = sk / std::pow(n2, 0.5 * double(k));
  return out;
}

// ---- Monte Carlo paths -----------------------------------------------------

struct BatchMoments {
  std::vector<double> num, den;  // per-batch means of numerator and N_2
};

// Chain importance sampling for |z|^{-alpha}: steps are drawn proportional to
// the kernel so every singular factor except the closing one cancels; the
// denominator reuses the first step's uniforms through the 2*alpha radius map
// against the exact covariogram.
BatchMoments power_law_mc(const LagKernel& kernel, const ConvexBody& body, int k,
                          const CyclicBudget& budget) {
  int d = body.dim();
  double a = kernel.alpha();
  double R = body.diameter();
  double vol = body.volume();
  double za = singular_mass(a, d, R);
  double z2a = singular_mass(2.0 * a, d, R);
  int B = budget.batches;
  std::int64_t per_batch = std::max<std::int64_t>(1, budget.n_points / B);
  std::uint64_t stride = std::uint64_t(k + 2) * std::uint64_t(d + 6);
  BatchMoments bm;
  bm.num.resize(B);
  bm.den.resize(B);
  std::vector<double> x(std::size_t(k) * d), dir(d), zden(d), scratch(d);
  for (int b = 0; b < B; ++b) {
    CounterRng rng(budget.seed, std::uint64_t(b));
    double snum = 0.0, sden = 0.0;
    for (std::int64_t s = 0; s < per_batch; ++s) {
      UniformCursor cur{&rng, std::uint64_t(s) * stride};
      sample_point(body, cur, x.data());
      if (k == 2) {
        double u = cur.next();
        sample_dir(d, cur, dir.data());
        double rden = R * std::pow(u, 1.0 / (double(d) - 2.0 * a));
        bool in = true;
        for (int i = 0; i < d; ++i) {
          zden[i] = rden * dir[i];
          scratch[i] = x[i] + zden[i];
        }
        in = body.contains(scratch);
        snum += z2a * vol * (in ? 1.0 : 0.0);
        sden += z2a * covariogram(body, zden);
        continue;
      }
      bool ok = true;
      for (int j = 1; j < k; ++j) {
        double u = cur.next();
        sample_dir(d, cur, dir.data());
        double rstep = R * std::pow(u, 1.0 / (double(d) - a));
        for (int i = 0; i < d; ++i) x[std::size_t(j) * d + i] = x[std::size_t(j - 1) * d + i] + rstep * dir[i];
        if (j == 1) {
          double rden = R * std::pow(u, 1.0 / (double(d) - 2.0 * a));
          for (int i = 0; i < d; ++i) zden[i] = rden * dir[i];
        }
        if (ok) {
          for (int i = 0; i < d; ++i) scratch[i] = x[std::size_t(j) * d + i];
          ok = body.contains(scratch);
        }
      }
      if (ok) {
        for (int i = 0; i < d; ++i) scratch[i] = x[std::size_t(k - 1) * d + i] - x[i];
        double rc = vec_norm(scratch.data(), d);
        if (rc > 0.0) snum += vol * std::pow(za, double(k - 1)) * std::pow(rc, -a);
      }
      sden += z2a * covariogram(body, zden);
    }
    bm.num[b] = snum / double(per_batch);
    bm.den[b] = sden / double(per_batch);
  }
  return bm;
}

// Plain uniform chain for bounded kernels over a product domain; N_2 reuses
// the first two nodes of the same draws.
BatchMoments bounded_mc(const LagKernel& kernel, const ProductDomain& domain, int k,
                        const CyclicBudget& budget) {
  int dim = domain.dim();
  double vol = domain.volume();
  double volk = std::pow(vol, double(k));
  int B = budget.batches;
  std::int64_t per_batch = std::max<std::int64_t>(1, budget.n_points / B);
  std::uint64_t stride = std::uint64_t(k + 1) * std::uint64_t(dim + 6);
  BatchMoments bm;
  bm.num.resize(B);
  bm.den.resize(B);
  std::vector<double> x(std::size_t(k) * dim), lag(dim);
  for (int b = 0; b < B; ++b) {
    CounterRng rng(budget.seed, std::uint64_t(b));
    double snum = 0.0, sden = 0.0;
    for (std::int64_t s = 0; s < per_batch; ++s) {
      UniformCursor cur{&rng, std::uint64_t(s) * stride};
      for (int j = 0; j < k; ++j) {
        double* xj = x.data() + std::size_t(j) * dim;
        int off = 0;
        for (const auto& part : domain.parts) {
          sample_point(part, cur, xj + off);
          off += part.dim();
        }
      }
      double prod = 1.0;
      for (int j = 0; j < k; ++j) {
        const double* xa = x.data() + std::size_t(j) * dim;
        const double* xb = x.data() + std::size_t((j + 1) % k) * dim;
        for (int i = 0; i < dim; ++i) lag[i] = xa[i] - xb[i];
        prod *= kernel.eval(lag.data());
      }
      snum += volk * prod;
      for (int i = 0; i < dim; ++i) lag[i] = x[i] - x[std::size_t(dim) + i];
      double f12 = kernel.eval(lag.data());
      sden += vol * vol * f12 * f12;
    }
    bm.num[b] = snum / double(per_batch);
    bm.den[b] = sden / double(per_batch);
  }
  return bm;
}

// Halton radical-inverse sequence with Cranley-Patterson rotations for the
// smooth-kernel path.
constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131,
                           137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (i > 0) {
    x += f * double(i % std::uint64_t(base));
    i /= std::uint64_t(base);
    f *= inv;
  }
  return x;
}

BatchMoments bounded_qmc(const LagKernel& kernel, const ProductDomain& domain, int k,
                         const CyclicBudget& budget) {
  int dim = domain.dim();
  int nu = 0;
  for (const auto& part : domain.parts) nu += body_uniform_count(part);
  int dims_per_node = nu;
  int qdim = k * dims_per_node;
  if (qdim > int(sizeof(kPrimes) / sizeof(kPrimes[0])))
    throw Unsupported("low-discrepancy path limited to 48 point dimensions");
  double vol = domain.volume();
  double volk = std::pow(vol, double(k));
  std::int64_t per_shift = std::max<std::int64_t>(1, budget.n_points / kQmcShifts);
  BatchMoments bm;
  bm.num.resize(kQmcShifts);
  bm.den.resize(kQmcShifts);
  std::vector<double> shift(qdim), u(qdim), x(std::size_t(k) * dim), lag(dim);
  for (int b = 0; b < kQmcShifts; ++b) {
    CounterRng rng(budget.seed, 0x716d63u + std::uint64_t(b));
    for (int j = 0; j < qdim; ++j) shift[j] = rng.uniform(std::uint64_t(j));
    double snum = 0.0, sden = 0.0;
    for (std::int64_t s = 0; s < per_shift; ++s) {
      for (int j = 0; j < qdim; ++j) {
        double v = radical_inverse(std::uint64_t(s) + 100, kPrimes[j]) + shift[j];
        u[j] = v - std::floor(v);
        if (u[j] <= 0.0) u[j] = 1e-16;
        if (u[j] >= 1.0) u[j] = 1.0 - 1e-16;
      }
      int upos = 0;
      for (int j = 0; j < k; ++j) {
        double* xj = x.data() + std::size_t(j) * dim;
        int off = 0;
        for (const auto& part : domain.parts) {
          point_from_uniforms(part, u.data() + upos, xj + off);
          upos += body_uniform_count(part);
          off += part.dim();
        }
      }
      double prod = 1.0;
      for (int j = 0; j < k; ++j) {
        const double* xa = x.data() + std::size_t(j) * dim;
        const double* xb = x.data() + std::size_t((j + 1) % k) * dim;
        for (int i = 0; i < dim; ++i) lag[i] = xa[i] - xb[i];
        prod *= kernel.eval(lag.data());
      }
      snum += volk * prod;
      for (int i = 0; i < dim; ++i) lag[i] = x[i] - x[std::size_t(dim) + i];
      double f12 = kernel.eval(lag.data());
      sden += vol * vol * f12 * f12;
    }
    bm.num[b] = snum / double(per_shift);
    bm.den[b] = sden / double(per_shift);
  }
  return bm;
}

CyclicCoefficient reduce_batches(const BatchMoments& bm, int k, CyclicMethod method,
                                 std::int64_t n_points, double max_rel_stderr) {
  int B = int(bm.num.size());
  std::vector<double> ck(B);
  for (int b = 0; b < B; ++b) {
    if (!(bm.den[b] > 0.0)) throw NumericalError("non-positive normalizer batch");
    ck[b] = bm.num[b] / std::pow(bm.den[b], 0.5 * double(k));
  }
  CyclicCoefficient out;
  out.k = k;
  out.method = method;
  out.n_points = n_points;
  double m = pairwise_sum(ck) / B;
  double ss = 0.0;
  for (double v : ck) ss += (v - m) * (v - m);
  double se = B > 1 ? std::sqrt(ss / (double(B) * double(B - 1))) : 0.0;
  out.value = m;
  out.stderr_value = se;
  out.numerator = pairwise_sum(bm.num) / B;
  out.denominator = pairwise_sum(bm.den) / B;
  if (std::fabs(m) > 0.0 && se / std::fabs(m) > max_rel_stderr)
    throw SingularityBudget("relative stderr above budget for c_k estimate");
  return out;
}

}  // namespace

// ---- LagKernel -------------------------------------------------------------

LagKernel LagKernel::power_law(double alpha, int dim) {
  if (alpha < 0.0) throw ConfigError("power-law exponent must be nonnegative");
  if (dim < 1) throw ConfigError("kernel dimension must be positive");
  LagKernel kern;
  kern.kind_ = Kind::PowerLaw;
  kern.dim_ = kern.dim1_ = dim;
  kern.alpha_ = alpha;
  return kern;
}

LagKernel LagKernel::profile(RadialCovariance c) {
  LagKernel kern;
  kern.kind_ = Kind::Profile;
  kern.dim_ = kern.dim1_ = c.dim();
  kern.profiles_.push_back(std::move(c));
  return kern;
}

LagKernel LagKernel::gneiting(GneitingCovariance c) {
  LagKernel kern;
  kern.kind_ = Kind::Gneiting;
  kern.dim1_ = c.d1();
  kern.dim_ = c.d1() + c.d2();
  kern.gneiting_.push_back(std::move(c));
  return kern;
}

LagKernel LagKernel::tensor(RadialCovariance c1, RadialCovariance c2) {
  LagKernel kern;
  kern.kind_ = Kind::Tensor;
  kern.dim1_ = c1.dim();
  kern.dim_ = c1.dim() + c2.dim();
  kern.profiles_.push_back(std::move(c1));
  kern.profiles_.push_back(std::move(c2));
  return kern;
}

double LagKernel::eval(const double* z) const {
  switch (kind_) {
    case Kind::PowerLaw: {
      double r = vec_norm(z, dim_);
      if (alpha_ == 0.0) return 1.0;
      return std::pow(r, -alpha_);
    }
    case Kind::Profile:
      return profiles_[0].eval(vec_norm(z, dim_));
    case Kind::Gneiting:
      return gneiting_[0].eval_radii(vec_norm(z, dim1_), vec_norm(z + dim1_, dim_ - dim1_));
    case Kind::Tensor:
      return profiles_[0].eval(vec_norm(z, dim1_)) *
             profiles_[1].eval(vec_norm(z + dim1_, dim_ - dim1_));
  }
  return 0.0;
}

double LagKernel::eval_radial(double r) const {
  if (kind_ == Kind::PowerLaw) return alpha_ == 0.0 ? 1.0 : std::pow(r, -alpha_);
  if (kind_ == Kind::Profile) return profiles_[0].eval(r);
  throw ConfigError("radial evaluation needs a single-block kernel");
}

std::string LagKernel::signature() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::PowerLaw:
      os << "pl(" << alpha_ << ";d" << dim_ << ")";
      break;
    case Kind::Profile:
      os << "pr(" << profiles_[0].family_name();
      for (double p : profiles_[0].params()) os << "," << p;
      os << ";d" << dim_ << ")";
      break;
    case Kind::Gneiting:
      os << "gn(" << gneiting_[0].factor1().family_name() << "/"
         << gneiting_[0].factor2().family_name() << ";d" << dim1_ << "+" << (dim_ - dim1_) << ")";
      for (double p : gneiting_[0].factor1().params()) os << "," << p;
      for (double p : gneiting_[0].factor2().params()) os << ";" << p;
      break;
    case Kind::Tensor:
      os << "tn(" << profiles_[0].family_name() << "/" << profiles_[1].family_name() << ";d"
         << dim1_ << "+" << (dim_ - dim1_) << ")";
      for (double p : profiles_[0].params()) os << "," << p;
      for (double p : profiles_[1].params()) os << ";" << p;
      break;
  }
  return os.str();
}

int ProductDomain::dim() const {
  int d = 0;
  for (const auto& p : parts) d += p.dim();
  return d;
}

double ProductDomain::volume() const {
  double v = 1.0;
  for (const auto& p : parts) v *= p.volume();
  return v;
}

// ---- public operations -----------------------------------------------------

std::string method_name(CyclicMethod m) {
  switch (m) {
    case CyclicMethod::TensorQuadrature: return "tensor-quadrature";
    case CyclicMethod::MonteCarlo: return "monte-carlo";
    case CyclicMethod::QuasiMonteCarlo: return "quasi-monte-carlo";
  }
  return "unknown";
}

CyclicCoefficient cyclic_integral(const LagKernel& kernel, const ProductDomain& domain, int k,
                                  CyclicMethod method, const CyclicBudget& budget) {
  if (k < 2 || k > 8) throw ConfigError("cyclic order k must lie in [2, 8]");
  if (int(domain.parts.size()) != kernel.blocks())
    throw ConfigError("domain block count must match the kernel");
  int dim_total = domain.dim();
  if (dim_total != kernel.dim()) throw ConfigError("domain dimension must match the kernel");
  if (kernel.kind() == LagKernel::Kind::PowerLaw &&
      kernel.alpha() >= 0.5 * double(dim_total))
    throw InvalidAlpha("power-law exponent must be below dim/2");

  if (method == CyclicMethod::TensorQuadrature) return quad_path(kernel, domain.parts[0], k, budget);
  if (method == CyclicMethod::QuasiMonteCarlo) {
    if (!kernel.bounded())
      throw Unsupported("low-discrepancy path covers bounded kernels only");
    auto bm = bounded_qmc(kernel, domain, k, budget);
    return reduce_batches(bm, k, method, budget.n_points, budget.max_rel_stderr);
  }
  BatchMoments bm = kernel.bounded() ? bounded_mc(kernel, domain, k, budget)
                                     : power_law_mc(kernel, domain.parts[0], k, budget);
  return reduce_batches(bm, k, method, budget.n_points, budget.max_rel_stderr);
}

CyclicCoefficient cyclic_integral(const LagKernel& kernel, const ConvexBody& body, int k,
                                  CyclicMethod method, const CyclicBudget& budget) {
  ProductDomain domain;
  domain.parts.push_back(body);
  return cyclic_integral(kernel, domain, k, method, budget);
}

CyclicCoefficient rosenblatt_ck(double alpha, double beta, const ConvexBody& body1,
                                const ConvexBody& body2, int k, CyclicMethod method,
                                const CyclicBudget& budget) {
  if (!(alpha > 0.0) || alpha >= 0.5 * body1.dim())
    throw InvalidAlpha("first tail exponent must lie in (0, d1/2)");
  if (!(beta > 0.0) || beta >= 0.5 * body2.dim())
    throw InvalidAlpha("second tail exponent must lie in (0, d2/2)");
  CyclicCoefficient a = cyclic_integral(LagKernel::power_law(alpha, body1.dim()), body1, k,
                                        method, budget);
  CyclicCoefficient b = cyclic_integral(LagKernel::power_law(beta, body2.dim()), body2, k,
                                        method, budget);
  CyclicCoefficient out;
  out.k = k;
  out.method = method;
  out.n_points = a.n_points + b.n_points;
  out.value = std::pow(2.0, -0.5 * double(k)) * a.value * b.value;
  // numerator: product of per-block cyclic integrals; denominator: 2 sigma^2.
  out.numerator = a.numerator * b.numerator;
  out.denominator = 2.0 * a.denominator * b.denominator;
  if (a.stderr_value && b.stderr_value && a.value != 0.0 && b.value != 0.0) {
    double rel = std::sqrt(std::pow(*a.stderr_value / a.value, 2) +
                           std::pow(*b.stderr_value / b.value, 2));
    out.stderr_value = std::fabs(out.value) * rel;
  }
  return out;
}

std::vector<double> rosenblatt_type_cumulants(double alpha, const ConvexBody& body, int K,
                                              CyclicMethod method, const CyclicBudget& budget) {
  if (K < 2 || K > 8) throw ConfigError("cumulant order must lie in [2, 8]");
  if (!(alpha > 0.0) || alpha >= 0.5 * body.dim())
    throw InvalidAlpha("tail exponent must lie in (0, d/2)");
  std::vector<double> kappa(std::size_t(K) + 1, 0.0);
  LagKernel kern = LagKernel::power_law(alpha, body.dim());
  double fact = 1.0;  // (k-1)!
  for (int k = 2; k <= K; ++k) {
    fact *= double(k - 1);
    CyclicCoefficient ck = cyclic_integral(kern, body, k, method, budget);
    kappa[std::size_t(k)] = std::pow(2.0, double(k - 1)) * fact * ck.numerator;
  }
  return kappa;
}

std::vector<double> normalized_spectrum(double alpha, const ConvexBody& body, int cells) {
  double L = interval_length(body);
  if (L <= 0.0) throw Unsupported("spectral path covers one-dimensional intervals");
  if (!(alpha >= 0.0) || alpha >= 0.5)
    throw InvalidAlpha("tail exponent must lie in [0, 1/2) on an interval");
  LagKernel kern = LagKernel::power_law(alpha, 1);
  CyclicBudget budget;
  budget.quad_cells = cells;
  const auto& eigs = galerkin_eigs(kern, L, cells);
  double n2 = n2_exact_interval(kern, L);
  std::vector<double> out(eigs);
  double scale = 1.0 / std::sqrt(n2);
  for (double& v : out) v *= scale;
  return out;
}

RatioPoint appendixA_ratio(const RadialCovariance& c, const ConvexBody& delta, int k, double t,
                           const CyclicBudget& budget) {
  if (k < 2 || k > 8) throw ConfigError("cyclic order k must lie in [2, 8]");
  if (!(t > 0.0)) throw ConfigError("scale t must be positive");
  double rho = c.rho();
  if (rho == kRhoInf || !(rho > 0.0) || rho >= 0.5 * delta.dim())
    throw InvalidAlpha("profile tail index must lie in (0, d/2)");
  LagKernel kern = LagKernel::profile(c);
  ProductDomain domain;
  domain.parts.push_back(delta.scaled(t));
  BatchMoments bm = bounded_mc(kern, domain, k, budget);
  double norm = std::pow(std::pow(t, double(delta.dim())) * c.eval(t), double(k));
  int B = int(bm.num.size());
  std::vector<double> r(B);
  for (int b = 0; b < B; ++b) r[std::size_t(b)] = bm.num[std::size_t(b)] / norm;
  double m = pairwise_sum(r) / B;
  double ss = 0.0;
  for (double v : r) ss += (v - m) * (v - m);
  RatioPoint out;
  out.t = t;
  out.ratio = m;
  out.stderr_value = B > 1 ? std::sqrt(ss / (double(B) * double(B - 1))) : 0.0;
  if (m != 0.0 && out.stderr_value / std::fabs(m) > budget.max_rel_stderr)
    throw SingularityBudget("relative stderr above budget for the scaled-window ratio");
  return out;
}

SeparabilityGap separability_gap_kernels(const LagKernel& joint, const LagKernel& block1,
                                         const LagKernel& block2, const WindowSpec& window,
                                         int k, const std::vector<double>& t_sequence,
                                         const CyclicBudget& budget) {
  if (k < 2 || k > 8) throw ConfigError("cyclic order k must lie in [2, 8]");
  if (joint.blocks() != 2) throw ConfigError("joint kernel must be a two-block kernel");
  if (block1.dim() != joint.dim1() || block2.dim() != joint.dim() - joint.dim1())
    throw ConfigError("block kernels must match the joint kernel dimensions");
  if (t_sequence.empty()) throw ConfigError("empty scale ladder");
  int d1 = window.body1.dim(), d2 = window.body2.dim();
  if (d1 != joint.dim1() || d2 != joint.dim() - joint.dim1())
    throw ConfigError("window dimensions must match the joint kernel");
  int B = budget.batches;
  std::int64_t per_batch = std::max<std::int64_t>(1, budget.n_points / B);
  int dim = d1 + d2;
  std::uint64_t stride = std::uint64_t(k + 1) * std::uint64_t(dim + 6);
  std::size_t nt = t_sequence.size();
  // gap_b[t][b]: per-batch gap with one shared uniform stream across the
  // ladder and the three estimators.
  std::vector<std::vector<double>> gap_b(nt, std::vector<double>(std::size_t(B)));
  std::vector<double> x(std::size_t(k) * dim), lag(dim);
  for (std::size_t ti = 0; ti < nt; ++ti) {
    double t = t_sequence[ti];
    ConvexBody b1 = window.body1.scaled(std::pow(t, window.schedule.gamma1));
    ConvexBody b2 = window.body2.scaled(std::pow(t, window.schedule.gamma2));
    double vol1 = b1.volume(), vol2 = b2.volume(), vol = vol1 * vol2;
    double volk = std::pow(vol, double(k));
    double vol1k = std::pow(vol1, double(k)), vol2k = std::pow(vol2, double(k));
    for (int b = 0; b < B; ++b) {
      CounterRng rng(budget.seed, std::uint64_t(b));
      double jn = 0.0, jd = 0.0, n1 = 0.0, e1 = 0.0, n2 = 0.0, e2 = 0.0;
      for (std::int64_t s = 0; s < per_batch; ++s) {
        UniformCursor cur{&rng, std::uint64_t(s) * stride};
        for (int j = 0; j < k; ++j) {
          double* xj = x.data() + std::size_t(j) * dim;
          sample_point(b1, cur, xj);
          sample_point(b2, cur, xj + d1);
        }
        double pj = 1.0, p1 = 1.0, p2 = 1.0;
        for (int j = 0; j < k; ++j) {
          const double* xa = x.data() + std::size_t(j) * dim;
          const double* xb = x.data() + std::size_t((j + 1) % k) * dim;
          for (int i = 0; i < dim; ++i) lag[i] = xa[i] - xb[i];
          pj *= joint.eval(lag.data());
          p1 *= block1.eval(lag.data());
          p2 *= block2.eval(lag.data() + d1);
        }
        for (int i = 0; i < dim; ++i) lag[i] = x[i] - x[std::size_t(dim) + i];
        double fj = joint.eval(lag.data());
        double f1 = block1.eval(lag.data());
        double f2 = block2.eval(lag.data() + d1);
        jn += volk * pj;
        jd += vol * vol * fj * fj;
        n1 += vol1k * p1;
        e1 += vol1 * vol1 * f1 * f1;
        n2 += vol2k * p2;
        e2 += vol2 * vol2 * f2 * f2;
      }
      if (!(jd > 0.0) || !(e1 > 0.0) || !(e2 > 0.0))
        throw NumericalError("non-positive normalizer batch in the gap estimator");
      double cj = jn / std::pow(jd / per_batch, 0.5 * k) / per_batch;
      double c1 = n1 / std::pow(e1 / per_batch, 0.5 * k) / per_batch;
      double c2 = n2 / std::pow(e2 / per_batch, 0.5 * k) / per_batch;
      gap_b[ti][std::size_t(b)] = cj - c1 * c2;
    }
  }
  SeparabilityGap out;
  out.t = t_sequence;
  out.gap.resize(nt);
  out.se.resize(nt);
  for (std::size_t ti = 0; ti < nt; ++ti) {
    double m = pairwise_sum(gap_b[ti]) / B;
    double ss = 0.0;
    for (double v : gap_b[ti]) ss += (v - m) * (v - m);
    out.gap[ti] = std::fabs(m);
    out.se[ti] = B > 1 ? std::sqrt(ss / (double(B) * double(B - 1))) : 0.0;
  }
  for (std::size_t ti = 0; ti + 1 < nt; ++ti) {
    std::vector<double> diff(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b)
      diff[std::size_t(b)] =
          std::fabs(gap_b[ti][std::size_t(b)]) - std::fabs(gap_b[ti + 1][std::size_t(b)]);
    double m = pairwise_sum(diff) / B;
    double ss = 0.0;
    for (double v : diff) ss += (v - m) * (v - m);
    out.decrease.push_back(m);
    out.se_decrease.push_back(B > 1 ? std::sqrt(ss / (double(B) * double(B - 1))) : 0.0);
  }
  return out;
}

SeparabilityGap separability_gap(const GneitingCovariance& cov, const WindowSpec& window, int k,
                                 const std::vector<double>& t_sequence,
                                 const CyclicBudget& budget) {
  SeparableFactors eff = effective_separable_factors(cov, window.body1.dim());
  return separability_gap_kernels(LagKernel::gneiting(cov), LagKernel::profile(eff.factor1),
                                  LagKernel::profile(eff.factor2), window, k, t_sequence,
                                  budget);
}

}  // namespace gneiting
