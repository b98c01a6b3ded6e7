#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gneiting/common.hpp"
#include "gneiting/covariance.hpp"
#include "gneiting/geometry.hpp"

namespace gneiting {

enum class CyclicMethod { TensorQuadrature, MonteCarlo, QuasiMonteCarlo };
std::string method_name(CyclicMethod m);

struct CyclicBudget {
  std::int64_t n_points = 400000;  // total kernel-chain samples (MC/QMC)
  int batches = 20;                // batch means for the stderr estimate
  std::uint64_t seed = 20260822;   // base stream; batch b uses stream seed+b
  int quad_cells = 1200;           // Galerkin cells (quadrature path, 1-D)
  double max_rel_stderr = 0.05;    // SingularityBudget threshold
};

// Translation-invariant lag kernel f(z) for the cyclic product. The lag
// vector concatenates the per-block coordinates for product-window kernels.
class LagKernel {
 public:
  enum class Kind { PowerLaw, Profile, Gneiting, Tensor };

  static LagKernel power_law(double alpha, int dim);
  static LagKernel profile(RadialCovariance c);
  static LagKernel gneiting(GneitingCovariance c);
  static LagKernel tensor(RadialCovariance c1, RadialCovariance c2);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }          // total lag dimension
  int dim1() const { return dim1_; }        // first block (== dim for 1-block kernels)
  int blocks() const { return kind_ == Kind::Gneiting || kind_ == Kind::Tensor ? 2 : 1; }
  bool bounded() const { return kind_ != Kind::PowerLaw; }
  double alpha() const { return alpha_; }
  double eval(const double* z) const;       // f at a lag vector of length dim()
  double eval_radial(double r) const;       // 1-block kernels only
  std::string signature() const;            // stable cache/provenance key

 private:
  LagKernel() = default;
  Kind kind_ = Kind::PowerLaw;
  int dim_ = 1, dim1_ = 1;
  double alpha_ = 0.0;
  std::vector<RadialCovariance> profiles_;
  std::vector<GneitingCovariance> gneiting_;
};

struct CyclicCoefficient {
  int k = 2;
  double value = 0.0;  // c_k = N_k / N_2^{k/2}
  CyclicMethod method = CyclicMethod::MonteCarlo;
  std::optional<double> stderr_value;  // MC/QMC batching; empty for quadrature
  std::int64_t n_points = 0;
  double numerator = 0.0;    // N_k, the raw cyclic integral
  double denominator = 0.0;  // N_2
};

// Product observation domain; a single block is a plain body.
struct ProductDomain {
  std::vector<ConvexBody> parts;
  int dim() const;
  double volume() const;
};

// Normalized cyclic-product coefficient c_k(D; f) = N_k / N_2^{k/2} with
// N_k = integral over D^k of the cyclic product of f over consecutive lags.
// Numerator and denominator share one random stream on the MC paths.
CyclicCoefficient cyclic_integral(const LagKernel& kernel, const ProductDomain& domain, int k,
                                  CyclicMethod method, const CyclicBudget& budget = {});
CyclicCoefficient cyclic_integral(const LagKernel& kernel, const ConvexBody& body, int k,
                                  CyclicMethod method, const CyclicBudget& budget = {});

// Two-block coefficient of the product power-law kernel with the
// (2 sigma^2)^{-k/2} normalization: 2^{-k/2} c_k(D1; alpha) c_k(D2; beta).
CyclicCoefficient rosenblatt_ck(double alpha, double beta, const ConvexBody& body1,
                                const ConvexBody& body2, int k,
                                CyclicMethod method = CyclicMethod::TensorQuadrature,
                                const CyclicBudget& budget = {});

// Cumulants kappa_k = 2^{k-1} (k-1)! N_k of the one-domain limit variable,
// built on the UN-normalized cyclic integrals of |z|^{-alpha} over the body.
// Returns kappa[0..K] with kappa[0] = kappa[1] = 0.
std::vector<double> rosenblatt_type_cumulants(double alpha, const ConvexBody& body, int K,
                                              CyclicMethod method = CyclicMethod::TensorQuadrature,
                                              const CyclicBudget& budget = {});

// Operator eigenvalues of the |z|^{-alpha} kernel on a 1-D interval, divided
// by sqrt of the exact N_2, so that the squares sum to 1 in the continuum
// limit. Feeds the distributional power-sum continuation.
std::vector<double> normalized_spectrum(double alpha, const ConvexBody& body, int cells = 1200);

// Scaled-window L1 ratio of the k-fold cyclic product of a regularly varying
// profile against its pure power-law normalization (t^d c(t))^k; converges to
// the power-law coefficient over the unit body as t grows.
struct RatioPoint {
  double t = 0.0;
  double ratio = 0.0;
  double stderr_value = 0.0;
};
RatioPoint appendixA_ratio(const RadialCovariance& c, const ConvexBody& delta, int k, double t,
                           const CyclicBudget& budget = {});

// Gap between the joint coefficient over the product window and the product
// of per-block coefficients, over a ladder of window scales. Shares one
// uniform stream across the three estimators and across the whole ladder;
// `decrease` holds paired consecutive differences with their own stderrs.
struct SeparabilityGap {
  std::vector<double> t;
  std::vector<double> gap;
  std::vector<double> se;
  std::vector<double> decrease;
  std::vector<double> se_decrease;
};
SeparabilityGap separability_gap_kernels(const LagKernel& joint, const LagKernel& block1,
                                         const LagKernel& block2, const WindowSpec& window,
                                         int k, const std::vector<double>& t_sequence,
                                         const CyclicBudget& budget = {});
// Gneiting front end: the per-block references are factor 1 and the
// tail-adjusted effective factor 2.
SeparabilityGap separability_gap(const GneitingCovariance& cov, const WindowSpec& window, int k,
                                 const std::vector<double>& t_sequence,
                                 const CyclicBudget& budget = {});

}  // namespace gneiting
