#pragma once

#include <optional>
#include <string>

#include "gneiting/common.hpp"
#include "gneiting/covariance.hpp"
#include "gneiting/geometry.hpp"
#include "gneiting/hermite.hpp"

namespace gneiting {

enum class Regime {
  Case1Gaussian,   // both tails integrable enough: CLT with linear-volume variance
  Case2Gaussian,   // factor-2 tail heavy: CLT in space, long memory in the second block
  Case3Gaussian,   // factor-1 tail heavy: long memory in the first block only
  Case4Rosenblatt, // both heavy (rank 2): non-Gaussian limit
  Rank1Gaussian,   // rank-1 functional: dependence set by the raw tails
  Critical,        // on a boundary: logarithmic corrections, no clean exponent
  Unsupported,     // rank >= 3 with both tails heavy: no established limit theory
};

enum class LimitLaw { Gaussian, Rosenblatt, Unknown };

struct RegimeReport {
  Regime regime = Regime::Case1Gaussian;
  LimitLaw law = LimitLaw::Unknown;
  double exponent1 = 0.0;  // variance growth exponent in the first block scale
  double exponent2 = 0.0;  // and in the second block scale
  // Rosenblatt kernel tail indices (set only when law == Rosenblatt).
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> leading_constant;
  // Echo of the inputs that produced this report.
  int d1 = 0, d2 = 0, rank = 0;
  double rho1 = 0.0, rho2 = 0.0;
  bool long_range = false;
  std::string regime_name() const;
  std::string law_name() const;
};

// True when the summed covariance over growing windows diverges: rank 1, or a
// tail too heavy for the given Hermite rank in either block.
bool range_dependence_long(int d1, int d2, int rank, double rho1, double rho2);

// Classify the limit behaviour of a rank-R Hermite functional over windows
// growing in both blocks, from the tail indices of the two factors. Total:
// boundary equalities yield Regime::Critical and the simultaneous-heavy
// region with rank >= 3 yields Regime::Unsupported.
RegimeReport classify(int d1, int d2, int rank, double rho1, double rho2);

// Convenience overload reading dimensions and tail indices from the model.
RegimeReport classify(const GneitingCovariance& cov, int d1, int d2, int rank);

// Limit variance constant in the fully integrable regime:
//   sum_{q >= rank} q! a_q^2 |D1||D2| * ||C1||_q^q * ||C2||_{q-1}^{q-1}
// with the L^q norms taken over the whole space. Throws SeriesTail when the
// geometric tail bound beyond the computed terms exceeds 1% of the sum.
double leading_constant_case1(const GneitingCovariance& cov, const HermiteFunctional& phi,
                              const ConvexBody& body1, const ConvexBody& body2);

struct SeparableFactors {
  RadialCovariance factor1;
  RadialCovariance factor2;  // tail index adjusted for the cross-coupling
  double rho2_effective = 0.0;
};

// For rank-2 functionals, the non-separable model behaves at large lags like a
// separable product with an adjusted second tail index. Throws Unsupported at
// the boundary 2*rho1 == d1.
SeparableFactors effective_separable_factors(const GneitingCovariance& cov, int d1);

}  // namespace gneiting
