#pragma once
#include <complex>
#include <vector>

#include "gneiting/common.hpp"
#include "gneiting/cyclic.hpp"
#include "gneiting/geometry.hpp"

namespace gneiting {

// Standardized two-block second-chaos limit law. The coefficient table and
// the per-block operator spectra are both derived from the same exact-N2
// normalization, so kappa_2 = 1 holds by construction.
struct RosenblattSpec {
  double alpha = 0.3;
  double beta = 0.28;
  ConvexBody body1 = ConvexBody::unit_box(1);
  ConvexBody body2 = ConvexBody::unit_box(1);
  int K = 40;                                // series truncation order
  std::vector<CyclicCoefficient> ck_table;   // entries for k = 2..K
  std::vector<double> mu, nu;                // normalized per-block spectra
};

// Build a spec on two interval bodies; the spectra come from the Galerkin
// operator with `cells` cells per block.
RosenblattSpec make_rosenblatt_spec(double alpha, double beta, const ConvexBody& body1,
                                    const ConvexBody& body2, int K = 40, int cells = 1200);

// c_k of the spec for any k >= 2 (table order or spectral continuation).
double spec_ck(const RosenblattSpec& spec, int k);

// kappa[0..kmax] with kappa[1] = 0, kappa[2] = 1, kappa_k = 2^{k-1}(k-1)! c_k.
std::vector<double> rosenblatt_cumulants(const RosenblattSpec& spec, int kmax = 8);

// Literal truncated cumulant series exp(1/2 sum_{k>=2} (2 i xi)^k c_k / k).
// Valid only inside the series radius; SeriesDiverging when the last term
// fails the convergence guard.
std::complex<double> char_fn_series(const RosenblattSpec& spec, double xi);

// Characteristic function valid on the whole inversion range: exact
// log-factors for the dominant spectral pairs, the series remainder for the
// small ones, and a Gaussian compensator for the discretization deficit so
// the second cumulant is exactly 1.
std::complex<double> char_fn(const RosenblattSpec& spec, double xi);

struct DensityResult {
  std::vector<double> x;
  std::vector<double> pdf;
  double clipped_mass = 0.0;    // negative overshoot removed by clipping
  double aliasing_bound = 0.0;  // neglected characteristic-function tail mass
};

// Density by Fourier inversion of char_fn on a symmetric frequency grid.
// Throws InversionUnstable if the aliasing bound exceeds 1e-6.
DensityResult rosenblatt_pdf(const RosenblattSpec& spec, const std::vector<double>& xgrid);

// Single-point CDF via the sign-inversion integral of char_fn.
double rosenblatt_cdf(const RosenblattSpec& spec, double x);

// Grid CDF sharing one characteristic-function table across all points.
std::vector<double> rosenblatt_cdf_grid(const RosenblattSpec& spec,
                                        const std::vector<double>& xgrid);

}  // namespace gneiting
