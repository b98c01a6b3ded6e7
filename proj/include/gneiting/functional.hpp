#pragma once
#include <cstdint>
#include <vector>

#include "gneiting/common.hpp"
#include "gneiting/fieldsim.hpp"
#include "gneiting/hermite.hpp"

namespace gneiting {

// Riemann-sum additive functional of one replicate:
// h^d * sum over window nodes of (phi(field) - E phi(N)).
double evaluate_functional(const FieldSample& sample, const HermiteFunctional& phi);

// Fisher k-statistics of a replicate ensemble with delete-1 jackknife
// standard errors (power-sum subtraction, O(n) total).
struct EnsembleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double k2 = 0.0, k3 = 0.0, k4 = 0.0;    // unbiased cumulant estimates
  double skew = 0.0, exkurt = 0.0;        // k3/k2^{3/2}, k4/k2^2
  double se_mean = 0.0, se_k2 = 0.0, se_k3 = 0.0;
  double se_skew = 0.0, se_exkurt = 0.0;
  std::vector<double> values;             // retained for distribution tests
};

EnsembleStats ensemble_stats(std::vector<double> values);

// Simulate n_reps replicates, apply the functional, and summarize.
// Replicate r depends only on (seed, r): thread count never changes output.
EnsembleStats run_ensemble(const CirculantEmbedding& emb, const HermiteFunctional& phi,
                           const std::vector<std::uint8_t>* mask, std::uint64_t seed,
                           std::size_t n_reps, int threads = 1);

}  // namespace gneiting
