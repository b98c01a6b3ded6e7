#include "gneiting/functional.hpp"

#include <cmath>
#include <thread>

namespace gneiting {

double evaluate_functional(const FieldSample& sample, const HermiteFunctional& phi) {
  if (!sample.grid || !sample.values) throw ConfigError("field sample is empty");
  const std::vector<double>& v = *sample.values;
  std::vector<double> terms;
  terms.reserve(v.size());
  if (sample.mask && !sample.mask->empty()) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if ((*sample.mask)[i]) terms.push_back(phi.eval_centered(v[i]));
  } else {
    for (double b : v) terms.push_back(phi.eval_centered(b));
  }
  double cell = std::pow(sample.grid->h, sample.grid->dim());
  return cell * pairwise_sum(terms);
}

EnsembleStats ensemble_stats(std::vector<double> values) {
  std::size_t n = values.size();
  if (n < 2) throw VarUndefined("ensemble variance needs at least two replicates");
  EnsembleStats st;
  st.n = n;
  st.values = std::move(values);
  const std::vector<double>& y = st.values;
  st.mean = pairwise_sum(y) / double(n);

  std::vector<double> z(n), z2(n), z3(n), z4(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = y[i] - st.mean;
    z2[i] = z[i] * z[i];
    z3[i] = z2[i] * z[i];
    z4[i] = z2[i] * z2[i];
  }
  double P2 = pairwise_sum(z2), P3 = pairwise_sum(z3), P4 = pairwise_sum(z4);
  double dn = double(n);
  auto kstats = [](double m, double s2, double s3, double s4, double& k2, double& k3,
                   double& k4) {
    k2 = s2 / (m - 1.0);
    k3 = (m >= 3.0) ? m * s3 / ((m - 1.0) * (m - 2.0)) : 0.0;
    k4 = (m >= 4.0)
             ? ((m * m + m) * s4 - 3.0 * (m - 1.0) * s2 * s2) / ((m - 1.0) * (m - 2.0) * (m - 3.0))
             : 0.0;
  };
  kstats(dn, P2, P3, P4, st.k2, st.k3, st.k4);
  st.skew = (n >= 3) ? st.k3 / std::pow(st.k2, 1.5) : 0.0;
  st.exkurt = (n >= 4) ? st.k4 / (st.k2 * st.k2) : 0.0;
  st.se_mean = std::sqrt(st.k2 / dn);

  if (n >= 5) {
    // Delete-1 jackknife by subtracting each point from the global
    // central power sums and recentering.
    double m = dn - 1.0;
    std::vector<double> jk2(n), jk3(n), jk4(n), jskew(n), jkurt(n);
    for (std::size_t i = 0; i < n; ++i) {
      double zi = z[i];
      double p1 = -zi;
      double p2 = P2 - zi * zi;
      double p3 = P3 - zi * zi * zi;
      double p4 = P4 - zi * zi * zi * zi;
      double mb = p1 / m;
      double s2 = p2 - m * mb * mb;
      double s3 = p3 - 3.0 * mb * p2 + 2.0 * m * mb * mb * mb;
      double s4 = p4 - 4.0 * mb * p3 + 6.0 * mb * mb * p2 - 3.0 * m * mb * mb * mb * mb;
      kstats(m, s2, s3, s4, jk2[i], jk3[i], jk4[i]);
      jskew[i] = jk3[i] / std::pow(jk2[i], 1.5);
      jkurt[i] = jk4[i] / (jk2[i] * jk2[i]);
    }
    auto jack_se = [&](const std::vector<double>& g) {
      double gm = pairwise_sum(g) / dn;
      double ss = 0.0;
      for (double v : g) ss += (v - gm) * (v - gm);
      return std::sqrt((dn - 1.0) / dn * ss);
    };
    st.se_k2 = jack_se(jk2);
    st.se_k3 = jack_se(jk3);
    st.se_skew = jack_se(jskew);
    st.se_exkurt = jack_se(jkurt);
  }
  return st;
}

EnsembleStats run_ensemble(const CirculantEmbedding& emb, const HermiteFunctional& phi,
                           const std::vector<std::uint8_t>* mask, std::uint64_t seed,
                           std::size_t n_reps, int threads) {
  if (n_reps == 0) throw VarUndefined("ensemble needs at least one replicate");
  std::vector<double> y(n_reps);
  int T = threads < 1 ? 1 : threads;
  if (std::size_t(T) > n_reps) T = int(n_reps);
  auto worker = [&](std::size_t lo, std::size_t hi) {
    CirculantEmbedding::Sampler sampler(emb);
    std::vector<double> field;
    for (std::size_t r = lo; r < hi; ++r) {
      sampler.sample(seed, r, field);
      FieldSample fs{&emb.grid(), &field, mask};
      y[r] = evaluate_functional(fs, phi);
    }
  };
  if (T == 1) {
    worker(0, n_reps);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (n_reps + std::size_t(T) - 1) / std::size_t(T);
    for (int t = 0; t < T; ++t) {
      std::size_t lo = std::size_t(t) * chunk, hi = std::min(n_reps, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return ensemble_stats(std::move(y));
}

}  // namespace gneiting
