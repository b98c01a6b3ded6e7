#pragma once
#include <cstdint>
#include <vector>

#include "gneiting/common.hpp"
#include "gneiting/covariance.hpp"
#include "gneiting/geometry.hpp"

namespace gneiting {

// Cell-centered lattice covering the bounding box of a product window.
// Axis i has n[i] nodes at origin[i] + (k + 1/2) h.
struct GridSpec {
  std::vector<int> n;
  std::vector<double> origin;
  double h = 1.0;
  int d1 = 1;  // leading axes belong to the first block

  std::size_t total() const {
    std::size_t t = 1;
    for (int v : n) t *= std::size_t(v);
    return t;
  }
  int dim() const { return int(n.size()); }
};

inline constexpr std::size_t kGridNodeCap = std::size_t(1) << 22;

// Build the lattice for the window t1*D1 x t2*D2 at mesh width h.
GridSpec make_grid(const WindowSpec& window, double t, double h = 1.0);

// Node-inside-window flags for the lattice; empty when every node is
// inside (box windows), so storage is only paid for curved bodies.
std::vector<std::uint8_t> window_mask(const GridSpec& grid, const WindowSpec& window, double t);

// One simulated field replicate on a grid, plus the window mask (empty
// mask pointer means every node lies inside the window).
struct FieldSample {
  const GridSpec* grid = nullptr;
  const std::vector<double>* values = nullptr;
  const std::vector<std::uint8_t>* mask = nullptr;
};

// Circulant embedding of a stationary covariance on the grid torus. The
// spectrum is computed once per (covariance, grid); replicates are one
// FFT each, and replicate r of seed s is bit-identical no matter how the
// work is scheduled.
class CirculantEmbedding {
 public:
  CirculantEmbedding(const GneitingCovariance& cov, const GridSpec& grid);
  CirculantEmbedding(const CirculantEmbedding&) = delete;
  CirculantEmbedding& operator=(const CirculantEmbedding&) = delete;

  const GridSpec& grid() const { return grid_; }
  // Doubling factor of the torus relative to the grid (2, 4, or 8);
  // 0 when the Cholesky fallback is in use.
  int factor() const { return factor_; }
  // Relative negative-eigenvalue mass that was clipped (<= 1e-3).
  double clipped_mass() const { return clipped_mass_; }
  bool used_cholesky() const { return factor_ == 0; }

  // Per-thread sampling context owning its FFT buffers.
  class Sampler {
   public:
    explicit Sampler(const CirculantEmbedding& owner);
    ~Sampler();
    Sampler(const Sampler&) = delete;
    Sampler& operator=(const Sampler&) = delete;
    // Fill `out` (size grid.total(), row-major) with replicate `rep`.
    void sample(std::uint64_t seed, std::uint64_t rep, std::vector<double>& out);

   private:
    const CirculantEmbedding& owner_;
    void* buf_ = nullptr;   // fftw_complex array
    void* plan_ = nullptr;  // fftw_plan
  };

 private:
  void build_spectrum(const GneitingCovariance& cov);
  void build_cholesky(const GneitingCovariance& cov);

  GridSpec grid_;
  std::vector<int> m_;             // torus dims
  std::size_t m_total_ = 0;
  std::vector<double> amp_;        // sqrt(lambda / m_total), torus layout
  std::vector<double> chol_;       // packed lower-triangular factor (fallback)
  int factor_ = 2;
  double clipped_mass_ = 0.0;
};

}  // namespace gneiting
