#pragma once
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gneiting {

inline constexpr const char* kVersion = "1.0.0";

// Error taxonomy. ConfigError maps to exit code 2, NumericalError (and
// subtypes) to exit code 3; a failed verification verdict is exit code 1.
struct Error : std::runtime_error {
  explicit Error(const std::string& kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(kind) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("ConfigError", msg) {}
};

struct NumericalError : Error {
  using Error::Error;
  explicit NumericalError(const std::string& msg) : Error("NumericalError", msg) {}
};

struct InvalidAlpha : NumericalError {
  explicit InvalidAlpha(const std::string& msg) : NumericalError("InvalidAlpha", msg) {}
};
struct SingularityBudget : NumericalError {
  explicit SingularityBudget(const std::string& msg) : NumericalError("SingularityBudget", msg) {}
};
struct SeriesDiverging : NumericalError {
  explicit SeriesDiverging(const std::string& msg) : NumericalError("SeriesDiverging", msg) {}
};
struct SeriesTail : NumericalError {
  explicit SeriesTail(const std::string& msg) : NumericalError("SeriesTail", msg) {}
};
struct EmbeddingFailed : NumericalError {
  explicit EmbeddingFailed(const std::string& msg) : NumericalError("EmbeddingFailed", msg) {}
};
struct VarUndefined : NumericalError {
  explicit VarUndefined(const std::string& msg) : NumericalError("VarUndefined", msg) {}
};
struct DegenerateLadder : NumericalError {
  explicit DegenerateLadder(const std::string& msg) : NumericalError("DegenerateLadder", msg) {}
};
struct InversionUnstable : NumericalError {
  explicit InversionUnstable(const std::string& msg) : NumericalError("InversionUnstable", msg) {}
};
struct CDFUnavailable : NumericalError {
  explicit CDFUnavailable(const std::string& msg) : NumericalError("CDFUnavailable", msg) {}
};
struct Unsupported : Error {
  explicit Unsupported(const std::string& msg) : Error("Unsupported", msg) {}
};
struct InvalidParams : Error {
  explicit InvalidParams(const std::string& msg) : Error("InvalidParams", msg) {}
};

// Pairwise (cascade) summation: O(log n) error growth, used by every
// accumulation over grids and replicate ensembles.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}
inline double pairwise_sum(const std::vector<double>& x) {
  return pairwise_sum(x.data(), x.size());
}

// FNV-1a 64-bit hash; stamps configuration provenance into output headers.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace gneiting
