#include "gneiting/rng.hpp"

#include <cmath>

namespace gneiting {
namespace {

// 53-bit uniform in (0,1): never exactly 0 or 1, safe under log().
inline double u53(std::uint32_t hi, std::uint32_t lo) {
  std::uint64_t mant = (std::uint64_t(hi) << 21) ^ (lo >> 11);
  return (double(mant) + 0.5) * (1.0 / 9007199254740992.0);
}

}  // namespace

double CounterRng::uniform(std::uint64_t i) const {
  auto w = raw(i >> 1);
  return (i & 1) ? u53(w[2], w[3]) : u53(w[0], w[1]);
}

double CounterRng::normal(std::uint64_t i) const {
  auto w = raw(i >> 1);
  double u1 = u53(w[0], w[1]);
  double u2 = u53(w[2], w[3]);
  double r = std::sqrt(-2.0 * std::log(u1));
  double th = 6.283185307179586476925286766559 * u2;
  return (i & 1) ? r * std::sin(th) : r * std::cos(th);
}

std::uint32_t CounterRng::below(std::uint64_t i, std::uint32_t n) const {
  auto w = raw(i >> 1);
  std::uint32_t word = (i & 1) ? w[2] : w[0];
  return std::uint32_t((std::uint64_t(word) * n) >> 32);
}

}  // namespace gneiting
