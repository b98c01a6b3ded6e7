#pragma once
#include <array>
#include <cstdint>

namespace gneiting {

// Philox4x32-10 counter-based generator. Each (key, counter) pair maps to
// four 32-bit words through ten bijective rounds; distinct streams are
// distinct high counter words, so replicate r always sees the same draws
// no matter how work is scheduled across threads.
struct Philox4x32 {
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = std::uint64_t(kM0) * ctr[0];
      std::uint64_t p1 = std::uint64_t(kM1) * ctr[2];
      std::array<std::uint32_t, 4> next;
      next[0] = std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0];
      next[1] = std::uint32_t(p1);
      next[2] = std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1];
      next[3] = std::uint32_t(p0);
      ctr = next;
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }
};

// Random-access stream view: stream `stream` of master seed `seed`.
// uniform(i) is the i-th U(0,1) draw, normal(i) the i-th N(0,1) draw;
// both are pure functions of (seed, stream, i).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        hi_{std::uint32_t(stream), std::uint32_t(stream >> 32)} {}

  // One Philox block yields two doubles, each from 53 bits of two words.
  double uniform(std::uint64_t i) const;
  // Box-Muller pair per block: normal(2j) and normal(2j+1) share block j.
  double normal(std::uint64_t i) const;
  // Uniform on {0, 1, ..., n-1} by rejection-free scaling (n <= 2^32).
  std::uint32_t below(std::uint64_t i, std::uint32_t n) const;

 private:
  std::array<std::uint32_t, 4> raw(std::uint64_t block) const {
    return Philox4x32::block({std::uint32_t(block), std::uint32_t(block >> 32), hi_[0], hi_[1]},
                             key_);
  }
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> hi_;
  friend struct RngTestAccess;
};

}  // namespace gneiting
