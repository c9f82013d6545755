#pragma once
// Counter-based seedable RNG.  Every consumer derives an independent stream
// from (seed, stream_index) via splitmix64 key expansion feeding a
// xoshiro256** state, so results are reproducible and independent of thread
// count or evaluation order.
#include <cstdint>

namespace hardcore {

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 over (seed, stream) fills the four state words
    std::uint64_t x = seed * 0x9e3779b97f4a7c15ULL + stream;
    for (auto& w : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      w = z ^ (z >> 31);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // xoshiro forbids all-zero
  }

  std::uint64_t next_u64() {
    auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0,1) with 53-bit resolution
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // unbiased uniform integer in [0, n) by rejection
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace hardcore
