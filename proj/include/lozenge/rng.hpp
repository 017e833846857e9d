#pragma once

#include <cstdint>

namespace lozenge {

namespace detail {
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Counter-based generator: stream identity is a key hashed from
// (seed, stream ids), successive values come from an incrementing counter.
// Streams keyed by distinct ids never share state, so parallel chains are
// reproducible regardless of scheduling.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t s1 = 0, uint64_t s2 = 0, uint64_t s3 = 0) {
    key_ = detail::splitmix64(seed ^ 0x243f6a8885a308d3ULL);
    key_ = detail::splitmix64(key_ ^ s1);
    key_ = detail::splitmix64(key_ ^ s2);
    key_ = detail::splitmix64(key_ ^ s3);
    ctr_ = 0;
  }

  uint64_t next_u64() {
    uint64_t v = detail::splitmix64(key_ ^ detail::splitmix64(ctr_++ + key_));
    return v;
  }

  // Uniform double in [0,1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), unbiased via rejection.
  uint64_t next_below(uint64_t bound) {
    if (bound <= 1) return 0;
    uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      uint64_t v = next_u64();
      if (v >= threshold) return v % bound;
    }
  }

  bool next_bit() { return (next_u64() >> 63) != 0; }

 private:
  uint64_t key_;
  uint64_t ctr_;
};

}  // namespace lozenge
