#pragma once

#include <cstdint>
#include <vector>

// Deterministic PRNG utilities. std::uniform_int_distribution is
// implementation-defined, so benchmark generation uses these fixed
// algorithms to guarantee byte-identical suites across toolchains.
namespace brap {

// splitmix64: public-domain mixer (Steele, Lea, Flood). Used both as a
// stream generator and as the seed-mixing function for suite generation.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One-shot mix of a value into a seed (for deriving per-instance seeds).
inline uint64_t mix64(uint64_t seed, uint64_t value) {
  uint64_t s = seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() { return splitmix64(state_); }

  // Unbiased bounded draw in [0, n) via rejection sampling.
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  int below_int(int n) { return static_cast<int>(below(static_cast<uint64_t>(n))); }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // First k elements of a uniform random permutation of `pool` (k <= size).
  template <typename T>
  std::vector<T> sample(std::vector<T> pool, size_t k) {
    std::vector<T> out;
    out.reserve(k);
    for (size_t i = 0; i < k && i < pool.size(); ++i) {
      size_t j = i + below(pool.size() - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }

 private:
  uint64_t state_;
};

}  // namespace brap
