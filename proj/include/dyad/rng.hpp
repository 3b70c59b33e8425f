#pragma once

#include <cstdint>
#include <random>

namespace dyad {

// SplitMix64; used to derive independent stream seeds from a root seed so
// parallel replicates stay deterministic.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic random stream: stream `id` of root `seed` always produces
/// the same sequence. Doubles are built from the top 53 bits so results are
/// bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t s = seed ^ (0xda3e39cb94b95bdbull * (stream + 1));
    const std::uint64_t lo = splitmix64(s);
    const std::uint64_t hi = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
                      static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)};
    gen_.seed(seq);
  }

  std::uint64_t next_u64() { return gen_(); }

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dyad
