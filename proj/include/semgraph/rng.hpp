#ifndef SEMGRAPH_RNG_HPP
#define SEMGRAPH_RNG_HPP

#include <cstdint>

namespace semgraph {

// splitmix64; deterministic across platforms for reproducible suites.
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed = 0) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). n must be > 0.
  int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }

  bool chance(double p) { return static_cast<double>(next() >> 11) / 9007199254740992.0 < p; }
};

}  // namespace semgraph

#endif
