#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gibbsprep {

/// SplitMix64 step; used both as a generator stage and as a seed mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministically derives an independent stream seed from a base seed
/// and up to two indices (e.g. evaluation number, term index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = base;
  std::uint64_t z = splitmix64(s);
  s ^= a * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
  z ^= splitmix64(s);
  s ^= b * 0x9e3779b97f4a7c15ULL + 0x853c49e6748fea9bULL;
  return z ^ splitmix64(s);
}

/// Seeded 64-bit generator with the floating-point draws the library relies
/// on made explicit, so that a given seed reproduces the same stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (two uniforms per draw, no cached spare).
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Binomial(n, p). Small n is summed directly; large n delegates to the
  /// standard library's rejection sampler (deterministic for a fixed
  /// standard library build).
  long long binomial(long long n, double p) {
    if (n <= 256) {
      long long c = 0;
      for (long long i = 0; i < n; ++i) c += uniform() < p ? 1 : 0;
      return c;
    }
    std::binomial_distribution<long long> dist(n, p);
    return dist(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gibbsprep
