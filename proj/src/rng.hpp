#pragma once

#include <cstdint>
#include <random>

namespace llgm {

// Deterministic stream RNG: each (seed, stream) pair yields an independent
// generator whose draws do not depend on thread scheduling. Parallel work
// units (node index, subsample index, replicate index) each own a stream.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed, stream)) {}

  std::mt19937_64& engine() { return engine_; }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<long>(mean)(engine_);
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0xda942042e4dd58b5ULL;
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x165667b19e3779f9ULL + (a << 6) + (a >> 2));
  }

  std::mt19937_64 engine_;
};

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  Rng make() const { return Rng(seed, stream_id); }
};

}  // namespace llgm
