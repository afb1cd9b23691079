#pragma once

#include <cstdint>
#include <random>

namespace loggas {

/// SplitMix64 finalizer; used to derive independent replica streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random source for one replica.
///
/// The stream for (seed, replica) is keyed by splitmix64(seed) ^ splitmix64(~replica),
/// expanded through std::seed_seq into a mt19937_64 state. Distributions come from
/// Boost.Random so that output is identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t replica = 0);

  double normal();
  /// Uniform on [0, 1).
  double uniform();
  double chi_squared(double dof);
  std::uint64_t poisson(double mean);
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace loggas
