#include "loggas/rng.hpp"

#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace loggas {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t replica) {
  const std::uint64_t key = splitmix64(seed) ^ splitmix64(~replica);
  const std::uint64_t key2 = splitmix64(key);
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(key2), static_cast<std::uint32_t>(key2 >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t replica) : engine_(make_engine(seed, replica)) {}

double Rng::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(engine_);
}

double Rng::uniform() {
  boost::random::uniform_01<double> dist;
  return dist(engine_);
}

double Rng::chi_squared(double dof) {
  boost::random::chi_squared_distribution<double> dist(dof);
  return dist(engine_);
}

std::uint64_t Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  boost::random::poisson_distribution<std::uint64_t, double> dist(mean);
  return dist(engine_);
}

}  // namespace loggas
