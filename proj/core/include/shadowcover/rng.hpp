#pragma once

#include <cstdint>

#include "shadowcover/types.hpp"

namespace shadowcover {

// Counter-based deterministic generator (splitmix64 finalizer). Every draw is
// a pure function of (seed, counter), so generated data is reproducible
// across platforms and independent of call order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  // Uniform in [0,1).
  double uniform01(std::uint64_t counter) const;
  // Uniform in [-1,1).
  double symmetric(std::uint64_t counter) const;
  // Uniform on the closed Euclidean ball of the given radius.
  Vec in_ball(int dim, double radius, std::uint64_t counter) const;
  // Uniform direction on the unit sphere.
  Vec unit(int dim, std::uint64_t counter) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace shadowcover
