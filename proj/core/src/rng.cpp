#include "shadowcover/rng.hpp"

#include <cmath>

namespace shadowcover {

namespace {

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Independent stream per (seed, counter); successive words advance a
// splitmix64 state derived from both.
struct Stream {
  std::uint64_t state;

  Stream(std::uint64_t seed, std::uint64_t counter)
      : state(splitmix_finalize(seed ^ splitmix_finalize(counter + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    return splitmix_finalize(state);
  }

  double next01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

double CounterRng::uniform01(std::uint64_t counter) const {
  return Stream(seed_, counter).next01();
}

double CounterRng::symmetric(std::uint64_t counter) const {
  return 2.0 * uniform01(counter) - 1.0;
}

Vec CounterRng::in_ball(int dim, double radius, std::uint64_t counter) const {
  Stream s(seed_, counter);
  Vec v(dim);
  for (int attempt = 0; attempt < 256; ++attempt) {
    for (int i = 0; i < dim; ++i) v[i] = 2.0 * s.next01() - 1.0;
    double n2 = v.squaredNorm();
    if (n2 <= 1.0 && n2 > 0.0) return radius * v;
  }
  // Rejection practically never exhausts 256 draws; fall back to a scaled box
  // sample to stay total.
  for (int i = 0; i < dim; ++i) v[i] = 2.0 * s.next01() - 1.0;
  double n = v.norm();
  if (n > 1.0) v /= n;
  return radius * v;
}

Vec CounterRng::unit(int dim, std::uint64_t counter) const {
  Vec v = in_ball(dim, 1.0, counter);
  double n = v.norm();
  if (n == 0.0) {
    v = Vec::Zero(dim);
    v[0] = 1.0;
    return v;
  }
  return v / n;
}

}  // namespace shadowcover
