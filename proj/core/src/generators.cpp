#include "shadowcover/generators.hpp"

#include <algorithm>
#include <string>

#include "shadowcover/errors.hpp"
#include "shadowcover/rng.hpp"

namespace shadowcover {

namespace {

void check_window(long k_lo, long k_hi) {
  if (k_lo > k_hi) {
    throw InvalidArgument("window [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) +
                          "] is empty");
  }
}

void check_point(const CoverMapSystem& system, const CoverPoint& p) {
  if (p.size() != system.dim) throw DimensionMismatch("anchor point dimension differs from system");
}

}  // namespace

PseudoOrbit gen_exact(const CoverMapSystem& system, const CoverPoint& p, long k_lo, long k_hi) {
  check_window(k_lo, k_hi);
  check_point(system, p);
  std::vector<CoverPoint> pts(static_cast<std::size_t>(k_hi - k_lo + 1));
  long anchor = std::clamp(0L, k_lo, k_hi);
  pts[static_cast<std::size_t>(anchor - k_lo)] = system.iterate(p, anchor);
  for (long k = anchor + 1; k <= k_hi; ++k) {
    pts[static_cast<std::size_t>(k - k_lo)] =
        system.iterate(pts[static_cast<std::size_t>(k - 1 - k_lo)], 1);
  }
  for (long k = anchor - 1; k >= k_lo; --k) {
    pts[static_cast<std::size_t>(k - k_lo)] =
        system.iterate(pts[static_cast<std::size_t>(k + 1 - k_lo)], -1);
  }
  return PseudoOrbit(system, k_lo, std::move(pts));
}

PseudoOrbit gen_spliced(const CoverMapSystem& system, const CoverPoint& p, const CoverPoint& q,
                        long k_lo, long k_hi) {
  if (!(k_lo < 0 && 0 < k_hi)) {
    throw InvalidArgument("spliced orbit needs k_lo < 0 < k_hi, got [" + std::to_string(k_lo) +
                          ", " + std::to_string(k_hi) + "]");
  }
  check_point(system, p);
  check_point(system, q);
  std::vector<CoverPoint> pts(static_cast<std::size_t>(k_hi - k_lo + 1));
  CoverPoint x = p;
  for (long k = -1; k >= k_lo; --k) {
    x = system.iterate(x, -1);
    pts[static_cast<std::size_t>(k - k_lo)] = x;
  }
  pts[static_cast<std::size_t>(-k_lo)] = q;
  for (long k = 1; k <= k_hi; ++k) {
    pts[static_cast<std::size_t>(k - k_lo)] =
        system.iterate(pts[static_cast<std::size_t>(k - 1 - k_lo)], 1);
  }
  return PseudoOrbit(system, k_lo, std::move(pts));
}

PseudoOrbit gen_noisy(const CoverMapSystem& system, const CoverPoint& p, long k_lo, long k_hi,
                      double noise_sup, std::uint64_t seed) {
  check_window(k_lo, k_hi);
  check_point(system, p);
  if (noise_sup < 0) throw InvalidArgument("noise_sup must be nonnegative");
  if (noise_sup == 0.0) return gen_exact(system, p, k_lo, k_hi);

  CounterRng rng(seed);
  // Transition k -> k+1 is displaced by eta_k; the counter is the window
  // offset so regeneration is position-stable.
  auto eta = [&](long k) {
    return rng.in_ball(system.dim, noise_sup, static_cast<std::uint64_t>(k - k_lo));
  };

  std::vector<CoverPoint> pts(static_cast<std::size_t>(k_hi - k_lo + 1));
  long anchor = std::clamp(0L, k_lo, k_hi);
  pts[static_cast<std::size_t>(anchor - k_lo)] = system.iterate(p, anchor);
  for (long k = anchor + 1; k <= k_hi; ++k) {
    CoverPoint next = system.iterate(pts[static_cast<std::size_t>(k - 1 - k_lo)], 1) + eta(k - 1);
    pts[static_cast<std::size_t>(k - k_lo)] = next;
  }
  for (long k = anchor - 1; k >= k_lo; --k) {
    // x_k = f^{-1}(x_{k+1} - eta_k) keeps the displaced-transition law exact
    // on the backward half as well.
    CoverPoint prev =
        system.iterate(CoverPoint(pts[static_cast<std::size_t>(k + 1 - k_lo)] - eta(k)), -1);
    pts[static_cast<std::size_t>(k - k_lo)] = prev;
  }
  return PseudoOrbit(system, k_lo, std::move(pts));
}

}  // namespace shadowcover
