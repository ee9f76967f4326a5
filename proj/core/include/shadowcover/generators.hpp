#pragma once

#include <cstdint>

#include "shadowcover/pseudo_orbit.hpp"
#include "shadowcover/system.hpp"

namespace shadowcover {

// Exact orbit segment x_k = f^k(p) on [k_lo, k_hi]; index 0 carries p when the
// window contains it. Jump errors vanish (to roundoff on the backward half,
// which is generated through the inverse map).
PseudoOrbit gen_exact(const CoverMapSystem& system, const CoverPoint& p, long k_lo, long k_hi);

// Heteroclinic-type splice: x_k = f^k(p) for k < 0 and x_k = f^k(q) for
// k >= 0. Exactly one jump error, at index 0. Requires k_lo < 0 < k_hi.
PseudoOrbit gen_spliced(const CoverMapSystem& system, const CoverPoint& p, const CoverPoint& q,
                        long k_lo, long k_hi);

// Noisy orbit through p at index 0: every in-window transition is displaced
// by a vector drawn uniformly from the ball of radius noise_sup (counter-based
// generator, bitwise reproducible for a fixed seed). With noise_sup = 0 this
// reproduces gen_exact exactly.
PseudoOrbit gen_noisy(const CoverMapSystem& system, const CoverPoint& p, long k_lo, long k_hi,
                      double noise_sup, std::uint64_t seed);

}  // namespace shadowcover
