#pragma once

#include <vector>

#include "shadowcover/sequence.hpp"
#include "shadowcover/system.hpp"
#include "shadowcover/types.hpp"

namespace shadowcover {

// A two-sided limit pseudo-orbit in compactly perturbed form: jump errors may
// be nonzero only on the core window [k_lo, k_hi]; outside it the sequence
// continues as the exact orbit of the window endpoints. Points may be
// materialized on a wider window (see extended()) without changing where
// errors are allowed to live.
class PseudoOrbit {
 public:
  PseudoOrbit(CoverMapSystem system, long k_lo, std::vector<CoverPoint> points);

  const CoverMapSystem& system() const { return system_; }

  // Core window: where jump errors may be nonzero.
  long k_lo() const { return core_lo_; }
  long k_hi() const { return core_lo_ + core_size_ - 1; }

  // Materialized window: indices with stored points.
  long stored_lo() const { return stored_lo_; }
  long stored_hi() const { return stored_lo_ + static_cast<long>(points_.size()) - 1; }

  const CoverPoint& at(long k) const;

  // Point at any index; tail indices are computed by iterating the map from
  // the nearest stored point.
  CoverPoint point_at(long k) const;

  // Same orbit with `pad` extra exact-tail points materialized on each side.
  PseudoOrbit extended(long pad) const;

 private:
  CoverMapSystem system_;
  long core_lo_;
  long core_size_;
  long stored_lo_;
  std::vector<CoverPoint> points_;

  PseudoOrbit(CoverMapSystem system, long core_lo, long core_size, long stored_lo,
              std::vector<CoverPoint> points);
  void validate() const;
};

// Jump errors e_k = f(x_{k-1}) - x_k, indexed so entry k is the jump into x_k.
// Supported on [k_lo + 1, k_hi]; identically zero outside by the tail
// contract.
VectorSequence pseudo_orbit_errors(const PseudoOrbit& orbit);

}  // namespace shadowcover
