#pragma once

#include <vector>

#include "shadowcover/types.hpp"

namespace shadowcover {

class CoverMapSystem;

// Universal covering pi : R^n -> R^n / Z^n for the standard integer lattice.
// The injectivity radius of the lattice is 1/2 (nearest distinct preimages of
// a point are 1 apart); lifts are accepted strictly inside eps0 * safety to
// keep roundoff away from the cut locus.
struct CoveringChart {
  int dim;
  double eps0 = 0.5;
  double safety = 0.98;

  explicit CoveringChart(int n) : dim(n) {}

  TorusPoint project(const CoverPoint& x) const;
  double torus_distance(const TorusPoint& a, const TorusPoint& b) const;

  // Unique preimage of `base` within eps0 of `anchor`. Throws NoUniqueLift
  // when base is not within the shrunk injectivity ball of project(anchor).
  CoverPoint lift_near(const TorusPoint& base, const CoverPoint& anchor) const;

  // Lifts a downstairs pseudo-orbit step by step: y[0] = seed and
  // y[k+1] = lift_near(seq[k+1], f(y[k])). Every downstairs jump must stay
  // below the injectivity radius or NoUniqueLift is thrown.
  std::vector<CoverPoint> lift_pseudo_orbit(const std::vector<TorusPoint>& seq,
                                            const CoverMapSystem& system,
                                            const CoverPoint& seed) const;
};

}  // namespace shadowcover
