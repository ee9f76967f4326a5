#pragma once

#include <Eigen/Dense>

namespace shadowcover {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Point on the universal cover R^n. Plain vector so cover arithmetic
// (translation by tangent vectors, lattice shifts) stays untyped.
using CoverPoint = Vec;

// Point on the torus R^n / Z^n, every coordinate in [0,1).
struct TorusPoint {
  Vec coords;

  int dim() const { return static_cast<int>(coords.size()); }
};

}  // namespace shadowcover
