#include "shadowcover/covering.hpp"

#include <cmath>
#include <string>

#include "shadowcover/errors.hpp"
#include "shadowcover/system.hpp"

namespace shadowcover {

namespace {

// Fractional part in [0,1). x - floor(x) can round up to 1.0 for tiny
// negative x; fold that case back to 0.
double mod1(double x) {
  double y = x - std::floor(x);
  if (y >= 1.0) y = 0.0;
  return y;
}

// Representative of t mod 1 in [-1/2, 1/2].
double wrap_half(double t) { return t - std::round(t); }

}  // namespace

TorusPoint CoveringChart::project(const CoverPoint& x) const {
  Vec c(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) c[i] = mod1(x[i]);
  return TorusPoint{c};
}

double CoveringChart::torus_distance(const TorusPoint& a, const TorusPoint& b) const {
  // The lattice is a product, so the minimum over translates splits per
  // coordinate.
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.coords.size(); ++i) {
    double w = wrap_half(a.coords[i] - b.coords[i]);
    s += w * w;
  }
  return std::sqrt(s);
}

CoverPoint CoveringChart::lift_near(const TorusPoint& base, const CoverPoint& anchor) const {
  double d = torus_distance(base, project(anchor));
  if (!(d < eps0 * safety)) {
    throw NoUniqueLift("distance " + std::to_string(d) + " from anchor exceeds " +
                       std::to_string(eps0 * safety));
  }
  CoverPoint out(anchor.size());
  for (Eigen::Index i = 0; i < anchor.size(); ++i) {
    out[i] = base.coords[i] + std::round(anchor[i] - base.coords[i]);
  }
  return out;
}

std::vector<CoverPoint> CoveringChart::lift_pseudo_orbit(const std::vector<TorusPoint>& seq,
                                                         const CoverMapSystem& system,
                                                         const CoverPoint& seed) const {
  if (seq.empty()) throw InvalidArgument("empty pseudo-orbit");
  if (torus_distance(project(seed), seq[0]) > 1e-9) {
    throw InvalidArgument("seed does not project to the first pseudo-orbit point");
  }
  std::vector<CoverPoint> lifted;
  lifted.reserve(seq.size());
  lifted.push_back(seed);
  for (std::size_t k = 1; k < seq.size(); ++k) {
    CoverPoint fy = system.apply(lifted.back());
    double jump = torus_distance(project(fy), seq[k]);
    if (!(jump < eps0 * safety)) {
      throw NoUniqueLift("downstairs jump " + std::to_string(jump) + " at index " +
                         std::to_string(k) + " reaches the injectivity radius");
    }
    lifted.push_back(lift_near(seq[k], fy));
  }
  return lifted;
}

}  // namespace shadowcover
