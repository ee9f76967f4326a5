#include "shadowcover/pseudo_orbit.hpp"

#include <string>

#include "shadowcover/errors.hpp"

namespace shadowcover {

PseudoOrbit::PseudoOrbit(CoverMapSystem system, long k_lo, std::vector<CoverPoint> points)
    : system_(std::move(system)),
      core_lo_(k_lo),
      core_size_(static_cast<long>(points.size())),  // members init before the move below
      stored_lo_(k_lo),
      points_(std::move(points)) {
  validate();
}

PseudoOrbit::PseudoOrbit(CoverMapSystem system, long core_lo, long core_size, long stored_lo,
                         std::vector<CoverPoint> points)
    : system_(std::move(system)),
      core_lo_(core_lo),
      core_size_(core_size),
      stored_lo_(stored_lo),
      points_(std::move(points)) {
  validate();
}

void PseudoOrbit::validate() const {
  if (points_.empty()) throw InvalidArgument("pseudo-orbit window is empty");
  for (const CoverPoint& p : points_) {
    if (p.size() != system_.dim) throw DimensionMismatch("orbit point dimension differs from system");
  }
}

const CoverPoint& PseudoOrbit::at(long k) const {
  if (k < stored_lo() || k > stored_hi()) {
    throw InvalidArgument("index " + std::to_string(k) + " outside the stored window");
  }
  return points_[static_cast<std::size_t>(k - stored_lo_)];
}

CoverPoint PseudoOrbit::point_at(long k) const {
  if (k >= stored_lo() && k <= stored_hi()) return at(k);
  if (k > stored_hi()) return system_.iterate(points_.back(), k - stored_hi());
  return system_.iterate(points_.front(), k - stored_lo());
}

PseudoOrbit PseudoOrbit::extended(long pad) const {
  if (pad < 0) throw InvalidArgument("negative extension pad");
  if (pad == 0) return *this;
  std::vector<CoverPoint> pts;
  pts.reserve(points_.size() + 2 * static_cast<std::size_t>(pad));
  CoverPoint x = points_.front();
  std::vector<CoverPoint> back(static_cast<std::size_t>(pad));
  for (long j = 0; j < pad; ++j) {
    x = system_.iterate(x, -1);
    back[static_cast<std::size_t>(pad - 1 - j)] = x;
  }
  pts.insert(pts.end(), back.begin(), back.end());
  pts.insert(pts.end(), points_.begin(), points_.end());
  x = points_.back();
  for (long j = 0; j < pad; ++j) {
    x = system_.iterate(x, 1);
    pts.push_back(x);
  }
  return PseudoOrbit(system_, core_lo_, core_size_, stored_lo_ - pad, std::move(pts));
}

VectorSequence pseudo_orbit_errors(const PseudoOrbit& orbit) {
  long lo = orbit.k_lo() + 1, hi = orbit.k_hi();
  if (lo > hi) return VectorSequence::zero(orbit.system().dim);
  std::vector<Vec> vals;
  vals.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long k = lo; k <= hi; ++k) {
    vals.push_back(orbit.system().apply(orbit.at(k - 1)) - orbit.at(k));
  }
  return VectorSequence(lo, std::move(vals));
}

}  // namespace shadowcover
