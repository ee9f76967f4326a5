#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shadowcover/pseudo_orbit.hpp"
#include "shadowcover/system.hpp"

namespace shadowcover {

// Hyperbolic cocycle along a pseudo-orbit: splittings at every window point,
// transports I_k : T_{f(x_{k-1})} -> T_{x_k} (stable to stable, unstable to
// unstable, operator norm at most 1 in the adapted metric), and the maps
// A_k = I_{k+1} Df(x_k).
struct HyperbolicCocycle {
  int dim = 0;
  long k_lo = 0;
  long k_hi = 0;
  std::vector<Splitting> splittings;  // index k in [k_lo, k_hi]
  std::vector<Mat> A;                 // A_k for k in [k_lo, k_hi - 1]
  std::vector<Mat> A_inv;
  std::vector<Mat> I;  // I_k for k in [k_lo + 1, k_hi]
  double lambda = 0.0;
  double proj_bound = 1.0;
  Mat to_adapted;
  Mat from_adapted;
  std::string transport_rule;  // how I_k was chosen, for reproducibility

  long size() const { return k_hi - k_lo + 1; }
  bool has_center() const { return !splittings.empty() && splittings.front().has_center(); }

  const Splitting& splitting(long k) const { return splittings[index(k, k_lo, k_hi)]; }
  const Mat& A_at(long k) const { return A[index(k, k_lo, k_hi - 1)]; }
  const Mat& A_inv_at(long k) const { return A_inv[index(k, k_lo, k_hi - 1)]; }
  const Mat& I_at(long k) const { return I[index(k, k_lo + 1, k_hi)]; }

 private:
  static std::size_t index(long k, long lo, long hi);
};

// Builds the cocycle over the orbit's stored window. For linear systems every
// I_k is exactly the identity and every A_k equals the linear part.
HyperbolicCocycle build_cocycle(const CoverMapSystem& system, const PseudoOrbit& orbit);

// Worst-case defects of the cocycle conditions, measured in the adapted
// metric with randomly sampled vectors.
struct CocycleDiagnostics {
  double transport_norm_excess = 0.0;  // max sigma_max(I_k) - 1
  double bundle_mixing = 0.0;          // stable/unstable cross-leak through I_k
  double stable_factor = 0.0;          // max |A_k v| / |v| over stable v
  double unstable_factor = 0.0;        // max |A_k^{-1} w| / |w| over unstable w
  double construction_defect = 0.0;    // max ||A_k - I_{k+1} Df(x_k)||
};

CocycleDiagnostics check_cocycle(const HyperbolicCocycle& cocycle, const CoverMapSystem& system,
                                 const PseudoOrbit& orbit, int vectors_per_index,
                                 std::uint64_t seed);

}  // namespace shadowcover
