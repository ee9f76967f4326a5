#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "shadowcover/covering.hpp"
#include "shadowcover/operators.hpp"
#include "shadowcover/pseudo_orbit.hpp"

namespace shadowcover {

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 100;
  double tail_tol = 1e-12;
  long verify_window_pad = 50;
};

struct ShadowingResult {
  CoverPoint z;             // shadowing point, z = x_0 + v*_0
  VectorSequence v_star;    // fixed point of F (and G)
  double residual = 0.0;    // sup |F(v*) - v*|
  int iterations = 0;
  bool converged = false;
  // d(f^k(z), x_k) over the padded window, computed through the operator
  // route |v*_k| (tails continued by projected propagation, which stays
  // accurate where direct orbit tracking would drown in unstable roundoff).
  std::vector<std::pair<long, double>> decay;
  std::vector<double> residual_history;  // residual after each iteration
};

// Fixed-point iteration of G from v = 0 (or `initial` when given). Builds the
// cocycle on the orbit window padded by the inverse-series tail extent,
// retrying with a doubled pad at most twice when the window proves too small.
// Convergence requires the final residual under config.tol; a stalled
// difference test without a small residual reports converged = false.
ShadowingResult solve_fixed_point(const PseudoOrbit& orbit, const SolverConfig& config = {},
                                  const std::optional<VectorSequence>& initial = std::nullopt);

// Product-structure route for linear systems: the backward tail orbit and the
// forward tail orbit intersect leaves in the unique point z with
// z - z1 in E^u and z - z2 in E^s, where z1, z2 are the time-0 representatives
// of the two tail orbits. Evaluated per eigen-block with scalar powers.
CoverPoint solve_product(const PseudoOrbit& orbit);

struct DecayReport {
  std::vector<std::pair<long, double>> distances;  // (k, d(f^k(z), x_k))
  double max_interior = 0.0;       // max over the orbit core window
  double rate_backward = 0.0;      // geometric fit on the outer half backward tail
  double rate_forward = 0.0;       // same forward
  bool tails_decrease = false;
};

// Direct dynamical verification: iterates z through the map and measures the
// distance to the pseudo-orbit over the padded window. Honest but subject to
// unstable roundoff amplification for large pads; throws OrbitEscapes when
// iterates leave the representable range.
DecayReport verify_shadowing(const PseudoOrbit& orbit, const CoverPoint& z, long pad);

struct LiftSolveOutcome {
  TorusPoint z_torus;
  ShadowingResult upstairs;
  // Downstairs distances d(pi f^k(z), pi x_k) = min over lattice translates.
  std::vector<std::pair<long, double>> downstairs_decay;
};

// Lift a downstairs pseudo-orbit (indices k_lo, k_lo+1, ...), solve on the
// cover, and project the shadowing point back.
LiftSolveOutcome lift_and_solve(const std::vector<TorusPoint>& torus_orbit,
                                const CoverMapSystem& system, const CoverPoint& seed,
                                const SolverConfig& config = {}, long k_lo = 0);

struct UniquenessReport {
  double max_spread = 0.0;  // max pairwise distance between recovered z
  int trials = 0;
  std::vector<bool> trial_converged;
};

// Re-runs the solver from `trials` random small initial sequences and reports
// how far the recovered shadowing points spread.
UniquenessReport uniqueness_probe(const PseudoOrbit& orbit, const SolverConfig& config, int trials,
                                  std::uint64_t seed);

}  // namespace shadowcover
