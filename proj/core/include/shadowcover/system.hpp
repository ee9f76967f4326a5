#pragma once

#include <vector>

#include "shadowcover/types.hpp"

namespace shadowcover {

// Invariant splitting of R^n at a point: bases (columns) and the projections
// onto each subspace parallel to the others.
struct Splitting {
  Mat stable;    // n x s
  Mat unstable;  // n x u
  Mat center;    // n x c (0 columns when absent)
  Mat proj_s;
  Mat proj_u;
  Mat proj_c;
  double basis_condition = 1.0;  // condition number of the stacked basis

  bool has_center() const { return center.cols() > 0; }
};

// One term of a Z^n-periodic trigonometric perturbation:
// amplitude * sin(2*pi * frequency . x).
struct PerturbationTerm {
  Eigen::VectorXi frequency;
  Vec amplitude;
};

// Spectral block of a linear map in adapted coordinates. Real eigenvalues
// occupy one coordinate; complex pairs occupy two, on which the map acts as
// modulus * rotation(angle).
struct EigenBlock {
  enum Kind { Stable, Unstable, Center };
  std::vector<int> indices;  // adapted coordinate slots
  double modulus = 0.0;
  double angle = 0.0;  // 0 for real blocks
  Kind kind = Stable;
};

// A lift of a hyperbolic torus map to R^n: f(x) = L x + eps * phi(x) with L
// unimodular and phi lattice-periodic. Carries the derivative, the invariant
// splitting data, and the adapted coordinate change in which projections are
// orthogonal and one-step contraction holds with factor `lambda`.
class CoverMapSystem {
 public:
  int dim = 0;
  Mat linear_part;  // L (integer entries for genuine torus lifts)
  double eps = 0.0;
  std::vector<PerturbationTerm> phi;
  bool partially_hyperbolic = false;

  double lambda = 0.0;      // one-step contraction bound (adapted metric)
  double proj_bound = 1.0;  // N: operator norm bound of the projections
  Mat to_adapted;           // Q
  Mat from_adapted;         // Q^{-1}
  Splitting linear_splitting;
  std::vector<EigenBlock> blocks;
  int cone_steps = 20;  // finite-time refinement depth for perturbed splittings

  bool is_linear() const { return eps == 0.0 || phi.empty(); }
  bool lattice_compatible() const;  // L has integer entries

  CoverPoint apply(const CoverPoint& x) const;
  CoverPoint apply_inverse(const CoverPoint& x) const;
  Mat derivative(const CoverPoint& x) const;
  Splitting splitting_at(const CoverPoint& x) const;

  // f^k (k may be negative). Throws OrbitEscapes past the representable guard.
  CoverPoint iterate(CoverPoint x, long k) const;

  Vec phi_value(const CoverPoint& x) const;
  Mat phi_derivative(const CoverPoint& x) const;

  Mat linear_inverse;  // cached L^{-1} (exact integer entries for torus lifts)

 private:
  Mat unstable_frame(const CoverPoint& x) const;
  Mat stable_frame(const CoverPoint& x) const;

  friend CoverMapSystem make_perturbed_system(const Mat&, double,
                                              const std::vector<PerturbationTerm>&, int, int);
};

// Linear system f(x) = L x. Requires |det L| = 1 and no eigenvalue of
// modulus within 1e-9 of 1 unless allow_partially_hyperbolic is set (center
// directions are then recorded with their own projection).
CoverMapSystem make_linear_system(const Mat& L, bool allow_partially_hyperbolic = false);

// Perturbed system f(x) = L x + eps * phi(x). The splitting is computed by
// finite-time cone refinement; hyperbolicity of the perturbed map is certified
// empirically on a sample grid and ConeCheckFailed is thrown when the cone
// field fails to contract or contraction bounds cannot be established.
CoverMapSystem make_perturbed_system(const Mat& L, double eps,
                                     const std::vector<PerturbationTerm>& phi,
                                     int cone_steps = 20, int grid_per_dim = 5);

// Change of coordinates (to_adapted, from_adapted) in which the projections of
// the linear part are orthogonal and the contraction bound holds with
// system.lambda.
std::pair<Mat, Mat> adapted_coordinates(const CoverMapSystem& system);

// The Arnold cat map lift, L = [[2,1],[1,1]].
CoverMapSystem make_cat_map();

// Cat map x identity on the third coordinate: a partially hyperbolic example
// with a one-dimensional center.
CoverMapSystem make_ph3();

}  // namespace shadowcover
