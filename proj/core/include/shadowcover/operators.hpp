#pragma once

#include <memory>

#include "shadowcover/cocycle.hpp"
#include "shadowcover/pseudo_orbit.hpp"
#include "shadowcover/sequence.hpp"

namespace shadowcover {

// F(v)_k = f(x_{k-1} + v_{k-1}) - x_k on the flat cover. Entries at indices
// where v vanishes and the tail contract forces a zero jump are exactly zero.
// Throws SupportEscapesWindow if v is supported outside the orbit's stored
// window.
VectorSequence apply_F(const PseudoOrbit& orbit, const VectorSequence& v);

// T(v)_k = A_{k-1} v_{k-1}. Requires supp(v) within [k_lo, k_hi - 1] of the
// cocycle window so every needed A_k exists.
VectorSequence apply_T(const HyperbolicCocycle& cocycle, const VectorSequence& v);

// (Id - T)(v)_k = v_k - A_{k-1} v_{k-1}.
VectorSequence apply_Id_minus_T(const HyperbolicCocycle& cocycle, const VectorSequence& v);

// Window margin beyond which the inverse series tails are guaranteed below
// tail_tol: ceil(log(tail_tol (1-lambda) / (N ||w||)) / log lambda).
long tail_extent(double lambda, double proj_bound, double tail_tol, double w_norm);

// The series inverse of Id - T evaluated on finitely supported input:
//   G(w)_k = pi^s_k w_k + sum_{n<k} A_{k-1}..A_n pi^s_n w_n
//                      - sum_{n>=k} A_k^{-1}..A_n^{-1} pi^u_{n+1} w_{n+1}.
// Both sums are finite here; the output window stops where the geometric
// tails fall below tail_tol (never more than tail_extent indices beyond the
// support of w). Throws CocycleWindowTooSmall when the needed indices exceed
// the cocycle data.
VectorSequence apply_Ginv(const HyperbolicCocycle& cocycle, const VectorSequence& w,
                          double tail_tol);

// Finite section of Id - T on a fixed window with zero boundary conditions at
// both ends, solved as a dense least-squares problem. Independent of the
// series route; the boundary error decays like lambda^pad. The factorization
// is reusable across right-hand sides on the same window.
class DenseSection {
 public:
  DenseSection(const HyperbolicCocycle& cocycle, long lo, long hi);
  ~DenseSection();
  DenseSection(DenseSection&&) noexcept;
  DenseSection& operator=(DenseSection&&) noexcept;

  VectorSequence solve(const VectorSequence& w) const;
  double condition() const;
  long lo() const;
  long hi() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot dense oracle: section on [w.lo - pad, w.hi + pad]. If `condition`
// is non-null the section's condition estimate is written there.
VectorSequence dense_solve(const HyperbolicCocycle& cocycle, const VectorSequence& w, long pad,
                           double* condition = nullptr);

// G(v) = (Id - T)^{-1} (F - T)(v).
VectorSequence apply_G(const PseudoOrbit& orbit, const HyperbolicCocycle& cocycle,
                       const VectorSequence& v, double tail_tol);

// sup_k |F(v)_k - v_k|; zero exactly at fixed points of F.
double residual_F(const PseudoOrbit& orbit, const VectorSequence& v);

// (Id - T)(G(w)) - w for a cocycle with a center direction; equals
// -pi^c(w) pointwise.
VectorSequence ph_defect(const HyperbolicCocycle& cocycle, const VectorSequence& w,
                         double tail_tol = 1e-12);

}  // namespace shadowcover
