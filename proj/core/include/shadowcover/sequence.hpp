#pragma once

#include <vector>

#include "shadowcover/types.hpp"

namespace shadowcover {

// Finitely supported bilateral sequence of tangent vectors with the sup norm.
// Entries outside the stored window are implicitly zero; the representation is
// canonical (boundary entries that are exactly zero are trimmed, so the zero
// sequence has an empty window).
class VectorSequence {
 public:
  VectorSequence() = default;

  static VectorSequence zero(int dim) {
    VectorSequence v;
    v.dim_ = dim;
    return v;
  }

  // Takes ownership of the values on window [k_lo, k_lo + values.size() - 1]
  // and trims exactly-zero boundary entries.
  VectorSequence(long k_lo, std::vector<Vec> values);

  bool empty() const { return values_.empty(); }
  long k_lo() const { return k_lo_; }
  long k_hi() const { return k_lo_ + static_cast<long>(values_.size()) - 1; }
  long window_size() const { return static_cast<long>(values_.size()); }
  int dim() const { return dim_; }

  bool in_window(long k) const { return !empty() && k >= k_lo() && k <= k_hi(); }

  // Entry at index k, zero outside the window.
  Vec at(long k) const;
  const Vec& stored(long k) const { return values_[static_cast<std::size_t>(k - k_lo_)]; }

  double sup_norm() const;

  bool operator==(const VectorSequence& other) const;

 private:
  long k_lo_ = 0;
  std::vector<Vec> values_;
  int dim_ = 0;
};

double sup_norm(const VectorSequence& v);

// Pointwise alpha * a + beta * b on the union window.
VectorSequence combine(const VectorSequence& a, const VectorSequence& b, double alpha,
                       double beta);

// result_k = v_{k-s}.
VectorSequence shift(const VectorSequence& v, long s);

}  // namespace shadowcover
