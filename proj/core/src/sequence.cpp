#include "shadowcover/sequence.hpp"

#include <algorithm>

#include "shadowcover/errors.hpp"

namespace shadowcover {

VectorSequence::VectorSequence(long k_lo, std::vector<Vec> values) : k_lo_(k_lo), values_(std::move(values)) {
  if (!values_.empty()) {
    dim_ = static_cast<int>(values_.front().size());
    for (const Vec& v : values_) {
      if (v.size() != dim_) throw DimensionMismatch("sequence entries have mixed dimensions");
    }
  }
  // Canonical form: strip exact-zero boundary entries only.
  std::size_t lo = 0, hi = values_.size();
  while (lo < hi && values_[lo].isZero(0.0)) ++lo;
  while (hi > lo && values_[hi - 1].isZero(0.0)) --hi;
  if (lo > 0 || hi < values_.size()) {
    std::vector<Vec> trimmed(values_.begin() + static_cast<long>(lo),
                             values_.begin() + static_cast<long>(hi));
    values_ = std::move(trimmed);
    k_lo_ += static_cast<long>(lo);
  }
  if (values_.empty()) k_lo_ = 0;
}

Vec VectorSequence::at(long k) const {
  if (!in_window(k)) return Vec::Zero(dim_);
  return values_[static_cast<std::size_t>(k - k_lo_)];
}

double VectorSequence::sup_norm() const {
  double m = 0.0;
  for (const Vec& v : values_) m = std::max(m, v.norm());
  return m;
}

bool VectorSequence::operator==(const VectorSequence& other) const {
  if (empty() && other.empty()) return true;
  if (empty() != other.empty() || k_lo_ != other.k_lo_ || values_.size() != other.values_.size())
    return false;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != other.values_[i]) return false;
  }
  return true;
}

double sup_norm(const VectorSequence& v) { return v.sup_norm(); }

VectorSequence combine(const VectorSequence& a, const VectorSequence& b, double alpha,
                       double beta) {
  if (a.empty() && b.empty()) return VectorSequence::zero(std::max(a.dim(), b.dim()));
  if (!a.empty() && !b.empty() && a.dim() != b.dim())
    throw DimensionMismatch("combine: operands have different vector dimensions");
  int dim = a.empty() ? b.dim() : a.dim();
  long lo = a.empty() ? b.k_lo() : (b.empty() ? a.k_lo() : std::min(a.k_lo(), b.k_lo()));
  long hi = a.empty() ? b.k_hi() : (b.empty() ? a.k_hi() : std::max(a.k_hi(), b.k_hi()));
  auto get = [dim](const VectorSequence& s, long k) -> Vec {
    return s.in_window(k) ? s.stored(k) : Vec::Zero(dim);
  };
  std::vector<Vec> vals;
  vals.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long k = lo; k <= hi; ++k) vals.push_back(alpha * get(a, k) + beta * get(b, k));
  return VectorSequence(lo, std::move(vals));
}

VectorSequence shift(const VectorSequence& v, long s) {
  if (v.empty()) return v;
  std::vector<Vec> vals;
  vals.reserve(static_cast<std::size_t>(v.window_size()));
  for (long k = v.k_lo(); k <= v.k_hi(); ++k) vals.push_back(v.stored(k));
  return VectorSequence(v.k_lo() + s, std::move(vals));
}

}  // namespace shadowcover
