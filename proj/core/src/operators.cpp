#include "shadowcover/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "shadowcover/errors.hpp"

namespace shadowcover {

namespace {

void require_support(const VectorSequence& v, long lo, long hi, const char* what) {
  if (v.empty()) return;
  if (v.k_lo() < lo || v.k_hi() > hi) {
    throw SupportEscapesWindow(std::string(what) + ": support [" + std::to_string(v.k_lo()) +
                               ", " + std::to_string(v.k_hi()) + "] not inside [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

// f(x + v) - f(x) without the catastrophic cancellation of forming f at two
// nearby astronomically large cover points: the linear part acts on v alone,
// and each periodic term uses sin(a+d) - sin(a) = 2 cos(a + d/2) sin(d/2).
Vec map_increment(const CoverMapSystem& sys, const CoverPoint& x, const Vec& v) {
  Vec out = sys.linear_part * v;
  if (!sys.is_linear()) {
    for (const PerturbationTerm& t : sys.phi) {
      double a = 2.0 * std::numbers::pi * t.frequency.cast<double>().dot(x);
      double d = 2.0 * std::numbers::pi * t.frequency.cast<double>().dot(v);
      out += sys.eps * t.amplitude * (2.0 * std::cos(a + 0.5 * d) * std::sin(0.5 * d));
    }
  }
  return out;
}

}  // namespace

VectorSequence apply_F(const PseudoOrbit& orbit, const VectorSequence& v) {
  require_support(v, orbit.stored_lo(), orbit.stored_hi(), "apply_F");
  int n = orbit.system().dim;
  if (!v.empty() && v.dim() != n) throw DimensionMismatch("apply_F: vector dimension");

  // F(v)_k = e_k + [f(x_{k-1} + v_{k-1}) - f(x_{k-1})]; the jump e_k is zero
  // outside the core window by the tail contract, so entries untouched by v
  // vanish exactly.
  VectorSequence errors = pseudo_orbit_errors(orbit);
  if (v.empty()) return errors;

  long err_lo = orbit.k_lo() + 1, err_hi = orbit.k_hi();
  long lo = std::min(err_lo, v.k_lo() + 1);
  long hi = std::max(err_hi, v.k_hi() + 1);
  std::vector<Vec> vals;
  vals.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long k = lo; k <= hi; ++k) {
    Vec val = errors.at(k);
    if (v.in_window(k - 1)) {
      val += map_increment(orbit.system(), orbit.point_at(k - 1), v.stored(k - 1));
    }
    vals.push_back(std::move(val));
  }
  return VectorSequence(lo, std::move(vals));
}

VectorSequence apply_T(const HyperbolicCocycle& cocycle, const VectorSequence& v) {
  require_support(v, cocycle.k_lo, cocycle.k_hi - 1, "apply_T");
  if (v.empty()) return VectorSequence::zero(cocycle.dim);
  std::vector<Vec> vals;
  vals.reserve(static_cast<std::size_t>(v.window_size()));
  for (long k = v.k_lo(); k <= v.k_hi(); ++k) vals.push_back(cocycle.A_at(k) * v.stored(k));
  return VectorSequence(v.k_lo() + 1, std::move(vals));
}

VectorSequence apply_Id_minus_T(const HyperbolicCocycle& cocycle, const VectorSequence& v) {
  return combine(v, apply_T(cocycle, v), 1.0, -1.0);
}

long tail_extent(double lambda, double proj_bound, double tail_tol, double w_norm) {
  if (!(w_norm > 0.0)) return 0;
  double target = tail_tol * (1.0 - lambda) / (proj_bound * w_norm);
  if (target >= 1.0) return 0;
  return static_cast<long>(std::ceil(std::log(target) / std::log(lambda)));
}

VectorSequence apply_Ginv(const HyperbolicCocycle& cocycle, const VectorSequence& w,
                          double tail_tol) {
  if (!(tail_tol > 0.0)) throw InvalidArgument("tail_tol must be positive");
  if (w.empty()) return VectorSequence::zero(cocycle.dim);
  require_support(w, cocycle.k_lo, cocycle.k_hi, "apply_Ginv");

  long m = tail_extent(cocycle.lambda, cocycle.proj_bound, tail_tol, w.sup_norm());

  // Stable sweep: P_k = pi^s_k(w_k + A_{k-1} P_{k-1}). The re-projection is
  // the identity on the exact iterates (A maps stable to stable) but wipes
  // the unstable roundoff that the forward recurrence would otherwise
  // amplify. Beyond the support the norm contracts by lambda per step, so the
  // sweep stops once it drops below tail_tol, never later than m indices out.
  std::vector<Vec> stable_part;
  long p_hi = w.k_lo() - 1;  // last index with a stored stable value
  {
    Vec p = Vec::Zero(cocycle.dim);
    long k = w.k_lo();
    while (true) {
      Vec input = w.at(k) + (k == w.k_lo() ? Vec::Zero(cocycle.dim) : Vec(cocycle.A_at(k - 1) * p));
      p = cocycle.splitting(k).proj_s * input;
      stable_part.push_back(p);
      p_hi = k;
      if (k >= w.k_hi() && (p.norm() < tail_tol || k - w.k_hi() >= m)) break;
      if (k >= cocycle.k_hi) {
        if (p.norm() >= tail_tol) {
          throw CocycleWindowTooSmall("stable tail still " + std::to_string(p.norm()) +
                                      " at the cocycle edge " + std::to_string(k));
        }
        break;
      }
      ++k;
    }
  }

  // Unstable sweep, run backward with the symmetric re-projection onto the
  // unstable bundle.
  std::vector<Vec> unstable_part;  // stored from high k down
  long u_lo = w.k_hi() + 1;
  {
    Vec u = Vec::Zero(cocycle.dim);
    long k = w.k_hi() - 1;
    while (true) {
      // w is inside the cocycle window, so k < k_lo implies the sweep already
      // covered all of w and is in the pure-tail regime.
      if (k < cocycle.k_lo) {
        if (u.norm() >= tail_tol) {
          throw CocycleWindowTooSmall("unstable tail still " + std::to_string(u.norm()) +
                                      " at the cocycle edge " + std::to_string(k + 1));
        }
        break;
      }
      Vec input = cocycle.splitting(k + 1).proj_u * w.at(k + 1) + u;
      u = cocycle.splitting(k).proj_u * (cocycle.A_inv_at(k) * input);
      unstable_part.push_back(u);
      u_lo = k;
      if (k <= w.k_lo() && (u.norm() < tail_tol || w.k_lo() - k >= m)) break;
      --k;
    }
  }

  long lo = std::min(u_lo, w.k_lo());
  long hi = std::max(p_hi, w.k_hi());
  std::vector<Vec> vals;
  vals.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long k = lo; k <= hi; ++k) {
    Vec entry = Vec::Zero(cocycle.dim);
    if (k >= w.k_lo() && k <= p_hi) entry += stable_part[static_cast<std::size_t>(k - w.k_lo())];
    if (k >= u_lo && k <= w.k_hi() - 1)
      entry -= unstable_part[static_cast<std::size_t>(w.k_hi() - 1 - k)];
    vals.push_back(std::move(entry));
  }
  return VectorSequence(lo, std::move(vals));
}

struct DenseSection::Impl {
  long lo, hi;
  int dim;
  Mat M;
  Eigen::ColPivHouseholderQR<Mat> qr;
  double condition;
};

DenseSection::DenseSection(const HyperbolicCocycle& cocycle, long lo, long hi)
    : impl_(std::make_unique<Impl>()) {
  if (lo > hi) throw InvalidArgument("dense section window is empty");
  if (lo < cocycle.k_lo || hi > cocycle.k_hi - 1) {
    throw CocycleWindowTooSmall("dense section [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "] needs A_k data beyond the cocycle window");
  }
  impl_->lo = lo;
  impl_->hi = hi;
  impl_->dim = cocycle.dim;
  long blocks = hi - lo + 1;
  long n = cocycle.dim;
  // Rows k = lo .. hi+1 of (Id - T) with v_{lo-1} = v_{hi+1} = 0; one block
  // row more than unknowns, solved in the least-squares sense.
  Mat M = Mat::Zero((blocks + 1) * n, blocks * n);
  for (long k = lo; k <= hi; ++k) {
    M.block((k - lo) * n, (k - lo) * n, n, n) = Mat::Identity(n, n);
    if (k > lo) M.block((k - lo) * n, (k - lo - 1) * n, n, n) = -cocycle.A_at(k - 1);
  }
  M.block(blocks * n, (blocks - 1) * n, n, n) = -cocycle.A_at(hi);
  impl_->qr.compute(M);
  impl_->M = std::move(M);
  Vec diag = impl_->qr.matrixR().diagonal().cwiseAbs();
  double dmin = diag.minCoeff(), dmax = diag.maxCoeff();
  impl_->condition = dmin > 0 ? dmax / dmin : std::numeric_limits<double>::infinity();
  if (impl_->qr.rank() < blocks * n || impl_->condition > 1e14) {
    throw SingularSystem("finite section of Id - T is numerically singular");
  }
}

DenseSection::~DenseSection() = default;
DenseSection::DenseSection(DenseSection&&) noexcept = default;
DenseSection& DenseSection::operator=(DenseSection&&) noexcept = default;

double DenseSection::condition() const { return impl_->condition; }
long DenseSection::lo() const { return impl_->lo; }
long DenseSection::hi() const { return impl_->hi; }

VectorSequence DenseSection::solve(const VectorSequence& w) const {
  require_support(w, impl_->lo, impl_->hi, "DenseSection::solve");
  long blocks = impl_->hi - impl_->lo + 1;
  int n = impl_->dim;
  Vec rhs = Vec::Zero((blocks + 1) * n);
  for (long k = std::max(impl_->lo, w.k_lo()); k <= std::min(impl_->hi + 1, w.k_hi()); ++k) {
    rhs.segment((k - impl_->lo) * n, n) = w.at(k);
  }
  Vec x = impl_->qr.solve(rhs);
  // One step of iterative refinement keeps the least-squares error near eps
  // even on wide sections.
  x += impl_->qr.solve(Vec(rhs - impl_->M * x));
  std::vector<Vec> vals;
  vals.reserve(static_cast<std::size_t>(blocks));
  for (long b = 0; b < blocks; ++b) vals.push_back(x.segment(b * n, n));
  return VectorSequence(impl_->lo, std::move(vals));
}

VectorSequence dense_solve(const HyperbolicCocycle& cocycle, const VectorSequence& w, long pad,
                           double* condition) {
  if (pad < 0) throw InvalidArgument("dense_solve pad must be nonnegative");
  if (w.empty()) {
    if (condition) *condition = 1.0;
    return VectorSequence::zero(cocycle.dim);
  }
  DenseSection section(cocycle, w.k_lo() - pad, w.k_hi() + pad);
  if (condition) *condition = section.condition();
  return section.solve(w);
}

VectorSequence apply_G(const PseudoOrbit& orbit, const HyperbolicCocycle& cocycle,
                       const VectorSequence& v, double tail_tol) {
  VectorSequence w = combine(apply_F(orbit, v), apply_T(cocycle, v), 1.0, -1.0);
  return apply_Ginv(cocycle, w, tail_tol);
}

double residual_F(const PseudoOrbit& orbit, const VectorSequence& v) {
  return combine(apply_F(orbit, v), v, 1.0, -1.0).sup_norm();
}

VectorSequence ph_defect(const HyperbolicCocycle& cocycle, const VectorSequence& w,
                         double tail_tol) {
  if (!cocycle.has_center()) {
    throw NoCenterDirection("cocycle has no center projections");
  }
  VectorSequence g = apply_Ginv(cocycle, w, tail_tol);
  return combine(apply_Id_minus_T(cocycle, g), w, 1.0, -1.0);
}

}  // namespace shadowcover
