#include "shadowcover/cocycle.hpp"

#include <algorithm>
#include <string>

#include "shadowcover/errors.hpp"
#include "shadowcover/rng.hpp"

namespace shadowcover {

namespace {

double operator_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

// Transport built from matched splitting frames: decompose at the source,
// rebuild with the same coefficients at the target, then rescale so the
// adapted operator norm does not exceed 1.
Mat matched_basis_transport(const Splitting& from, const Splitting& to, const Mat& Q,
                            const Mat& Qinv) {
  int n = static_cast<int>(from.proj_s.rows());
  Mat basis_from(n, n), basis_to(n, n);
  basis_from << from.stable, from.unstable, from.center;
  basis_to << to.stable, to.unstable, to.center;
  Mat raw = basis_to * basis_from.inverse();
  double norm = operator_norm(Q * raw * Qinv);
  double c = std::min(1.0, 1.0 / norm);
  return c * raw;
}

}  // namespace

std::size_t HyperbolicCocycle::index(long k, long lo, long hi) {
  if (k < lo || k > hi) {
    throw CocycleWindowTooSmall("index " + std::to_string(k) + " outside cocycle window [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<std::size_t>(k - lo);
}

HyperbolicCocycle build_cocycle(const CoverMapSystem& system, const PseudoOrbit& orbit) {
  HyperbolicCocycle c;
  c.dim = system.dim;
  c.k_lo = orbit.stored_lo();
  c.k_hi = orbit.stored_hi();
  c.lambda = system.lambda;
  c.proj_bound = system.proj_bound;
  c.to_adapted = system.to_adapted;
  c.from_adapted = system.from_adapted;
  c.transport_rule = system.is_linear() ? "identity" : "matched-basis-rescaled";

  long count = c.size();
  c.splittings.reserve(static_cast<std::size_t>(count));
  for (long k = c.k_lo; k <= c.k_hi; ++k) c.splittings.push_back(system.splitting_at(orbit.at(k)));

  if (count < 2) return c;  // single point: no transports, empty A list

  c.I.reserve(static_cast<std::size_t>(count - 1));
  c.A.reserve(static_cast<std::size_t>(count - 1));
  c.A_inv.reserve(static_cast<std::size_t>(count - 1));
  Mat id = Mat::Identity(c.dim, c.dim);
  for (long k = c.k_lo + 1; k <= c.k_hi; ++k) {
    if (system.is_linear()) {
      c.I.push_back(id);
    } else {
      Splitting at_image = system.splitting_at(system.apply(orbit.at(k - 1)));
      c.I.push_back(matched_basis_transport(at_image, c.splitting(k), c.to_adapted,
                                            c.from_adapted));
    }
  }
  for (long k = c.k_lo; k < c.k_hi; ++k) {
    Mat a = c.I_at(k + 1) * system.derivative(orbit.at(k));
    c.A.push_back(a);
    c.A_inv.push_back(a.inverse());
  }
  return c;
}

CocycleDiagnostics check_cocycle(const HyperbolicCocycle& cocycle, const CoverMapSystem& system,
                                 const PseudoOrbit& orbit, int vectors_per_index,
                                 std::uint64_t seed) {
  CocycleDiagnostics d;
  const Mat& Q = cocycle.to_adapted;
  const Mat& Qi = cocycle.from_adapted;
  CounterRng rng(seed);
  std::uint64_t counter = 0;

  for (long k = cocycle.k_lo + 1; k <= cocycle.k_hi; ++k) {
    const Mat& I = cocycle.I_at(k);
    d.transport_norm_excess = std::max(d.transport_norm_excess, operator_norm(Q * I * Qi) - 1.0);
    Splitting source = system.splitting_at(system.apply(orbit.at(k - 1)));
    const Splitting& target = cocycle.splitting(k);
    d.bundle_mixing = std::max({d.bundle_mixing, operator_norm(target.proj_u * I * source.proj_s),
                                operator_norm(target.proj_s * I * source.proj_u)});
  }

  for (long k = cocycle.k_lo; k < cocycle.k_hi; ++k) {
    const Mat& A = cocycle.A_at(k);
    d.construction_defect =
        std::max(d.construction_defect,
                 (A - cocycle.I_at(k + 1) * system.derivative(orbit.at(k))).cwiseAbs().maxCoeff());
    const Splitting& here = cocycle.splitting(k);
    const Splitting& next = cocycle.splitting(k + 1);
    for (int t = 0; t < vectors_per_index; ++t) {
      Vec cs = rng.in_ball(static_cast<int>(here.stable.cols()), 1.0, counter++);
      Vec v = here.stable * cs;
      if ((Q * v).norm() > 0) {
        d.stable_factor = std::max(d.stable_factor, (Q * (A * v)).norm() / (Q * v).norm());
      }
      Vec cu = rng.in_ball(static_cast<int>(next.unstable.cols()), 1.0, counter++);
      Vec w = next.unstable * cu;
      if ((Q * w).norm() > 0) {
        d.unstable_factor =
            std::max(d.unstable_factor, (Q * (cocycle.A_inv_at(k) * w)).norm() / (Q * w).norm());
      }
    }
  }
  return d;
}

}  // namespace shadowcover
