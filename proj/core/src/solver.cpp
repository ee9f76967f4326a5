#include "shadowcover/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shadowcover/errors.hpp"
#include "shadowcover/rng.hpp"

namespace shadowcover {

namespace {

// min over lattice translates of |v + m|: the downstairs distance between
// pi(x + v) and pi(x).
double wrapped_norm(const Vec& v) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double w = v[i] - std::round(v[i]);
    s += w * w;
  }
  return std::sqrt(s);
}

// Restrict v to [lo, hi]. Entries dropped at the boundary must be below
// `budget`, otherwise the working window is genuinely too small.
VectorSequence clamp_window(const VectorSequence& v, long lo, long hi, double budget) {
  if (v.empty() || (v.k_lo() >= lo && v.k_hi() <= hi)) return v;
  double dropped = 0.0;
  std::vector<Vec> vals;
  for (long k = std::max(lo, v.k_lo()); k <= std::min(hi, v.k_hi()); ++k) vals.push_back(v.at(k));
  for (long k = v.k_lo(); k < lo; ++k) dropped = std::max(dropped, v.at(k).norm());
  for (long k = hi + 1; k <= v.k_hi(); ++k) dropped = std::max(dropped, v.at(k).norm());
  if (dropped > budget) {
    throw CocycleWindowTooSmall("iterate carries weight " + std::to_string(dropped) +
                                " outside the working window");
  }
  return VectorSequence(std::max(lo, v.k_lo()), std::move(vals));
}

// Decay entries |v_k| over [lo, hi]; beyond the support of v the tail vectors
// are continued by bundle-projected propagation, which tracks the true
// geometric decay without the unstable roundoff blow-up of direct iteration.
std::vector<std::pair<long, double>> operator_decay_table(const PseudoOrbit& points,
                                                          const VectorSequence& v, long lo,
                                                          long hi) {
  const CoverMapSystem& sys = points.system();
  std::vector<std::pair<long, double>> table;
  table.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long k = lo; k <= hi; ++k) table.emplace_back(k, 0.0);
  auto set = [&](long k, double d) { table[static_cast<std::size_t>(k - lo)].second = d; };
  if (v.empty()) return table;

  for (long k = std::max(lo, v.k_lo()); k <= std::min(hi, v.k_hi()); ++k) set(k, v.at(k).norm());

  if (v.k_hi() < hi) {
    Vec t = sys.splitting_at(points.point_at(v.k_hi())).proj_s * v.at(v.k_hi());
    for (long k = v.k_hi() + 1; k <= hi; ++k) {
      t = sys.splitting_at(points.point_at(k)).proj_s *
          (sys.derivative(points.point_at(k - 1)) * t);
      set(k, t.norm());
    }
  }
  if (v.k_lo() > lo) {
    Vec t = sys.splitting_at(points.point_at(v.k_lo())).proj_u * v.at(v.k_lo());
    for (long k = v.k_lo() - 1; k >= lo; --k) {
      Mat df = sys.derivative(points.point_at(k));
      t = sys.splitting_at(points.point_at(k)).proj_u * df.partialPivLu().solve(t);
      set(k, t.norm());
    }
  }
  return table;
}

// Least-squares geometric rate of d_k over indices [a, b], regressed against
// the distance from the window. Returns 0 when fewer than two usable points.
double fit_rate(const std::vector<std::pair<long, double>>& table, long lo, long a, long b,
                bool backward) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (long k = a; k <= b; ++k) {
    double d = table[static_cast<std::size_t>(k - lo)].second;
    if (!(d > 1e-300)) continue;
    double x = static_cast<double>(backward ? -k : k);
    double y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return std::exp((n * sxy - sx * sy) / denom);
}

}  // namespace

ShadowingResult solve_fixed_point(const PseudoOrbit& orbit, const SolverConfig& config,
                                  const std::optional<VectorSequence>& initial) {
  if (!(config.tol > 0) || config.max_iter < 1 || !(config.tail_tol > 0)) {
    throw InvalidArgument("solver config out of range");
  }
  const CoverMapSystem& sys = orbit.system();
  VectorSequence errors = pseudo_orbit_errors(orbit);
  double base_norm = std::max(errors.sup_norm(), initial ? initial->sup_norm() : 0.0);
  long pad = tail_extent(sys.lambda, sys.proj_bound, config.tail_tol, base_norm) + 8;

  ShadowingResult result;
  for (int attempt = 0;; ++attempt) {
    try {
      PseudoOrbit ext = orbit.extended(pad);
      HyperbolicCocycle coc = build_cocycle(sys, ext);
      long work_lo = ext.stored_lo(), work_hi = ext.stored_hi() - 1;

      VectorSequence v = initial ? clamp_window(*initial, work_lo, work_hi, 0.0)
                                 : VectorSequence::zero(sys.dim);
      result = ShadowingResult{};
      for (int it = 1; it <= config.max_iter; ++it) {
        VectorSequence next = apply_G(ext, coc, v, config.tail_tol);
        next = clamp_window(next, work_lo, work_hi, 10.0 * config.tail_tol);
        double diff = combine(next, v, 1.0, -1.0).sup_norm();
        v = std::move(next);
        double res = residual_F(ext, v);
        result.residual_history.push_back(res);
        result.iterations = it;
        if (res < config.tol) {
          result.converged = true;
          break;
        }
        // A stalled difference away from a fixed point of F means the window
        // cannot represent the remaining error; report non-convergence.
        if (diff < config.tol) break;
      }
      result.v_star = v;
      result.residual = result.residual_history.empty() ? 0.0 : result.residual_history.back();
      result.z = orbit.point_at(0) + v.at(0);

      long table_pad = std::max(config.verify_window_pad, 0L);
      PseudoOrbit table_points = orbit.extended(std::max(pad, table_pad));
      result.decay = operator_decay_table(table_points, v, orbit.k_lo() - table_pad,
                                          orbit.k_hi() + table_pad);
      return result;
    } catch (const CocycleWindowTooSmall&) {
      if (attempt >= 2) throw;
      pad *= 2;
    }
  }
}

CoverPoint solve_product(const PseudoOrbit& orbit) {
  const CoverMapSystem& sys = orbit.system();
  if (!sys.is_linear()) throw NotLinear("product construction needs a linear system");

  // Scalar block powers of the linear part in adapted coordinates; exponent e
  // applies f^e to a block coordinate pair.
  auto block_power = [&](const EigenBlock& b, Vec& coords, long e) {
    if (b.indices.size() == 1) {
      double factor = std::pow(b.modulus, static_cast<double>(e));
      if (b.angle != 0.0 && (e % 2 != 0)) factor = -factor;  // negative real eigenvalue
      coords[b.indices[0]] *= factor;
    } else {
      double r = std::pow(b.modulus, static_cast<double>(e));
      double c = std::cos(b.angle * static_cast<double>(e));
      double s = std::sin(b.angle * static_cast<double>(e));
      double a = coords[b.indices[0]], bb = coords[b.indices[1]];
      coords[b.indices[0]] = r * (c * a + s * bb);
      coords[b.indices[1]] = r * (-s * a + c * bb);
    }
  };

  for (const EigenBlock& b : sys.blocks) {
    if (b.kind == EigenBlock::Center) {
      throw NotProductDecomposable("center direction: stable and unstable leaves do not span");
    }
  }

  // Time-0 representatives of the two tail orbits.
  Vec c1 = sys.to_adapted * orbit.at(orbit.k_lo());
  Vec c2 = sys.to_adapted * orbit.at(orbit.k_hi());
  for (const EigenBlock& b : sys.blocks) {
    block_power(b, c1, -orbit.k_lo());
    block_power(b, c2, -orbit.k_hi());
  }
  // z agrees with the backward representative on stable coordinates and with
  // the forward one on unstable coordinates.
  Vec zc(sys.dim);
  for (const EigenBlock& b : sys.blocks) {
    const Vec& src = b.kind == EigenBlock::Stable ? c1 : c2;
    for (int idx : b.indices) zc[idx] = src[idx];
  }
  return sys.from_adapted * zc;
}

DecayReport verify_shadowing(const PseudoOrbit& orbit, const CoverPoint& z, long pad) {
  if (pad < 0) throw InvalidArgument("verify pad must be nonnegative");
  PseudoOrbit ext = orbit.extended(pad);
  long lo = orbit.k_lo() - pad, hi = orbit.k_hi() + pad;

  DecayReport report;
  report.distances.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long k = lo; k <= hi; ++k) report.distances.emplace_back(k, 0.0);
  auto set = [&](long k, double d) {
    report.distances[static_cast<std::size_t>(k - lo)].second = d;
  };

  const CoverMapSystem& sys = orbit.system();
  CoverPoint w = z;
  for (long k = 0; k <= hi; ++k) {
    if (k > 0) w = sys.iterate(w, 1);
    if (k >= lo) set(k, (w - ext.point_at(k)).norm());
  }
  w = z;
  for (long k = -1; k >= lo; --k) {
    w = sys.iterate(w, -1);
    if (k <= hi) set(k, (w - ext.point_at(k)).norm());
  }

  for (long k = orbit.k_lo(); k <= orbit.k_hi(); ++k) {
    report.max_interior =
        std::max(report.max_interior, report.distances[static_cast<std::size_t>(k - lo)].second);
  }
  long half = (pad + 1) / 2;
  report.rate_forward = fit_rate(report.distances, lo, orbit.k_hi() + half, hi, false);
  report.rate_backward = fit_rate(report.distances, lo, lo, orbit.k_lo() - half, true);
  report.tails_decrease = report.rate_forward < 1.0 && report.rate_backward < 1.0;
  return report;
}

LiftSolveOutcome lift_and_solve(const std::vector<TorusPoint>& torus_orbit,
                                const CoverMapSystem& system, const CoverPoint& seed,
                                const SolverConfig& config, long k_lo) {
  if (!system.lattice_compatible()) {
    throw InvalidArgument("system linear part is not an integer matrix; it does not descend");
  }
  CoveringChart chart(system.dim);
  std::vector<CoverPoint> lifted = chart.lift_pseudo_orbit(torus_orbit, system, seed);
  PseudoOrbit orbit(system, k_lo, std::move(lifted));

  LiftSolveOutcome out;
  out.upstairs = solve_fixed_point(orbit, config);
  out.z_torus = chart.project(out.upstairs.z);
  out.downstairs_decay.reserve(out.upstairs.decay.size());
  for (const auto& [k, d] : out.upstairs.decay) {
    double down = out.upstairs.v_star.in_window(k) ? wrapped_norm(out.upstairs.v_star.at(k)) : d;
    out.downstairs_decay.emplace_back(k, std::min(down, d));
  }
  return out;
}

UniquenessReport uniqueness_probe(const PseudoOrbit& orbit, const SolverConfig& config, int trials,
                                  std::uint64_t seed) {
  if (trials < 2) throw InvalidArgument("uniqueness probe needs at least two trials");
  CounterRng rng(seed);
  UniquenessReport report;
  report.trials = trials;
  std::vector<CoverPoint> zs;
  for (int t = 0; t < trials; ++t) {
    std::vector<Vec> vals;
    for (long k = orbit.k_lo(); k <= orbit.k_hi(); ++k) {
      std::uint64_t counter =
          static_cast<std::uint64_t>(t) * 1000003ULL + static_cast<std::uint64_t>(k - orbit.k_lo());
      vals.push_back(rng.in_ball(orbit.system().dim, 0.01, counter));
    }
    VectorSequence v0(orbit.k_lo(), std::move(vals));
    ShadowingResult r = solve_fixed_point(orbit, config, v0);
    report.trial_converged.push_back(r.converged);
    if (r.converged) zs.push_back(r.z);
  }
  for (std::size_t i = 0; i < zs.size(); ++i) {
    for (std::size_t j = i + 1; j < zs.size(); ++j) {
      report.max_spread = std::max(report.max_spread, (zs[i] - zs[j]).norm());
    }
  }
  return report;
}

}  // namespace shadowcover
