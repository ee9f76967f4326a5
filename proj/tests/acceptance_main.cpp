// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Covers the operator identities, the two solution routes, the contraction
// regime, the partially hyperbolic defect, the lifting pipeline, and the CLI
// contract, each at its stated tolerance.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "orbit_io.hpp"
#include "shadowcover/cocycle.hpp"
#include "shadowcover/covering.hpp"
#include "shadowcover/errors.hpp"
#include "shadowcover/generators.hpp"
#include "shadowcover/operators.hpp"
#include "shadowcover/rng.hpp"
#include "shadowcover/solver.hpp"

using namespace shadowcover;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

VectorSequence random_window(const CounterRng& rng, int dim, long lo, long hi, double radius,
                             std::uint64_t base) {
  std::vector<Vec> vals;
  for (long k = lo; k <= hi; ++k) {
    vals.push_back(rng.in_ball(dim, radius, base + static_cast<std::uint64_t>(k - lo)));
  }
  return VectorSequence(lo, std::move(vals));
}

double diff_norm(const VectorSequence& a, const VectorSequence& b) {
  return combine(a, b, 1.0, -1.0).sup_norm();
}

struct Outcome {
  bool pass;
  std::string detail;
};

// Shared fixed-point-anchored cat bench wide enough for the pad-180 dense
// section.
struct CatBench {
  CoverMapSystem sys = make_cat_map();
  PseudoOrbit orbit = gen_exact(sys, v2(0, 0), -240, 240);
  HyperbolicCocycle coc = build_cocycle(sys, orbit);
  std::vector<VectorSequence> inputs;  // the 200 shared random inputs

  CatBench() {
    CounterRng rng(20240001);
    for (int i = 0; i < 200; ++i) {
      inputs.push_back(random_window(rng, 2, -30, 30, 1.0, static_cast<std::uint64_t>(i) * 4096));
    }
  }
};

const CatBench& bench() {
  static const CatBench b;
  return b;
}

Outcome criterion_operator_inverse() {
  const CatBench& b = bench();
  CounterRng rng(555);
  double worst_fwd = 0.0, worst_bwd = 0.0;
  for (int i = 0; i < 200; ++i) {
    const VectorSequence& w = b.inputs[static_cast<std::size_t>(i)];
    VectorSequence g = apply_Ginv(b.coc, w, 1e-14);
    worst_fwd = std::max(worst_fwd, diff_norm(apply_Id_minus_T(b.coc, g), w));
    VectorSequence v = random_window(rng, 2, -30, 30, 1.0, static_cast<std::uint64_t>(i) * 512);
    worst_bwd = std::max(worst_bwd, diff_norm(apply_Ginv(b.coc, apply_Id_minus_T(b.coc, v), 1e-14), v));
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max fwd %.2e, max bwd %.2e (tol 1e-10)", worst_fwd, worst_bwd);
  return {worst_fwd < 1e-10 && worst_bwd < 1e-10, buf};
}

Outcome criterion_oracle_equivalence() {
  const CatBench& b = bench();
  DenseSection section(b.coc, -210, 210);  // pad 180 around the [-30, 30] support
  double worst = 0.0;
  for (const VectorSequence& w : b.inputs) {
    worst = std::max(worst, diff_norm(apply_Ginv(b.coc, w, 1e-14), section.solve(w)));
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max deviation %.2e (tol 1e-12, pad 180)", worst);
  return {worst < 1e-12, buf};
}

Outcome criterion_transport_identity() {
  const CatBench& b = bench();
  double worst = 0.0;
  for (const VectorSequence& v : b.inputs) {
    VectorSequence g = apply_Ginv(b.coc, v, 1e-14);
    for (long k = g.k_lo() - 1; k <= g.k_hi(); ++k) {
      Vec defect = b.coc.A_at(k) * g.at(k) - g.at(k + 1) + v.at(k + 1);
      worst = std::max(worst, defect.norm());
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max pointwise defect %.2e (tol 1e-12)", worst);
  return {worst < 1e-12, buf};
}

Outcome criterion_norm_bound() {
  const CatBench& b = bench();
  const double bound = std::sqrt(5.0);
  CounterRng rng(777);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    VectorSequence w = random_window(rng, 2, -30, 30, 1.0, static_cast<std::uint64_t>(i) * 128);
    double s = w.sup_norm();
    if (s == 0.0) continue;
    VectorSequence unit = combine(w, VectorSequence::zero(2), 1.0 / s, 0.0);
    worst = std::max(worst, apply_Ginv(b.coc, unit, 1e-12).sup_norm());
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "sup ||G(w)|| = %.10f on 1000 unit inputs (bound sqrt5 + 1e-9)",
                worst);
  return {worst <= bound + 1e-9, buf};
}

Outcome criterion_bijection() {
  CoverMapSystem cat = make_cat_map();
  CounterRng rng(999);
  double worst_forward = 0.0, worst_reverse = 0.0;
  int solved = 0;
  // Orbit window [-8, 8]; the difference sequence is continued to [-22, 22]
  // so that the entries chopped by the finite representation are already
  // below the tolerance. Point scale and noise are kept small enough that
  // direct iteration stays accurate over those 22 steps.
  const long W = 8, R = 22;
  for (int i = 0; i < 50; ++i) {
    CoverPoint p = v2(1e-4, 2e-4) + 1e-4 * rng.in_ball(2, 1.0, 10 * i);
    PseudoOrbit orbit =
        (i % 2 == 0)
            ? gen_spliced(cat, p, p + 2e-5 * rng.unit(2, 10 * i + 1), -W, W)
            : gen_noisy(cat, p, -W, W, 1e-5, 4000 + static_cast<std::uint64_t>(i));
    ShadowingResult r = solve_fixed_point(orbit);
    if (!r.converged) return {false, "a solve failed to converge"};
    ++solved;

    // Forward: d(f^k(z), x_k) = |v*_k| on the window, tracking z dynamically.
    const CoverMapSystem& sys = orbit.system();
    Vec w = r.z - orbit.point_at(0);
    std::vector<Vec> diffs(static_cast<std::size_t>(2 * R + 1));
    diffs[static_cast<std::size_t>(R)] = w;
    for (long k = 1; k <= R; ++k) {
      w = sys.apply(orbit.point_at(k - 1) + w) - orbit.point_at(k);
      diffs[static_cast<std::size_t>(k + R)] = w;
    }
    w = r.z - orbit.point_at(0);
    for (long k = -1; k >= -R; --k) {
      w = sys.apply_inverse(orbit.point_at(k + 1) + w) - orbit.point_at(k);
      diffs[static_cast<std::size_t>(k + R)] = w;
    }
    for (long k = -W; k <= W; ++k) {
      double d = diffs[static_cast<std::size_t>(k + R)].norm();
      worst_forward = std::max(worst_forward, std::abs(d - r.v_star.at(k).norm()));
    }
    // Reverse: the difference sequence of the shadowing point is a fixed
    // point of F.
    VectorSequence vseq(-R, std::move(diffs));
    worst_reverse = std::max(worst_reverse, residual_F(orbit.extended(R - W), vseq));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d orbits: max |d - |v*|| %.2e, max residual %.2e (tol 1e-9)",
                solved, worst_forward, worst_reverse);
  return {worst_forward < 1e-9 && worst_reverse < 1e-9, buf};
}

Outcome criterion_linear_constancy() {
  Mat shear(2, 2);
  shear << 0, 1, -1, 3;
  std::vector<CoverMapSystem> systems{make_cat_map(), make_linear_system(shear)};
  CounterRng rng(1313);
  int orbits = 0;
  double worst_spread = 0.0;
  for (const CoverMapSystem& sys : systems) {
    for (int i = 0; i < 6; ++i) {
      CoverPoint p = 0.5 * rng.in_ball(2, 1.0, 100 + 10 * i) + v2(0.4, 0.4);
      PseudoOrbit orbit =
          (i % 3 == 0)   ? gen_exact(sys, p, -10, 10)
          : (i % 3 == 1) ? gen_spliced(sys, p, p + 0.02 * rng.unit(2, 200 + i), -10, 10)
                         : gen_noisy(sys, p, -10, 10, 1e-3, 300 + static_cast<std::uint64_t>(i));
      ShadowingResult r = solve_fixed_point(orbit);
      if (!r.converged || r.iterations != 1) {
        return {false, "a linear solve took " + std::to_string(r.iterations) + " iterations"};
      }
      ++orbits;
      if (i % 2 == 0) {
        UniquenessReport rep = uniqueness_probe(orbit, SolverConfig{}, 4, 17 + i);
        worst_spread = std::max(worst_spread, rep.max_spread);
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d orbits, all 1 iteration; probe spread %.2e (tol 1e-12)",
                orbits, worst_spread);
  return {worst_spread < 1e-12, buf};
}

Outcome criterion_product_cross_check() {
  Mat shear(2, 2);
  shear << 0, 1, -1, 3;
  std::vector<CoverMapSystem> systems{make_cat_map(), make_linear_system(shear)};
  CounterRng rng(1717);
  double worst_agree = 0.0, worst_rate = 0.0;
  int count = 0;
  for (int i = 0; i < 50; ++i) {
    const CoverMapSystem& sys = systems[static_cast<std::size_t>(i % 2)];
    CoverPoint p = 0.1 * rng.in_ball(2, 1.0, 20 * i);
    // Jump with components bounded away from zero in both leaves, so both
    // decay tails carry signal above the roundoff floor.
    auto coeff = [&](std::uint64_t c) {
      double u = rng.uniform01(c);
      return (u < 0.5 ? -1.0 : 1.0) * (0.5 + std::fmod(2.0 * u, 1.0) * 0.5);
    };
    Vec jump = 0.05 * (coeff(20 * i + 1) * sys.linear_splitting.stable.col(0) +
                       coeff(20 * i + 2) * sys.linear_splitting.unstable.col(0));
    CoverPoint q = p + jump;
    PseudoOrbit orbit = gen_spliced(sys, p, q, -5, 5);
    ShadowingResult r = solve_fixed_point(orbit);
    if (!r.converged) return {false, "a spliced solve failed"};
    CoverPoint z = solve_product(orbit);
    worst_agree = std::max(worst_agree, (r.z - z).norm());

    DecayReport rep = verify_shadowing(orbit, z, 10);
    worst_rate = std::max({worst_rate, std::abs(rep.rate_forward / sys.lambda - 1.0),
                           std::abs(rep.rate_backward / sys.lambda - 1.0)});
    ++count;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d orbits: max route deviation %.2e (tol 1e-10), max rate error %.1f%% (tol 10%%)",
                count, worst_agree, 100.0 * worst_rate);
  return {worst_agree < 1e-10 && worst_rate < 0.10, buf};
}

Outcome criterion_contraction_regime() {
  io::SystemSpec spec = io::parse_system_spec("perturbed:0.01");
  CoverMapSystem sys = spec.build();
  CounterRng rng(2121);
  int max_iterations = 0;
  double worst_residual = 0.0, worst_ratio = 0.0;
  for (int i = 0; i < 20; ++i) {
    CoverPoint p = v2(0.5, 0.5) + 0.4 * rng.in_ball(2, 1.0, 30 * i);
    PseudoOrbit orbit = gen_noisy(sys, p, -10, 10, 1e-3, 5000 + static_cast<std::uint64_t>(i));
    ShadowingResult r = solve_fixed_point(orbit);
    if (!r.converged) return {false, "orbit " + std::to_string(i) + " did not converge"};
    max_iterations = std::max(max_iterations, r.iterations);
    worst_residual = std::max(worst_residual, r.residual);

    if (i < 3) {
      PseudoOrbit ext = orbit.extended(60);
      HyperbolicCocycle coc = build_cocycle(sys, ext);
      for (int t = 0; t < 5; ++t) {
        std::uint64_t base = static_cast<std::uint64_t>(1000 * i + 100 * t);
        VectorSequence a = random_window(rng, 2, -10, 10, 0.01, base);
        VectorSequence d = random_window(rng, 2, -10, 10, 0.005, base + 50);
        VectorSequence b2 = combine(a, d, 1.0, 1.0);
        double dist = diff_norm(a, b2);
        if (dist == 0.0) continue;
        double ratio =
            diff_norm(apply_G(ext, coc, a, 1e-13), apply_G(ext, coc, b2, 1e-13)) / dist;
        worst_ratio = std::max(worst_ratio, ratio);
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "20 orbits: residual <= %.2e (tol 1e-10), iterations <= %d (tol 50), Lipschitz <= %.2e (tol 1)",
                worst_residual, max_iterations, worst_ratio);
  return {worst_residual < 1e-10 && max_iterations <= 50 && worst_ratio < 1.0, buf};
}

Outcome criterion_ph_defect() {
  CoverMapSystem ph = make_ph3();
  PseudoOrbit orbit = gen_exact(ph, Vec::Zero(3), -140, 140);
  HyperbolicCocycle coc = build_cocycle(ph, orbit);
  const Mat& proj_c = ph.linear_splitting.proj_c;
  CounterRng rng(2525);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    VectorSequence w = random_window(rng, 3, -20, 20, 1.0, static_cast<std::uint64_t>(i) * 256);
    VectorSequence defect = ph_defect(coc, w, 1e-14);
    long lo = std::min(defect.k_lo(), w.k_lo());
    long hi = std::max(defect.k_hi(), w.k_hi());
    for (long k = lo; k <= hi; ++k) {
      worst = std::max(worst, (defect.at(k) + proj_c * w.at(k)).norm());
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max |(Id-T)G(w) - w + pi_c w| = %.2e (tol 1e-12)", worst);
  return {worst < 1e-12, buf};
}

Outcome criterion_lifting_pipeline() {
  CoverMapSystem cat = make_cat_map();
  CoveringChart chart(2);
  CounterRng rng(2929);
  double worst_tail = 0.0, worst_jump = 0.0;
  for (int i = 0; i < 20; ++i) {
    CoverPoint p = v2(0.5, 0.5) + 0.4 * rng.in_ball(2, 1.0, 40 * i);
    PseudoOrbit cover = gen_noisy(cat, p, -8, 8, 0.35, 7000 + static_cast<std::uint64_t>(i));
    std::vector<TorusPoint> down;
    for (long k = -8; k <= 8; ++k) down.push_back(chart.project(cover.at(k)));
    for (long k = -7; k <= 8; ++k) {
      worst_jump = std::max(worst_jump, chart.torus_distance(chart.project(cat.apply(cover.at(k - 1))),
                                                             down[static_cast<std::size_t>(k + 8)]));
    }
    LiftSolveOutcome out = lift_and_solve(down, cat, cover.at(-8), SolverConfig{}, -8);
    if (!out.upstairs.converged) return {false, "a lifted solve failed"};
    for (const auto& [k, d] : out.downstairs_decay) {
      if (std::labs(k) >= 40) worst_tail = std::max(worst_tail, d);
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "20 orbits, jumps <= %.3f (< 0.4): max downstairs decay beyond +-40 = %.2e (tol 1e-10)",
                worst_jump, worst_tail);
  return {worst_tail < 1e-10 && worst_jump < 0.4, buf};
}

#ifndef SHADOWCOVER_CLI_PATH
#define SHADOWCOVER_CLI_PATH "shadowcover"
#endif

int run_cli(const std::string& args) {
  std::string cmd = std::string(SHADOWCOVER_CLI_PATH) + " " + args + " 2>/dev/null >/dev/null";
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome criterion_cli_contract() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "shadowcover_acceptance";
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir);
  auto at = [&](const char* name) { return (dir / name).string(); };

  std::vector<std::string> problems;
  auto expect = [&](const std::string& args, int want) {
    int got = run_cli(args);
    if (got != want) {
      problems.push_back("`" + args + "` -> " + std::to_string(got) + " (want " +
                         std::to_string(want) + ")");
    }
  };

  // Determinism: identical seeded invocations produce byte-identical files.
  std::string gen = "gen --system cat --kind noisy --p 0.1,0.2 --window -10:10 --noise 1e-3 --seed 42";
  expect(gen + " --out " + at("a.jsonl"), 0);
  expect(gen + " --out " + at("b.jsonl"), 0);
  bool identical = !slurp(dir / "a.jsonl").empty() && slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl");

  // Exit 0: a spliced linear orbit solves.
  expect("gen --system cat --kind spliced --p 0,0 --q 0.01,0 --window -10:10 --out " + at("sp.jsonl"),
         0);
  expect("solve " + at("sp.jsonl") + " --out " + at("r.json"), 0);
  expect("solve " + at("sp.jsonl") + " --algorithm both --out " + at("rb.json"), 0);
  bool has_agreement = slurp(dir / "rb.json").find("\"agreement\":") != std::string::npos;

  // Exit 2: center noise cannot converge; the result is still written.
  expect("gen --system ph3 --kind noisy --p 0,0,0 --window -4:4 --noise 1e-3 --seed 7 --out " +
             at("ph.jsonl"),
         0);
  expect("solve " + at("ph.jsonl") + " --out " + at("rp.json"), 2);
  bool wrote_nonconverged = slurp(dir / "rp.json").find("\"converged\":false") != std::string::npos;

  // Exit 3: invalid flags, preconditions, and inputs.
  expect("gen --system cat --kind spliced --p 0,0 --q 0.01,0 --window 5:10 --out " + at("x.jsonl"),
         3);
  expect("gen --system cat --kind warp --p 0,0 --window -2:2 --out " + at("y.jsonl"), 3);
  expect("solve " + at("missing.jsonl"), 3);
  expect("solve " + at("sp.jsonl") + " --algorithm sideways", 3);
  expect("solve " + at("sp.jsonl") + " --system ph3", 3);

  // Verify accepts an explicit point and flags a displaced one via exit 2.
  expect("verify " + at("sp.jsonl") + " --result " + at("r.json") + " --pad 8 --csv " + at("d.csv"),
         0);
  expect("verify " + at("sp.jsonl") + " --z 0.3,0.3 --pad 12", 2);

  // Product route on a nonlinear system reports NotLinear as invalid input.
  expect("gen --system perturbed:0.01 --kind noisy --p 0.4,0.6 --window -4:4 --noise 1e-4 --seed 3 --out " +
             at("pt.jsonl"),
         0);
  expect("solve " + at("pt.jsonl") + " --algorithm product", 3);

  // Round trip: generated file parses back to an identical orbit.
  io::LoadedOrbit loaded = io::read_orbit_file(at("a.jsonl"));
  bool round_trip = io::orbit_to_jsonl(loaded.orbit, loaded.spec) == slurp(dir / "a.jsonl");

  fs::remove_all(dir, ec);
  if (!identical) problems.push_back("seeded gen not byte-identical");
  if (!has_agreement) problems.push_back("both-route result lacks agreement");
  if (!wrote_nonconverged) problems.push_back("non-converged result not written");
  if (!round_trip) problems.push_back("orbit file round trip changed the data");
  if (problems.empty()) {
    return {true, "determinism, exit codes 0/2/3, and round trip verified"};
  }
  std::string detail;
  for (const std::string& p : problems) detail += (detail.empty() ? "" : "; ") + p;
  return {false, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "operator-inverse", criterion_operator_inverse},
      {2, "oracle-equivalence", criterion_oracle_equivalence},
      {3, "transport-identity", criterion_transport_identity},
      {4, "norm-bound", criterion_norm_bound},
      {5, "bijection-round-trip", criterion_bijection},
      {6, "linear-constancy", criterion_linear_constancy},
      {7, "product-cross-check", criterion_product_cross_check},
      {8, "contraction-regime", criterion_contraction_regime},
      {9, "ph-defect", criterion_ph_defect},
      {10, "lifting-pipeline", criterion_lifting_pipeline},
      {11, "cli-contract", criterion_cli_contract},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome outcome{false, ""};
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%2d] %s %-20s %s\n", c.id, outcome.pass ? "PASS" : "FAIL", c.name,
                outcome.detail.c_str());
    if (!outcome.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
