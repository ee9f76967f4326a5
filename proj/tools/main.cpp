// shadowcover: pseudo-orbit generation, shadowing solves, dynamical
// verification, and operator self-checks for hyperbolic maps lifted to the
// flat cover of the torus.
//
// Exit codes: 0 success, 2 solver non-convergence or failed check, 3 invalid
// input. SHADOW_COVER_LOG=debug|info|off controls diagnostics on stderr.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "orbit_io.hpp"
#include "shadowcover/cocycle.hpp"
#include "shadowcover/errors.hpp"
#include "shadowcover/generators.hpp"
#include "shadowcover/operators.hpp"
#include "shadowcover/rng.hpp"
#include "shadowcover/solver.hpp"

using namespace shadowcover;

namespace {

enum class LogLevel { Off = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("SHADOW_COVER_LOG");
    if (!env) return LogLevel::Off;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    return LogLevel::Off;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::fprintf(stderr, "[shadowcover] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug) std::fprintf(stderr, "[shadowcover] %s\n", msg.c_str());
}

Vec parse_point(const std::string& text, int dim) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
  if (static_cast<int>(values.size()) != dim) {
    throw InvalidArgument("point '" + text + "' has " + std::to_string(values.size()) +
                          " coordinates, system needs " + std::to_string(dim));
  }
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = values[static_cast<std::size_t>(i)];
  return v;
}

std::pair<long, long> parse_window(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("window must be lo:hi, got '" + text + "'");
  return {std::stol(text.substr(0, colon)), std::stol(text.substr(colon + 1))};
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fputs(content.c_str(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
  f << content;
}

struct GenArgs {
  std::string system = "cat";
  std::string kind = "exact";
  std::string p, q;
  std::string window;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenArgs& args) {
  io::SystemSpec spec = io::parse_system_spec(args.system);
  CoverMapSystem system = spec.build();
  auto [lo, hi] = parse_window(args.window);
  if (args.p.empty()) throw InvalidArgument("--p is required");
  Vec p = parse_point(args.p, system.dim);

  std::optional<PseudoOrbit> orbit;
  if (args.kind == "exact") {
    orbit = gen_exact(system, p, lo, hi);
  } else if (args.kind == "spliced") {
    if (args.q.empty()) throw InvalidArgument("--q is required for spliced orbits");
    orbit = gen_spliced(system, p, parse_point(args.q, system.dim), lo, hi);
  } else if (args.kind == "noisy") {
    orbit = gen_noisy(system, p, lo, hi, args.noise, args.seed);
  } else {
    throw InvalidArgument("unknown kind '" + args.kind + "'");
  }
  log_info("generated " + args.kind + " orbit on [" + std::to_string(lo) + ", " +
           std::to_string(hi) + "]");
  emit(args.out, io::orbit_to_jsonl(*orbit, spec));
  return 0;
}

struct SolveArgs {
  std::string input;
  std::string system;
  std::string algorithm = "fixed-point";
  double tol = 1e-10;
  int max_iter = 100;
  double tail_tol = 1e-12;
  long pad = 50;
  std::string out;
};

int cmd_solve(const SolveArgs& args) {
  io::LoadedOrbit loaded = io::read_orbit_file(args.input);
  if (!args.system.empty() && io::parse_system_spec(args.system).name != loaded.spec.name) {
    throw InvalidArgument("--system " + args.system + " does not match the file header system '" +
                          loaded.spec.name + "'");
  }
  SolverConfig config;
  config.tol = args.tol;
  config.max_iter = args.max_iter;
  config.tail_tol = args.tail_tol;
  config.verify_window_pad = args.pad;

  ShadowingResult result;
  std::optional<double> agreement;
  if (args.algorithm == "fixed-point") {
    result = solve_fixed_point(loaded.orbit, config);
  } else if (args.algorithm == "product") {
    CoverPoint z = solve_product(loaded.orbit);
    // The fixed-point run supplies residual and decay reporting; the product
    // point is the answer and the distance between the routes is recorded.
    result = solve_fixed_point(loaded.orbit, config);
    agreement = (result.z - z).norm();
    result.z = z;
  } else if (args.algorithm == "both") {
    result = solve_fixed_point(loaded.orbit, config);
    CoverPoint z = solve_product(loaded.orbit);
    agreement = (result.z - z).norm();
  } else {
    throw InvalidArgument("unknown algorithm '" + args.algorithm + "'");
  }
  log_info("solve finished: iterations=" + std::to_string(result.iterations) +
           " residual=" + io::format_double(result.residual));
  for (std::size_t i = 0; i < result.residual_history.size(); ++i) {
    log_debug("iteration " + std::to_string(i + 1) +
              " residual=" + io::format_double(result.residual_history[i]));
  }
  emit(args.out, io::result_to_json(result, config, args.algorithm, agreement));
  return result.converged ? 0 : 2;
}

struct VerifyArgs {
  std::string input;
  std::string result_file;
  std::string z_text;
  long pad = 20;
  std::string csv;
  std::string out;
};

int cmd_verify(const VerifyArgs& args) {
  io::LoadedOrbit loaded = io::read_orbit_file(args.input);
  Vec z;
  if (!args.z_text.empty()) {
    z = parse_point(args.z_text, loaded.orbit.system().dim);
  } else if (!args.result_file.empty()) {
    std::ifstream f(args.result_file);
    if (!f) throw InvalidArgument("cannot open '" + args.result_file + "'");
    nlohmann::json doc = nlohmann::json::parse(f, nullptr, false);
    if (doc.is_discarded() || !doc.contains("z")) {
      throw InvalidArgument("result file lacks a shadowing point");
    }
    auto coords = doc["z"].get<std::vector<double>>();
    z = Vec(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) z[static_cast<Eigen::Index>(i)] = coords[i];
  } else {
    throw InvalidArgument("verify needs --z or --result");
  }

  DecayReport report = verify_shadowing(loaded.orbit, z, args.pad);
  std::string json = "{\"max_interior\":" + io::format_double(report.max_interior);
  json += ",\"rate_backward\":" + io::format_double(report.rate_backward);
  json += ",\"rate_forward\":" + io::format_double(report.rate_forward);
  json += std::string(",\"tails_decrease\":") + (report.tails_decrease ? "true" : "false");
  json += ",\"decay\":[";
  for (std::size_t i = 0; i < report.distances.size(); ++i) {
    if (i) json += ",";
    json += "[" + std::to_string(report.distances[i].first) + "," +
            io::format_double(report.distances[i].second) + "]";
  }
  json += "]}\n";
  emit(args.out, json);
  if (!args.csv.empty()) {
    std::string csv = "k,d\n";
    for (const auto& [k, d] : report.distances) {
      csv += std::to_string(k) + "," + io::format_double(d) + "\n";
    }
    emit(args.csv, csv);
  }
  return report.tails_decrease ? 0 : 2;
}

struct OracleArgs {
  std::string system = "cat";
  std::string window = "-30:30";
  int samples = 200;
  std::uint64_t seed = 1;
  double tail_tol = 1e-12;
};

// Self-check of the operator identities on a fixed-point-anchored orbit:
// inverse round trips, dense-section agreement, the transport identity, and
// the norm bound of the inverse.
int cmd_oracle(const OracleArgs& args) {
  io::SystemSpec spec = io::parse_system_spec(args.system);
  CoverMapSystem system = spec.build();
  auto [lo, hi] = parse_window(args.window);
  if (lo > hi) throw InvalidArgument("empty oracle window");

  Vec origin = Vec::Zero(system.dim);
  long m = tail_extent(system.lambda, system.proj_bound, args.tail_tol, 1.0);
  PseudoOrbit orbit = gen_exact(system, origin, lo - 4 * m - 8, hi + 4 * m + 8);
  HyperbolicCocycle cocycle = build_cocycle(system, orbit);
  bool center = cocycle.has_center();
  CounterRng rng(args.seed);

  double worst_fwd = 0.0, worst_bwd = 0.0, worst_transport = 0.0, worst_dense = 0.0,
         worst_ratio = 0.0;
  DenseSection dense(cocycle, lo - 3 * m, hi + 3 * m);
  for (int i = 0; i < args.samples; ++i) {
    std::uint64_t base = static_cast<std::uint64_t>(i) * 1000;
    std::vector<Vec> vals;
    for (long k = lo; k <= hi; ++k) {
      vals.push_back(rng.in_ball(system.dim, 1.0, base + static_cast<std::uint64_t>(k - lo)));
    }
    VectorSequence w(lo, std::move(vals));
    if (w.empty()) continue;
    VectorSequence g = apply_Ginv(cocycle, w, args.tail_tol);

    if (!center) {
      worst_fwd = std::max(worst_fwd,
                           combine(apply_Id_minus_T(cocycle, g), w, 1.0, -1.0).sup_norm());
      VectorSequence v = w;
      worst_bwd = std::max(
          worst_bwd,
          combine(apply_Ginv(cocycle, apply_Id_minus_T(cocycle, v), args.tail_tol), v, 1.0, -1.0)
              .sup_norm());
      worst_dense = std::max(worst_dense, combine(g, dense.solve(w), 1.0, -1.0).sup_norm());
    }
    for (long k = g.k_lo() - 1; k <= g.k_hi(); ++k) {
      if (k < cocycle.k_lo || k >= cocycle.k_hi) continue;
      Vec defect = cocycle.A_at(k) * g.at(k) - g.at(k + 1) + w.at(k + 1);
      worst_transport = std::max(worst_transport, defect.norm());
    }
    double s = w.sup_norm();
    if (s > 0) worst_ratio = std::max(worst_ratio, g.sup_norm() / s);
  }

  double norm_bound = system.proj_bound * (1.0 + system.lambda) / (1.0 - system.lambda);
  bool ok = true;
  auto report = [&](const char* name, double value, double tol, bool enabled) {
    if (!enabled) {
      std::printf("skip %-22s (center direction present)\n", name);
      return;
    }
    bool pass = value <= tol;
    ok = ok && pass;
    std::printf("%s %-22s %.3e (tol %.1e)\n", pass ? "ok  " : "FAIL", name, value, tol);
  };
  report("inverse-identity", worst_fwd, 1e-10, !center);
  report("inverse-identity-rev", worst_bwd, 1e-10, !center);
  report("dense-agreement", worst_dense, 1e-12, !center);
  report("transport-identity", worst_transport, 1e-12, true);
  report("norm-bound", worst_ratio, norm_bound + 1e-9, true);
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shadowing toolkit for hyperbolic maps on the flat torus cover"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a pseudo-orbit file");
  gen->add_option("--system", gen_args.system, "cat | perturbed:<eps> | ph3 | matrix:<a,b,c,...>");
  gen->add_option("--kind", gen_args.kind, "exact | spliced | noisy");
  gen->add_option("--p", gen_args.p, "anchor point, comma separated");
  gen->add_option("--q", gen_args.q, "forward anchor for spliced orbits");
  gen->add_option("--window", gen_args.window, "index window lo:hi")->required();
  gen->add_option("--noise", gen_args.noise, "noise radius for noisy orbits");
  gen->add_option("--seed", gen_args.seed, "seed for noisy orbits");
  gen->add_option("--out", gen_args.out, "output path (default stdout)");

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "compute the shadowing point of an orbit file");
  solve->add_option("input", solve_args.input, "pseudo-orbit JSONL file")->required();
  solve->add_option("--system", solve_args.system, "cross-check against the file header");
  solve->add_option("--algorithm", solve_args.algorithm, "fixed-point | product | both");
  solve->add_option("--tol", solve_args.tol, "residual tolerance");
  solve->add_option("--max-iter", solve_args.max_iter, "iteration budget");
  solve->add_option("--tail-tol", solve_args.tail_tol, "series truncation tolerance");
  solve->add_option("--pad", solve_args.pad, "decay table padding");
  solve->add_option("--out", solve_args.out, "output path (default stdout)");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "iterate a point against an orbit file");
  verify->add_option("input", verify_args.input, "pseudo-orbit JSONL file")->required();
  verify->add_option("--result", verify_args.result_file, "result JSON with the point z");
  verify->add_option("--z", verify_args.z_text, "explicit point, comma separated");
  verify->add_option("--pad", verify_args.pad, "tail padding for the decay table");
  verify->add_option("--csv", verify_args.csv, "write the decay table as CSV");
  verify->add_option("--out", verify_args.out, "output path (default stdout)");

  OracleArgs oracle_args;
  CLI::App* oracle = app.add_subcommand("oracle", "run the operator identity checks");
  oracle->add_option("--system", oracle_args.system, "system spec");
  oracle->add_option("--window", oracle_args.window, "support window lo:hi");
  oracle->add_option("--samples", oracle_args.samples, "number of random inputs");
  oracle->add_option("--seed", oracle_args.seed, "random seed");
  oracle->add_option("--tail-tol", oracle_args.tail_tol, "series truncation tolerance");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen(gen_args);
    if (solve->parsed()) return cmd_solve(solve_args);
    if (verify->parsed()) return cmd_verify(verify_args);
    if (oracle->parsed()) return cmd_oracle(oracle_args);
    return 3;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const ShadowError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
