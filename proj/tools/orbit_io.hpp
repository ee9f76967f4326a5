#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shadowcover/pseudo_orbit.hpp"
#include "shadowcover/solver.hpp"
#include "shadowcover/system.hpp"

namespace shadowcover::io {

// Named system builders shared by the CLI flags and the orbit file header.
// Accepted specs: "cat", "ph3", "perturbed:<eps>", "matrix:a,b,c,d,...".
struct SystemSpec {
  std::string name;  // header tag: cat | perturbed | ph3 | matrix
  double eps = 0.0;
  std::vector<PerturbationTerm> phi;
  Mat linear;  // for matrix systems

  CoverMapSystem build() const;
};

SystemSpec parse_system_spec(const std::string& text);

// Pseudo-orbit JSONL: one header record then one record per index, contiguous
// and sorted by k. All floats carry 17 significant digits.
void write_orbit_file(const std::string& path, const PseudoOrbit& orbit, const SystemSpec& spec);
std::string orbit_to_jsonl(const PseudoOrbit& orbit, const SystemSpec& spec);

struct LoadedOrbit {
  PseudoOrbit orbit;
  SystemSpec spec;
};

LoadedOrbit read_orbit_file(const std::string& path);
LoadedOrbit parse_orbit_jsonl(const std::string& text);

// Result document for the solve command.
std::string result_to_json(const ShadowingResult& result, const SolverConfig& config,
                           const std::string& algorithm, std::optional<double> agreement);
void write_result_file(const std::string& path, const std::string& json);

std::string format_double(double x);  // %.17g

}  // namespace shadowcover::io
