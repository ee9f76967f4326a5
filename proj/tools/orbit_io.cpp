#include "orbit_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "shadowcover/errors.hpp"

namespace shadowcover::io {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw InvalidArgument("empty component in '" + text + "'");
    std::size_t pos = 0;
    out.push_back(std::stod(item, &pos));
    if (pos != item.size()) throw InvalidArgument("bad number '" + item + "'");
  }
  if (out.empty()) throw InvalidArgument("no components in '" + text + "'");
  return out;
}

std::vector<PerturbationTerm> builtin_phi() {
  PerturbationTerm t;
  t.frequency = Eigen::VectorXi(2);
  t.frequency << 0, 1;
  t.amplitude = Vec(2);
  t.amplitude << 1.0 / (2.0 * std::numbers::pi), 0.0;
  return {t};
}

json phi_to_json(const std::vector<PerturbationTerm>& phi) {
  json arr = json::array();
  for (const PerturbationTerm& t : phi) {
    json rec;
    rec["frequency"] = std::vector<long>(t.frequency.data(), t.frequency.data() + t.frequency.size());
    json amp = json::array();
    for (Eigen::Index i = 0; i < t.amplitude.size(); ++i) amp.push_back(t.amplitude[i]);
    rec["amplitude"] = amp;
    arr.push_back(rec);
  }
  return arr;
}

std::vector<PerturbationTerm> phi_from_json(const json& arr) {
  std::vector<PerturbationTerm> phi;
  for (const json& rec : arr) {
    PerturbationTerm t;
    auto freq = rec.at("frequency").get<std::vector<long>>();
    auto amp = rec.at("amplitude").get<std::vector<double>>();
    t.frequency = Eigen::VectorXi(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i) t.frequency[static_cast<Eigen::Index>(i)] = static_cast<int>(freq[i]);
    t.amplitude = Vec(amp.size());
    for (std::size_t i = 0; i < amp.size(); ++i) t.amplitude[static_cast<Eigen::Index>(i)] = amp[i];
    phi.push_back(std::move(t));
  }
  return phi;
}

}  // namespace

CoverMapSystem SystemSpec::build() const {
  if (name == "cat") return make_cat_map();
  if (name == "ph3") return make_ph3();
  if (name == "perturbed") {
    Mat L(2, 2);
    L << 2, 1, 1, 1;
    return make_perturbed_system(L, eps, phi.empty() ? builtin_phi() : phi);
  }
  if (name == "matrix") return make_linear_system(linear);
  throw InvalidArgument("unknown system '" + name + "'");
}

SystemSpec parse_system_spec(const std::string& text) {
  SystemSpec spec;
  if (text == "cat") {
    spec.name = "cat";
    return spec;
  }
  if (text == "ph3") {
    spec.name = "ph3";
    return spec;
  }
  if (text.rfind("perturbed:", 0) == 0) {
    spec.name = "perturbed";
    spec.eps = std::stod(text.substr(10));
    spec.phi = builtin_phi();
    return spec;
  }
  if (text.rfind("matrix:", 0) == 0) {
    std::vector<double> entries = parse_reals(text.substr(7));
    int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(entries.size()))));
    if (static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != entries.size()) {
      throw InvalidArgument("matrix spec needs n*n entries, got " + std::to_string(entries.size()));
    }
    spec.name = "matrix";
    spec.linear = Mat(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) spec.linear(i, j) = entries[static_cast<std::size_t>(i * n + j)];
    return spec;
  }
  throw InvalidArgument("unknown system spec '" + text + "'");
}

std::string orbit_to_jsonl(const PseudoOrbit& orbit, const SystemSpec& spec) {
  std::string out;
  json params = json::object();
  if (spec.name == "perturbed") {
    params["eps"] = spec.eps;
    params["phi"] = phi_to_json(spec.phi);
  }
  if (spec.name == "matrix") {
    json rows = json::array();
    for (Eigen::Index i = 0; i < spec.linear.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < spec.linear.cols(); ++j) row.push_back(spec.linear(i, j));
      rows.push_back(row);
    }
    params["L"] = rows;
  }
  // Header assembled by hand so every float carries 17 significant digits.
  std::string header = "{\"format\":\"pseudo-orbit/1\",\"system\":\"" + spec.name +
                       "\",\"dim\":" + std::to_string(orbit.system().dim) + ",\"params\":";
  if (spec.name == "perturbed") {
    std::string phi_text = "[";
    for (std::size_t i = 0; i < spec.phi.size(); ++i) {
      if (i) phi_text += ",";
      phi_text += "{\"frequency\":[";
      for (Eigen::Index j = 0; j < spec.phi[i].frequency.size(); ++j) {
        if (j) phi_text += ",";
        phi_text += std::to_string(spec.phi[i].frequency[j]);
      }
      phi_text += "],\"amplitude\":[";
      for (Eigen::Index j = 0; j < spec.phi[i].amplitude.size(); ++j) {
        if (j) phi_text += ",";
        phi_text += format_double(spec.phi[i].amplitude[j]);
      }
      phi_text += "]}";
    }
    phi_text += "]";
    header += "{\"eps\":" + format_double(spec.eps) + ",\"phi\":" + phi_text + "}";
  } else if (spec.name == "matrix") {
    std::string rows = "[";
    for (Eigen::Index i = 0; i < spec.linear.rows(); ++i) {
      if (i) rows += ",";
      rows += "[";
      for (Eigen::Index j = 0; j < spec.linear.cols(); ++j) {
        if (j) rows += ",";
        rows += format_double(spec.linear(i, j));
      }
      rows += "]";
    }
    rows += "]";
    header += "{\"L\":" + rows + "}";
  } else {
    header += "{}";
  }
  header += "}\n";
  out += header;
  for (long k = orbit.k_lo(); k <= orbit.k_hi(); ++k) {
    std::string line = "{\"k\":" + std::to_string(k) + ",\"x\":[";
    const CoverPoint& x = orbit.at(k);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (i) line += ",";
      line += format_double(x[i]);
    }
    line += "]}\n";
    out += line;
  }
  return out;
}

void write_orbit_file(const std::string& path, const PseudoOrbit& orbit, const SystemSpec& spec) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
  f << orbit_to_jsonl(orbit, spec);
}

LoadedOrbit parse_orbit_jsonl(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw InvalidArgument("empty orbit file");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object()) throw InvalidArgument("bad orbit header");
  if (header.value("format", "") != "pseudo-orbit/1") {
    throw InvalidArgument("unsupported orbit format '" + header.value("format", "") + "'");
  }
  SystemSpec spec;
  spec.name = header.value("system", "");
  int dim = header.value("dim", 0);
  json params = header.value("params", json::object());
  if (spec.name == "perturbed") {
    spec.eps = params.value("eps", 0.0);
    if (params.contains("phi")) spec.phi = phi_from_json(params["phi"]);
  } else if (spec.name == "matrix") {
    if (!params.contains("L")) throw InvalidArgument("matrix system header lacks params.L");
    auto rows = params["L"].get<std::vector<std::vector<double>>>();
    spec.linear = Mat(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw InvalidArgument("params.L is not square");
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        spec.linear(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
    }
  }
  CoverMapSystem system = spec.build();
  if (system.dim != dim) throw InvalidArgument("header dim does not match the system");

  std::vector<CoverPoint> points;
  bool have_k0 = false;
  long k0 = 0, expect = 0;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.contains("k") || !rec.contains("x")) {
      throw InvalidArgument("bad orbit record: " + line);
    }
    long k = rec["k"].get<long>();
    if (!have_k0) {
      k0 = k;
      expect = k;
      have_k0 = true;
    }
    if (k != expect) throw InvalidArgument("orbit records not contiguous at k=" + std::to_string(k));
    ++expect;
    auto coords = rec["x"].get<std::vector<double>>();
    if (static_cast<int>(coords.size()) != dim) {
      throw InvalidArgument("record dimension mismatch at k=" + std::to_string(k));
    }
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x[i] = coords[static_cast<std::size_t>(i)];
    points.push_back(std::move(x));
  }
  if (points.empty()) throw InvalidArgument("orbit file has no points");
  return LoadedOrbit{PseudoOrbit(std::move(system), k0, std::move(points)), std::move(spec)};
}

LoadedOrbit read_orbit_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_orbit_jsonl(buf.str());
}

std::string result_to_json(const ShadowingResult& result, const SolverConfig& config,
                           const std::string& algorithm, std::optional<double> agreement) {
  std::string out = "{\"z\":[";
  for (Eigen::Index i = 0; i < result.z.size(); ++i) {
    if (i) out += ",";
    out += format_double(result.z[i]);
  }
  out += "],\"residual\":" + format_double(result.residual);
  out += ",\"iterations\":" + std::to_string(result.iterations);
  out += std::string(",\"converged\":") + (result.converged ? "true" : "false");
  if (agreement) out += ",\"agreement\":" + format_double(*agreement);
  out += ",\"decay\":[";
  for (std::size_t i = 0; i < result.decay.size(); ++i) {
    if (i) out += ",";
    out += "[" + std::to_string(result.decay[i].first) + "," + format_double(result.decay[i].second) + "]";
  }
  out += "],\"config\":{\"tol\":" + format_double(config.tol);
  out += ",\"max_iter\":" + std::to_string(config.max_iter);
  out += ",\"tail_tol\":" + format_double(config.tail_tol);
  out += ",\"verify_window_pad\":" + std::to_string(config.verify_window_pad);
  out += ",\"algorithm\":\"" + algorithm + "\"}}\n";
  return out;
}

void write_result_file(const std::string& path, const std::string& json_text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
  f << json_text;
}

}  // namespace shadowcover::io
