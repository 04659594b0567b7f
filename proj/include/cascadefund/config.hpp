#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "cascadefund/policy_table.hpp"
#include "cascadefund/quality.hpp"

namespace cascadefund {

// Invalid or inconsistent configuration.  Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

inline const char* to_string(OutputFormat f) {
  return f == OutputFormat::csv ? "csv" : "json";
}

struct RunConfig {
  std::optional<QualitySpec> quality;
  std::string quality_file;  // set when the spec came from a file
  int B = 2;
  int n = 2;
  double L0 = 1.0;
  double L_min = 0.05;
  double L_max = 5.0;
  int points = 100;
  SolverOptions solver;
  std::uint64_t seed = 1;
  std::uint64_t runs = 10000;
  std::string out;
  std::string summary;
  OutputFormat format = OutputFormat::csv;

  const QualitySpec& spec() const {
    if (!quality) throw ConfigError("config: no quality distribution given");
    return *quality;
  }

  void validate() const {
    spec();
    if (B < 0) throw ConfigError("config: B must be >= 0");
    if (n < 1 || n > PolicyTable::kMaxPlayers) {
      throw ConfigError("config: n must lie in [1, 50]");
    }
    if (B > n) {
      throw ConfigError("config: B must not exceed n (B=" + std::to_string(B) +
                        ", n=" + std::to_string(n) + ")");
    }
    if (!(L0 > 0.0) || !std::isfinite(L0)) {
      throw ConfigError("config: L0 must be positive and finite");
    }
    if (!(L_min > 0.0) || !(L_max >= L_min) || !std::isfinite(L_max)) {
      throw ConfigError("config: L range needs 0 < L_min <= L_max");
    }
    if (points < 1) throw ConfigError("config: points must be >= 1");
    if (solver.grid_size > 200001 || solver.scan_points > 200001) {
      throw ConfigError("config: grid_size and scan_points must be <= 200001");
    }
    try {
      solver.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    if (quality) j["quality"] = quality->to_json();
    if (!quality_file.empty()) j["quality_file"] = quality_file;
    j["B"] = B;
    j["n"] = n;
    j["L0"] = L0;
    j["L_range"] = {{"min", L_min}, {"max", L_max}, {"points", points}};
    j["grid_size"] = solver.grid_size;
    j["scan_points"] = solver.scan_points;
    j["tolerances"] = {{"root", solver.root_tolerance},
                       {"tie", solver.tie_tolerance},
                       {"bisection", solver.bisection_tolerance}};
    j["interpolation"] = to_string(solver.interpolation);
    j["seed"] = seed;
    j["runs"] = runs;
    j["output"] = {{"path", out}, {"summary", summary}, {"format", to_string(format)}};
    return j;
  }
};

namespace detail {

inline void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                       const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) {
      throw ConfigError("config: unknown key '" + k + "' in " + where);
    }
  }
}

template <class T>
T get_field(const nlohmann::json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config: field '" + std::string(key) + "' in " + where +
                      " has the wrong type");
  }
}

inline double positive(const nlohmann::json& j, const char* key,
                       const std::string& where) {
  const double v = get_field<double>(j, key, where);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError("config: '" + std::string(key) + "' in " + where +
                      " must be positive");
  }
  return v;
}

}  // namespace detail

// Reads a config object.  Relative quality file paths resolve against
// base_dir.
inline RunConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {}) {
  using detail::get_field;
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  detail::check_keys(j,
                     {"quality", "B", "n", "L0", "L_range", "grid_size",
                      "scan_points", "tolerances", "interpolation", "seed", "runs",
                      "output"},
                     "config");
  RunConfig c;
  if (j.contains("quality")) {
    const auto& q = j["quality"];
    try {
      if (q.is_string()) {
        std::filesystem::path p = q.get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        c.quality_file = p.string();
        c.quality = QualitySpec::from_file(c.quality_file);
      } else {
        c.quality = QualitySpec::from_json(q);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: quality: ") + e.what());
    }
  }
  if (j.contains("B")) c.B = get_field<int>(j, "B", "config");
  if (j.contains("n")) c.n = get_field<int>(j, "n", "config");
  if (j.contains("L0")) c.L0 = detail::positive(j, "L0", "config");
  if (j.contains("L_range")) {
    const auto& r = j["L_range"];
    if (!r.is_object()) throw ConfigError("config: L_range must be an object");
    detail::check_keys(r, {"min", "max", "points"}, "L_range");
    if (r.contains("min")) c.L_min = detail::positive(r, "min", "L_range");
    if (r.contains("max")) c.L_max = detail::positive(r, "max", "L_range");
    if (r.contains("points")) c.points = get_field<int>(r, "points", "L_range");
  }
  if (j.contains("grid_size")) {
    c.solver.grid_size = get_field<std::size_t>(j, "grid_size", "config");
  }
  if (j.contains("scan_points")) {
    c.solver.scan_points = get_field<std::size_t>(j, "scan_points", "config");
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw ConfigError("config: tolerances must be an object");
    detail::check_keys(t, {"root", "tie", "bisection"}, "tolerances");
    if (t.contains("root")) c.solver.root_tolerance = detail::positive(t, "root", "tolerances");
    if (t.contains("tie")) c.solver.tie_tolerance = detail::positive(t, "tie", "tolerances");
    if (t.contains("bisection")) {
      c.solver.bisection_tolerance = detail::positive(t, "bisection", "tolerances");
    }
  }
  if (j.contains("interpolation")) {
    const auto s = get_field<std::string>(j, "interpolation", "config");
    if (s == "linear") {
      c.solver.interpolation = Interpolation::linear;
    } else if (s == "cubic") {
      c.solver.interpolation = Interpolation::cubic;
    } else {
      throw ConfigError("config: interpolation must be 'linear' or 'cubic'");
    }
  }
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed", "config");
  if (j.contains("runs")) {
    if (!j["runs"].is_number_integer() || j["runs"].get<long long>() < 0) {
      throw ConfigError("config: runs must be a nonnegative integer");
    }
    c.runs = j["runs"].get<std::uint64_t>();
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    if (!o.is_object()) throw ConfigError("config: output must be an object");
    detail::check_keys(o, {"path", "summary", "format"}, "output");
    if (o.contains("path")) c.out = get_field<std::string>(o, "path", "output");
    if (o.contains("summary")) c.summary = get_field<std::string>(o, "summary", "output");
    if (o.contains("format")) {
      const auto f = get_field<std::string>(o, "format", "output");
      if (f == "csv") {
        c.format = OutputFormat::csv;
      } else if (f == "json") {
        c.format = OutputFormat::json;
      } else {
        throw ConfigError("config: output format must be 'csv' or 'json'");
      }
    }
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j, std::filesystem::path(path).parent_path());
}

}  // namespace cascadefund
