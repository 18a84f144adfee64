#pragma once

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "peakon/error.hpp"

namespace peakon::cli {

enum class Scenario { verify, linear, nonlinear, instability, multipeakon };

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::verify:
      return "verify";
    case Scenario::linear:
      return "linear";
    case Scenario::nonlinear:
      return "nonlinear";
    case Scenario::instability:
      return "instability";
    case Scenario::multipeakon:
      return "multipeakon";
  }
  return "verify";
}

inline Scenario parse_scenario(const std::string& name) {
  for (Scenario s : {Scenario::verify, Scenario::linear, Scenario::nonlinear, Scenario::instability,
                     Scenario::multipeakon}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigurationError("unknown scenario '" + name +
                           "' (expected verify, linear, nonlinear, instability or multipeakon)");
}

/// Unset optionals take scenario-dependent defaults (see resolved_h_min / resolved_t_end).
struct ScenarioConfig {
  Scenario scenario = Scenario::verify;
  double domain_half_width = 30.0;
  std::size_t nodes = 8001;
  std::optional<double> h_min;
  double dt = 1e-3;
  std::optional<double> t_end;
  double epsilon = 0.25;
  double mu = 0.01;
  std::string output_dir = "peakon_out";
};

/// mu / 10 unless given.
inline double resolved_h_min(const ScenarioConfig& c) { return c.h_min.value_or(c.mu / 10.0); }

inline double resolved_t_end(const ScenarioConfig& c) {
  if (c.t_end) return *c.t_end;
  switch (c.scenario) {
    case Scenario::linear:
      return 5.0;
    case Scenario::nonlinear:
      return 1.0;
    case Scenario::instability:
      return std::log(2.0) - 2.0 * std::log(c.epsilon) + 1.0;
    case Scenario::multipeakon:
      return 10.0;
    case Scenario::verify:
      return 0.0;
  }
  return 0.0;
}

inline void validate(const ScenarioConfig& c) {
  if (c.nodes < 3 || c.nodes % 2 == 0) throw ConfigurationError("nodes must be odd and at least 3");
  if (!(c.domain_half_width > 5.0)) throw ConfigurationError("domain_half_width must exceed 5");
  if (!(c.dt > 0.0)) throw ConfigurationError("dt must be positive");
  if (c.t_end && !(*c.t_end >= 0.0)) throw ConfigurationError("t_end must be nonnegative");
  if (c.h_min && !(*c.h_min > 0.0)) throw ConfigurationError("h_min must be positive");
  if (c.output_dir.empty()) throw ConfigurationError("output_dir must not be empty");
}

namespace detail {

template <class T>
T field_as(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace detail

/// Parses a flat JSON object whose keys are exactly ScenarioConfig field names.
inline ScenarioConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigurationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
  static const char* const known[] = {"scenario", "domain_half_width", "nodes", "h_min",     "dt",
                                      "t_end",    "epsilon",           "mu",    "output_dir"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigurationError("unknown config field '" + item.key() + "'");
  }
  if (!j.contains("scenario")) throw ConfigurationError("field 'scenario' is required");

  ScenarioConfig c;
  c.scenario = parse_scenario(detail::field_as<std::string>(j, "scenario"));
  if (j.contains("domain_half_width")) c.domain_half_width = detail::field_as<double>(j, "domain_half_width");
  if (j.contains("nodes")) {
    const auto& n = j.at("nodes");
    if (!n.is_number_integer() || n.get<long long>() < 0) {
      throw ConfigurationError("field 'nodes': expected a nonnegative integer");
    }
    c.nodes = n.get<std::size_t>();
  }
  if (j.contains("h_min")) c.h_min = detail::field_as<double>(j, "h_min");
  if (j.contains("dt")) c.dt = detail::field_as<double>(j, "dt");
  if (j.contains("t_end")) c.t_end = detail::field_as<double>(j, "t_end");
  if (j.contains("epsilon")) c.epsilon = detail::field_as<double>(j, "epsilon");
  if (j.contains("mu")) c.mu = detail::field_as<double>(j, "mu");
  if (j.contains("output_dir")) c.output_dir = detail::field_as<std::string>(j, "output_dir");
  validate(c);
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

/// PEAKON_OUT, when set and non-empty, replaces output_dir.
inline void apply_environment(ScenarioConfig& c) {
  if (const char* out = std::getenv("PEAKON_OUT"); out != nullptr && *out != '\0') c.output_dir = out;
}

}  // namespace peakon::cli
