#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgibbs/config.hpp"
#include "mgibbs/error.hpp"
#include "mgibbs/expansion.hpp"
#include "mgibbs/gibbsmc.hpp"
#include "mgibbs/lpintegrate.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/potential.hpp"
#include "mgibbs/registry.hpp"
#include "mgibbs/rng.hpp"

namespace mgibbs {

inline constexpr const char* kReportSchema = "mgibbs.report/1";

/// Correlation functions carry no z^m prefactor for the fixed points.
inline constexpr const char* kCorrelationConvention = "rho_m = int kbar(points, .) dnu, no z^m prefactor";

/// Non-finite numbers are written as null.
inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline const char* to_string(Boundary b) { return b == Boundary::free ? "free" : "periodic"; }

inline const char* to_string(MarkKind k) {
  switch (k) {
    case MarkKind::discrete: return "discrete";
    case MarkKind::circle: return "circle";
    case MarkKind::interval: return "interval";
  }
  return "unknown";
}

inline Json marks_json(const MarkSpace& m) {
  Json j;
  j["kind"] = to_string(m.kind());
  j["total_mass"] = m.total_mass();
  if (m.kind() == MarkKind::discrete) {
    j["values"] = m.values();
    j["weights"] = m.weights();
  } else {
    j["lower"] = m.lower();
    j["upper"] = m.upper();
  }
  return j;
}

inline Json box_json(const Box& b) {
  Json j;
  j["lower"] = std::vector<double>(b.lower.begin(), b.lower.begin() + b.dim);
  j["upper"] = std::vector<double>(b.upper.begin(), b.upper.begin() + b.dim);
  return j;
}

inline Json model_json(const ModelSpec& model) {
  const auto& pot = *model.potential;
  Json j;
  j["name"] = pot.name();
  j["description"] = registry_entry(pot.name()).description;
  Json params = Json::object();
  for (const auto& [k, v] : pot.parameters()) params[k] = v;
  j["parameters"] = params;
  j["stability_B"] = pot.stability_B();
  j["range_R"] = pot.range() ? Json(*pot.range()) : Json(nullptr);
  j["dimension"] = model.space.dimension();
  j["sides"] = std::vector<double>(model.space.sides().begin(), model.space.sides().begin() + model.space.dimension());
  j["boundary"] = to_string(model.space.boundary());
  j["marks"] = marks_json(model.marks);
  j["z"] = model.z;
  j["beta"] = model.beta;
  return j;
}

inline Json scheme_json(const QuadratureScheme& s, const MarkSpace& marks) {
  Json j;
  j["kind"] = to_string(s.kind);
  j["points_per_axis"] = s.points_per_axis;
  j["samples"] = s.samples;
  j["seed"] = s.seed;
  j["mark_rule"] = to_string(s.resolved_mark_rule(marks));
  j["mark_nodes"] = s.mark_nodes;
  j["max_grid_dimensions"] = s.max_grid_dimensions;
  j["max_grid_nodes"] = s.max_grid_nodes;
  return j;
}

/// Reproduction data shared by every report.
struct Provenance {
  double C_beta = 0.0;
  double z_star = kInfinity;
  bool within_radius = true;
  int truncation_order = 0;
  double tail_bound = kInfinity;
  std::uint64_t seed = 0;
};

inline Json provenance_json(const Provenance& p, const QuadratureScheme& scheme, const MarkSpace& marks) {
  Json j;
  j["C_beta"] = number(p.C_beta);
  j["z_star"] = number(p.z_star);
  j["within_radius"] = p.within_radius;
  j["truncation_order"] = p.truncation_order;
  j["tail_bound"] = number(p.tail_bound);
  j["seed"] = p.seed;
  j["scheme"] = scheme_json(scheme, marks);
  j["rng"] = std::string(kRngDescription);
  j["correlation_convention"] = kCorrelationConvention;
  return j;
}

inline Json order_json(const OrderEstimate& o) {
  Json j;
  j["n"] = o.n;
  j["integral"] = number(o.value);
  j["error"] = number(o.error);
  j["method"] = to_string(o.method);
  j["points_per_axis"] = o.points_per_axis;
  j["evaluations"] = o.evaluations;
  return j;
}

inline Json expansion_json(const ExpansionReport& r) {
  Json j;
  j["truncation_order"] = r.truncation_order;
  j["coefficients"] = Json::array();
  j["coefficient_errors"] = Json::array();
  for (double c : r.coefficients) j["coefficients"].push_back(number(c));
  for (double c : r.coefficient_errors) j["coefficient_errors"].push_back(number(c));
  j["orders"] = Json::array();
  for (const auto& o : r.orders) j["orders"].push_back(order_json(o));
  j["log_Z"] = number(r.log_Z);
  j["integration_error"] = number(r.integration_error);
  j["tail_bound"] = number(r.tail_bound);
  j["z_star"] = number(r.z_star);
  j["C_beta"] = number(r.C_beta);
  j["within_radius"] = r.within_radius;
  return j;
}

inline Json chain_stats_json(const ChainStats& s) {
  static const char* names[] = {"birth", "death", "move", "mark"};
  Json j;
  j["samples"] = s.samples;
  Json rates = Json::object();
  Json proposed = Json::object();
  for (int k = 0; k < 4; ++k) {
    rates[names[k]] = s.acceptance_rate(k);
    proposed[names[k]] = s.proposed[static_cast<std::size_t>(k)];
  }
  j["acceptance_rates"] = rates;
  j["proposed"] = proposed;
  j["mean_n"] = s.mean_n();
  j["var_n"] = s.var_n();
  j["rho1"] = s.rho1();
  j["rho1_standard_error"] = s.rho1_standard_error();
  j["mean_energy"] = number(s.mean_energy());
  j["energy_standard_error"] = number(s.energy_standard_error());
  j["integrated_autocorrelation_time"] = s.iat;
  j["pair_r_max"] = s.pair_r_max;
  j["pair_histogram"] = s.pair_histogram;
  return j;
}

namespace detail {

inline void expect(bool cond, const std::string& what) {
  require(cond, ErrorKind::config_error, "report schema: " + what);
}

inline void expect_number(const Json& j, const char* key, const std::string& where, bool nullable = false) {
  expect(j.contains(key), where + " lacks '" + key + "'");
  const auto& v = j.at(key);
  expect(v.is_number() || (nullable && v.is_null()), where + "." + key + " is not a number");
}

inline void expect_array_of_numbers(const Json& j, const char* key, const std::string& where) {
  expect(j.contains(key) && j.at(key).is_array(), where + "." + key + " is not an array");
  for (const auto& v : j.at(key)) expect(v.is_number() || v.is_null(), where + "." + key + " holds a non-number");
}

}  // namespace detail

/// Checks a report document against the documented schema; throws ConfigError on mismatch.
inline void validate_report(const Json& r) {
  using detail::expect;
  using detail::expect_number;
  expect(r.is_object(), "report is not an object");
  expect(r.value("schema", "") == kReportSchema, "wrong or missing schema tag");
  expect(r.contains("command") && r.at("command").is_string(), "missing command");
  const std::string command = r.at("command");
  expect(command_names().count(command) != 0, "unknown command");
  expect(r.contains("model") && r.at("model").is_object(), "missing model");
  const auto& m = r.at("model");
  for (const char* key : {"name", "description", "boundary"}) expect(m.contains(key) && m.at(key).is_string(), std::string("model.") + key);
  expect(m.contains("parameters") && m.at("parameters").is_object(), "model.parameters");
  expect_number(m, "stability_B", "model");
  expect_number(m, "range_R", "model", true);
  expect_number(m, "z", "model");
  expect_number(m, "beta", "model");
  expect(m.contains("marks") && m.at("marks").is_object(), "model.marks");
  expect(r.contains("region") && r.at("region").is_object(), "missing region");
  expect(r.contains("provenance") && r.at("provenance").is_object(), "missing provenance");
  const auto& p = r.at("provenance");
  expect_number(p, "C_beta", "provenance", true);
  expect_number(p, "z_star", "provenance", true);
  expect(p.contains("within_radius") && p.at("within_radius").is_boolean(), "provenance.within_radius");
  expect_number(p, "truncation_order", "provenance");
  expect_number(p, "tail_bound", "provenance", true);
  expect_number(p, "seed", "provenance");
  expect(p.contains("scheme") && p.at("scheme").is_object(), "provenance.scheme");
  expect(p.contains("rng") && p.at("rng").is_string(), "provenance.rng");
  expect(r.contains("result") && r.at("result").is_object(), "missing result");
  const auto& res = r.at("result");
  if (command == "radius") {
    expect_number(res, "C_beta", "result");
    expect_number(res, "z_star", "result", true);
    expect(res.contains("within_radius") && res.at("within_radius").is_boolean(), "result.within_radius");
  } else if (command == "expand") {
    detail::expect_array_of_numbers(res, "coefficients", "result");
    expect_number(res, "log_Z", "result");
    expect_number(res, "tail_bound", "result", true);
  } else if (command == "correlate") {
    expect(res.contains("correlations") && res.at("correlations").is_array(), "result.correlations");
    for (const auto& c : res.at("correlations")) {
      expect_number(c, "value", "correlation");
      expect_number(c, "error", "correlation");
      expect(c.contains("points") && c.at("points").is_array(), "correlation.points");
    }
  } else if (command == "sample") {
    expect(res.contains("method") && res.at("method").is_string(), "result.method");
    expect(res.contains("stats") && res.at("stats").is_object(), "result.stats");
    expect_number(res.at("stats"), "rho1", "result.stats");
    expect_number(res.at("stats"), "samples", "result.stats");
  } else if (command == "verify") {
    expect(res.contains("checks") && res.at("checks").is_array(), "result.checks");
    for (const auto& c : res.at("checks")) {
      expect_number(c, "id", "check");
      expect(c.contains("name") && c.at("name").is_string(), "check.name");
      expect(c.contains("passed") && c.at("passed").is_boolean(), "check.passed");
      expect_number(c, "margin", "check", true);
    }
    expect(res.contains("all_passed") && res.at("all_passed").is_boolean(), "result.all_passed");
  }
}

}  // namespace mgibbs
