#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgibbs/error.hpp"
#include "mgibbs/gibbsmc.hpp"
#include "mgibbs/lpintegrate.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/registry.hpp"

namespace mgibbs {

using Json = nlohmann::ordered_json;

inline constexpr const char* kConfigSchema = "mgibbs.config/1";

struct ModelConfig {
  std::string name = "toy-repulsive-spin";
  ParameterMap parameters;
  int dimension = 1;
  std::vector<double> sides{1.0};
  Boundary boundary = Boundary::free;
  double z = 0.05;
  double beta = 1.0;
};

struct ExpansionConfig {
  std::optional<int> order;  // unset: chosen from `accuracy`
  double accuracy = 1e-6;
  int max_order = 8;
};

/// A point as written in a config; the mark is given by label (discrete) or value.
struct PointSpec {
  Position position{};
  int dimension = 0;
  std::optional<int> label;
  std::optional<double> value;
};

struct PointSetConfig {
  std::vector<PointSpec> points;
};

inline MarkedPoint resolve_point(const PointSpec& p, const ModelSpec& model) {
  require(p.dimension == model.space.dimension(), ErrorKind::config_error, "point dimension differs from the model");
  Mark m;
  if (p.value) m = model.marks.value_mark(*p.value);
  else if (model.marks.kind() == MarkKind::discrete) m = model.marks.label_mark(p.label.value_or(0));
  else fail(ErrorKind::config_error, "continuous marks need a 'value'");
  return MarkedPoint{p.position, m};
}

inline FiniteConfiguration resolve_points(const PointSetConfig& ps, const ModelSpec& model) {
  std::vector<MarkedPoint> pts;
  for (const auto& p : ps.points) pts.push_back(resolve_point(p, model));
  return FiniteConfiguration::canonicalize(std::move(pts));
}

struct SampleRunConfig {
  std::string method = "mcmc";  // mcmc | rejection
  std::size_t sweeps = 10000;
  std::size_t burn_in = 1000;
  std::size_t thinning = 10;
  std::size_t chains = 1;
  double p_birth = 0.3;
  double p_death = 0.3;
  double p_move = 0.3;
  double p_mark = 0.1;
  double step_fraction = 0.1;
  int histogram_bins = 0;
  double histogram_r_max = 0.0;
  std::string sample_file;
};

struct RunConfig {
  ModelConfig model;
  std::string command = "radius";
  std::optional<Box> region;  // unset: the whole model box
  ExpansionConfig expansion;
  QuadratureScheme scheme;
  std::vector<PointSetConfig> point_sets;
  SampleRunConfig sample;
  std::string verify_profile = "full";
  std::uint64_t seed = 1;
  std::size_t workers = 0;
  std::string out;
  std::string format = "report";

  Box resolved_region(const ModelSpec& model) const { return region.value_or(model.space.box()); }
};

inline const std::set<std::string>& command_names() {
  static const std::set<std::string> names{"radius", "expand", "correlate", "sample", "verify"};
  return names;
}

namespace detail {

[[noreturn]] inline void config_fail(const std::string& where, const std::string& what) {
  fail(ErrorKind::config_error, where + ": " + what);
}

inline void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) config_fail(where, "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) config_fail(where, "unknown key '" + key + "'");
  }
}

template <class T>
T get_as(const Json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_fail(where, e.what());
  }
}

template <class T>
void read(const Json& j, const char* key, T& out, const std::string& where) {
  if (j.contains(key)) out = get_as<T>(j.at(key), where + "." + key);
}

inline double read_number(const Json& j, const std::string& where) {
  if (!j.is_number()) config_fail(where, "expected a number");
  return j.get<double>();
}

inline std::vector<double> read_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) config_fail(where, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_number(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

inline MarkRule parse_mark_rule(const std::string& s, const std::string& where) {
  if (s == "exact_discrete_sum") return MarkRule::exact_discrete_sum;
  if (s == "periodic_trapezoid") return MarkRule::periodic_trapezoid;
  if (s == "gauss") return MarkRule::gauss;
  config_fail(where, "unknown mark rule '" + s + "'");
}

inline ModelConfig parse_model(const Json& j) {
  check_keys(j, "model", {"name", "parameters", "dimension", "sides", "boundary", "z", "beta"});
  ModelConfig m;
  read(j, "name", m.name, "model");
  if (j.contains("parameters")) {
    const auto& p = j.at("parameters");
    if (!p.is_object()) config_fail("model.parameters", "expected an object");
    for (const auto& [key, value] : p.items()) m.parameters[key] = read_number(value, "model.parameters." + key);
  }
  read(j, "dimension", m.dimension, "model");
  if (j.contains("sides")) m.sides = read_vector(j.at("sides"), "model.sides");
  else m.sides.assign(static_cast<std::size_t>(std::max(m.dimension, 1)), 1.0);
  if (j.contains("boundary")) {
    const auto b = get_as<std::string>(j.at("boundary"), "model.boundary");
    if (b == "free") m.boundary = Boundary::free;
    else if (b == "periodic") m.boundary = Boundary::periodic;
    else config_fail("model.boundary", "expected 'free' or 'periodic'");
  }
  if (j.contains("z")) m.z = read_number(j.at("z"), "model.z");
  if (j.contains("beta")) m.beta = read_number(j.at("beta"), "model.beta");
  if (m.dimension < 1 || m.dimension > kMaxDimension) config_fail("model.dimension", "must be 1, 2 or 3");
  if (static_cast<int>(m.sides.size()) != m.dimension) config_fail("model.sides", "length must equal the dimension");
  return m;
}

inline QuadratureScheme parse_scheme(const Json& j) {
  check_keys(j, "scheme", {"kind", "points_per_axis", "samples", "mark_rule", "mark_nodes", "max_grid_dimensions",
                           "max_grid_nodes"});
  QuadratureScheme s;
  if (j.contains("kind")) {
    const auto k = get_as<std::string>(j.at("kind"), "scheme.kind");
    if (k == "tensor_grid") s.kind = SchemeKind::tensor_grid;
    else if (k == "monte_carlo") s.kind = SchemeKind::monte_carlo;
    else config_fail("scheme.kind", "expected 'tensor_grid' or 'monte_carlo'");
  }
  read(j, "points_per_axis", s.points_per_axis, "scheme");
  read(j, "samples", s.samples, "scheme");
  if (j.contains("mark_rule")) s.mark_rule = parse_mark_rule(get_as<std::string>(j.at("mark_rule"), "scheme.mark_rule"), "scheme.mark_rule");
  read(j, "mark_nodes", s.mark_nodes, "scheme");
  read(j, "max_grid_dimensions", s.max_grid_dimensions, "scheme");
  if (j.contains("max_grid_nodes")) s.max_grid_nodes = read_number(j.at("max_grid_nodes"), "scheme.max_grid_nodes");
  return s;
}

inline PointSpec parse_point(const Json& j, const std::string& where) {
  check_keys(j, where, {"position", "label", "value"});
  if (!j.contains("position")) config_fail(where, "missing 'position'");
  const auto pos = read_vector(j.at("position"), where + ".position");
  if (pos.empty() || pos.size() > static_cast<std::size_t>(kMaxDimension)) config_fail(where, "bad position length");
  PointSpec p;
  p.dimension = static_cast<int>(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) p.position[i] = pos[i];
  if (j.contains("label")) p.label = get_as<int>(j.at("label"), where + ".label");
  if (j.contains("value")) p.value = read_number(j.at("value"), where + ".value");
  return p;
}

inline SampleRunConfig parse_sample(const Json& j) {
  check_keys(j, "sample", {"method", "sweeps", "burn_in", "thinning", "chains", "p_birth", "p_death", "p_move",
                           "p_mark", "step_fraction", "histogram_bins", "histogram_r_max", "sample_file"});
  SampleRunConfig s;
  read(j, "method", s.method, "sample");
  read(j, "sweeps", s.sweeps, "sample");
  read(j, "burn_in", s.burn_in, "sample");
  read(j, "thinning", s.thinning, "sample");
  read(j, "chains", s.chains, "sample");
  read(j, "p_birth", s.p_birth, "sample");
  read(j, "p_death", s.p_death, "sample");
  read(j, "p_move", s.p_move, "sample");
  read(j, "p_mark", s.p_mark, "sample");
  read(j, "step_fraction", s.step_fraction, "sample");
  read(j, "histogram_bins", s.histogram_bins, "sample");
  read(j, "histogram_r_max", s.histogram_r_max, "sample");
  read(j, "sample_file", s.sample_file, "sample");
  if (s.method != "mcmc" && s.method != "rejection") config_fail("sample.method", "expected 'mcmc' or 'rejection'");
  if (s.chains < 1) config_fail("sample.chains", "must be >= 1");
  if (s.sweeps < 1) config_fail("sample.sweeps", "must be >= 1");
  return s;
}

}  // namespace detail

/// Parses a configuration document; every problem is reported as ConfigError.
inline RunConfig parse_config(const Json& j) {
  using namespace detail;
  check_keys(j, "config", {"schema", "model", "command", "region", "expansion", "scheme", "correlate", "sample",
                           "verify", "seed", "workers", "output"});
  if (j.contains("schema") && j.at("schema") != kConfigSchema) {
    config_fail("config.schema", std::string("expected '") + kConfigSchema + "'");
  }
  RunConfig c;
  if (j.contains("model")) c.model = parse_model(j.at("model"));
  read(j, "command", c.command, "config");
  if (j.contains("region")) {
    const auto& r = j.at("region");
    check_keys(r, "region", {"lower", "upper"});
    if (!r.contains("lower") || !r.contains("upper")) config_fail("region", "needs 'lower' and 'upper'");
    const auto lo = read_vector(r.at("lower"), "region.lower");
    const auto hi = read_vector(r.at("upper"), "region.upper");
    if (lo.size() != hi.size() || lo.empty()) config_fail("region", "lower and upper must have equal nonzero length");
    try {
      c.region = make_box(lo, hi);
    } catch (const Error& e) {
      config_fail("region", e.what());
    }
  }
  if (j.contains("expansion")) {
    const auto& e = j.at("expansion");
    check_keys(e, "expansion", {"order", "accuracy", "max_order"});
    if (e.contains("order")) c.expansion.order = get_as<int>(e.at("order"), "expansion.order");
    if (e.contains("accuracy")) c.expansion.accuracy = read_number(e.at("accuracy"), "expansion.accuracy");
    read(e, "max_order", c.expansion.max_order, "expansion");
    if (c.expansion.order && *c.expansion.order < 1) config_fail("expansion.order", "must be >= 1");
    if (!(c.expansion.accuracy > 0.0)) config_fail("expansion.accuracy", "must be positive");
    if (c.expansion.max_order < 1) config_fail("expansion.max_order", "must be >= 1");
  }
  if (j.contains("scheme")) c.scheme = parse_scheme(j.at("scheme"));
  if (j.contains("correlate")) {
    const auto& cj = j.at("correlate");
    check_keys(cj, "correlate", {"point_sets"});
    if (cj.contains("point_sets")) {
      const auto& sets = cj.at("point_sets");
      if (!sets.is_array()) config_fail("correlate.point_sets", "expected an array of point arrays");
      for (std::size_t s = 0; s < sets.size(); ++s) {
        const std::string where = "correlate.point_sets[" + std::to_string(s) + "]";
        if (!sets[s].is_array()) config_fail(where, "expected an array of points");
        PointSetConfig ps;
        for (std::size_t i = 0; i < sets[s].size(); ++i) ps.points.push_back(parse_point(sets[s][i], where + "[" + std::to_string(i) + "]"));
        c.point_sets.push_back(std::move(ps));
      }
    }
  }
  if (j.contains("sample")) c.sample = parse_sample(j.at("sample"));
  if (j.contains("verify")) {
    const auto& v = j.at("verify");
    check_keys(v, "verify", {"profile"});
    read(v, "profile", c.verify_profile, "verify");
  }
  read(j, "seed", c.seed, "config");
  read(j, "workers", c.workers, "config");
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, "output", {"path", "format"});
    read(o, "path", c.out, "output");
    read(o, "format", c.format, "output");
  }
  return c;
}

inline RunConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config_error, std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::config_error, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

inline ModelSpec build_model(const RunConfig& c) {
  try {
    Position sides{};
    for (int i = 0; i < c.model.dimension; ++i) sides[i] = c.model.sides[static_cast<std::size_t>(i)];
    return make_model(c.model.name, c.model.parameters, PositionSpace(c.model.dimension, sides, c.model.boundary),
                      c.model.z, c.model.beta);
  } catch (const Error& e) {
    fail(ErrorKind::config_error, std::string("model: ") + e.what());
  }
}

/// Command-specific checks run before any computation.
inline void validate_config(const RunConfig& c) {
  require(command_names().count(c.command) != 0, ErrorKind::config_error, "unknown command '" + c.command + "'");
  require(c.format == "report" || c.format == "csv", ErrorKind::config_error, "format must be 'report' or 'csv'");
  require(c.verify_profile == "quick" || c.verify_profile == "full", ErrorKind::config_error,
          "verify.profile must be 'quick' or 'full'");
  const ModelSpec model = build_model(c);
  const Box region = c.resolved_region(model);
  require(region.dim == model.space.dimension() && region.inside(model.space.box()), ErrorKind::config_error,
          "region must lie inside the model box");
  try {
    c.scheme.validate(model.marks);
  } catch (const Error& e) {
    fail(ErrorKind::config_error, std::string("scheme: ") + e.what());
  }
  if (c.command == "correlate") {
    require(!c.point_sets.empty(), ErrorKind::config_error, "correlate needs correlate.point_sets");
    for (const auto& ps : c.point_sets) {
      FiniteConfiguration pts;
      try {
        pts = resolve_points(ps, model);
      } catch (const Error& e) {
        fail(ErrorKind::config_error, std::string("correlate: ") + e.what());
      }
      for (const auto& p : pts) {
        require(region.contains(p.position), ErrorKind::config_error, "correlation point outside the region");
      }
    }
  }
  if (c.command == "sample") {
    SamplerConfig s;
    s.p_birth = c.sample.p_birth;
    s.p_death = c.sample.p_death;
    s.p_move = c.sample.p_move;
    s.p_mark = c.sample.p_mark;
    s.thinning = c.sample.thinning;
    s.step_fraction = c.sample.step_fraction;
    try {
      s.validate();
    } catch (const Error& e) {
      fail(ErrorKind::config_error, std::string("sample: ") + e.what());
    }
  }
}

}  // namespace mgibbs
