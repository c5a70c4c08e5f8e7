#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mgibbs/error.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/potential.hpp"

namespace mgibbs {

using ParameterMap = std::map<std::string, double>;

/// A named built-in interaction with its default parameters and mark space.
struct RegistryEntry {
  std::string name;
  std::string description;
  ParameterMap defaults;
  std::function<MarkSpace(const ParameterMap&)> default_marks;
  std::function<PairPotential(const ParameterMap&, int dimension)> build;
};

namespace detail {

inline ParameterMap merge_parameters(const RegistryEntry& entry, const ParameterMap& overrides) {
  ParameterMap p = entry.defaults;
  for (const auto& [key, value] : overrides) {
    require(p.count(key) != 0, ErrorKind::invalid_argument,
            "unknown parameter '" + key + "' for potential " + entry.name);
    require(std::isfinite(value), ErrorKind::invalid_argument, "parameter '" + key + "' must be finite");
    p[key] = value;
  }
  return p;
}

/// A r^{-(d+1)} inside the core radius, continued by an exponential tail of length ell.
inline double core_profile(double r, double amplitude, double core, double ell, int dim) {
  if (r <= 0.0) return kInfinity;
  if (r < core) return amplitude * std::pow(r, -(dim + 1));
  return amplitude * std::pow(core, -(dim + 1)) * std::exp(-(r - core) / ell);
}

inline MarkSpace spin_marks(const ParameterMap&) { return MarkSpace::discrete({1.0, -1.0}, {0.5, 0.5}); }

inline std::vector<RegistryEntry> build_registry() {
  std::vector<RegistryEntry> r;

  r.push_back({"zero", "ideal gas, phi = 0", {}, [](const ParameterMap&) { return MarkSpace::single(); },
               [](const ParameterMap& p, int) {
                 PairPotential::Declaration d{"zero", p, 0.0, 0.0, 0.0, {}};
                 return PairPotential(d, [](double, const Mark&, const Mark&) { return 0.0; });
               }});

  r.push_back({"constant", "phi = value for every pair (for falsification tests)", {{"value", -1.0}, {"B", 0.0}},
               [](const ParameterMap&) { return MarkSpace::single(); },
               [](const ParameterMap& p, int) {
                 const double v = p.at("value");
                 PairPotential::Declaration d{"constant", p, p.at("B"), std::nullopt, std::min(v, 0.0), {}};
                 return PairPotential(d, [v](double, const Mark&, const Mark&) { return v; });
               }});

  r.push_back({"toy-repulsive-spin", "(1 + c s t) A exp(-r^2/l^2), marks +-1",
               {{"amplitude", 1.0}, {"coupling", 0.5}, {"length", 0.2}, {"B", 0.0}}, spin_marks,
               [](const ParameterMap& p, int) {
                 const double a = p.at("amplitude");
                 const double c = p.at("coupling");
                 const double l = p.at("length");
                 require(l > 0.0, ErrorKind::invalid_argument, "length must be positive");
                 const double lb = std::min(0.0, a * (1.0 - std::abs(c)));
                 PairPotential::Declaration d{"toy-repulsive-spin", p, p.at("B"), std::nullopt, lb, {}};
                 return PairPotential(d, [a, c, l](double r, const Mark& s, const Mark& t) {
                   return (1.0 + c * s.value * t.value) * a * std::exp(-(r * r) / (l * l));
                 });
               }});

  r.push_back({"toy-repulsive-spin-cut", "toy-repulsive-spin set to 0 for r >= cutoff",
               {{"amplitude", 1.0}, {"coupling", 0.5}, {"length", 0.2}, {"cutoff", 0.3}, {"B", 0.0}}, spin_marks,
               [](const ParameterMap& p, int) {
                 const double a = p.at("amplitude");
                 const double c = p.at("coupling");
                 const double l = p.at("length");
                 const double rc = p.at("cutoff");
                 require(l > 0.0 && rc > 0.0, ErrorKind::invalid_argument, "length and cutoff must be positive");
                 const double lb = std::min(0.0, a * (1.0 - std::abs(c)));
                 PairPotential::Declaration d{"toy-repulsive-spin-cut", p, p.at("B"), rc, lb, {rc}};
                 return PairPotential(d, [a, c, l](double r, const Mark& s, const Mark& t) {
                   return (1.0 + c * s.value * t.value) * a * std::exp(-(r * r) / (l * l));
                 });
               }});

  r.push_back({"hard-core", "phi = +inf for r < r0, else 0", {{"r0", 0.1}},
               [](const ParameterMap&) { return MarkSpace::single(); },
               [](const ParameterMap& p, int) {
                 const double r0 = p.at("r0");
                 require(r0 > 0.0, ErrorKind::invalid_argument, "r0 must be positive");
                 PairPotential::Declaration d{"hard-core", p, 0.0, r0, 0.0, {r0}};
                 return PairPotential(d, [](double, const Mark&, const Mark&) { return kInfinity; });
               }});

  r.push_back({"planar-rotator", "Phi(r) - J0 exp(-r/l) cos(theta_x - theta_y), angle marks",
               {{"A", 0.01}, {"core", 0.2}, {"tail", 0.1}, {"J0", 0.2}, {"length", 0.1}, {"B", 0.0}, {"mass", 1.0}},
               [](const ParameterMap& p) { return MarkSpace::circle(p.at("mass")); },
               [](const ParameterMap& p, int dim) {
                 const double a = p.at("A"), core = p.at("core"), tail = p.at("tail");
                 const double j0 = p.at("J0"), l = p.at("length");
                 require(a > 0.0 && core > 0.0 && tail > 0.0 && l > 0.0, ErrorKind::invalid_argument,
                         "rotator lengths and amplitude must be positive");
                 PairPotential::Declaration d{"planar-rotator", p, p.at("B"), std::nullopt, -std::abs(j0), {core}};
                 return PairPotential(d, [=](double r, const Mark& s, const Mark& t) {
                   const double phi = core_profile(r, a, core, tail, dim);
                   if (phi == kInfinity) return kInfinity;
                   return phi - j0 * std::exp(-r / l) * std::cos(s.value - t.value);
                 });
               }});

  r.push_back({"ferrofluid", "Phi(r) + J0 exp(-r/l) s_x s_y, marks in [-1, 1]",
               {{"A", 0.01}, {"core", 0.2}, {"tail", 0.1}, {"J0", 0.2}, {"length", 0.1}, {"B", 0.0}, {"mass", 1.0}},
               [](const ParameterMap& p) { return MarkSpace::interval(-1.0, 1.0, p.at("mass")); },
               [](const ParameterMap& p, int dim) {
                 const double a = p.at("A"), core = p.at("core"), tail = p.at("tail");
                 const double j0 = p.at("J0"), l = p.at("length");
                 require(a > 0.0 && core > 0.0 && tail > 0.0 && l > 0.0, ErrorKind::invalid_argument,
                         "ferrofluid lengths and amplitude must be positive");
                 PairPotential::Declaration d{"ferrofluid", p, p.at("B"), std::nullopt, -std::abs(j0), {core}};
                 return PairPotential(d, [=](double r, const Mark& s, const Mark& t) {
                   const double phi = core_profile(r, a, core, tail, dim);
                   if (phi == kInfinity) return kInfinity;
                   return phi + j0 * std::exp(-r / l) * s.value * t.value;
                 });
               }});

  r.push_back({"continuum-potts", "eps (1 - r/r2)_+ (1 - delta) plus hard core r1, q labels",
               {{"epsilon", 1.0}, {"r1", 0.05}, {"r2", 0.2}, {"q", 3.0}, {"B", 0.0}},
               [](const ParameterMap& p) {
                 const int q = static_cast<int>(p.at("q"));
                 require(q >= 1 && q == p.at("q"), ErrorKind::invalid_argument, "q must be a positive integer");
                 std::vector<double> values, weights;
                 for (int i = 0; i < q; ++i) {
                   values.push_back(i);
                   weights.push_back(1.0 / q);
                 }
                 return MarkSpace::discrete(values, weights);
               },
               [](const ParameterMap& p, int) {
                 const double eps = p.at("epsilon"), r1 = p.at("r1"), r2 = p.at("r2");
                 require(r1 >= 0.0 && r2 > 0.0, ErrorKind::invalid_argument, "radii must be positive");
                 const double range = std::max(r1, r2);
                 std::vector<double> bps{r2};
                 if (r1 > 0.0) bps.push_back(r1);
                 PairPotential::Declaration d{"continuum-potts", p, p.at("B"), range, std::min(0.0, eps), bps};
                 return PairPotential(d, [=](double r, const Mark& s, const Mark& t) {
                   if (r < r1) return kInfinity;
                   if (r >= r2 || s.label == t.label) return 0.0;
                   return eps * (1.0 - r / r2);
                 });
               }});
  return r;
}

}  // namespace detail

inline const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = detail::build_registry();
  return entries;
}

inline const RegistryEntry& registry_entry(const std::string& name) {
  for (const auto& e : registry()) {
    if (e.name == name) return e;
  }
  fail(ErrorKind::invalid_argument, "unknown potential '" + name + "'");
}

inline std::shared_ptr<const PairPotential> make_potential(const std::string& name, const ParameterMap& overrides,
                                                           int dimension) {
  const auto& entry = registry_entry(name);
  return std::make_shared<const PairPotential>(entry.build(detail::merge_parameters(entry, overrides), dimension));
}

inline MarkSpace default_marks(const std::string& name, const ParameterMap& overrides) {
  const auto& entry = registry_entry(name);
  return entry.default_marks(detail::merge_parameters(entry, overrides));
}

/// A ModelSpec built from the registry with the entry's default mark space.
inline ModelSpec make_model(const std::string& name, const ParameterMap& overrides, PositionSpace space, double z,
                            double beta) {
  ModelSpec m;
  m.space = space;
  m.marks = default_marks(name, overrides);
  m.z = z;
  m.beta = beta;
  m.potential = make_potential(name, overrides, space.dimension());
  m.validate();
  return m;
}

/// The default acceptance model on [0, 1].
inline ModelSpec toy_model(double z = 0.05, double beta = 1.0) {
  return make_model("toy-repulsive-spin", {}, PositionSpace::unit_interval(), z, beta);
}

inline ModelSpec toy_cut_model(double z = 0.05, double beta = 1.0, double cutoff = 0.3) {
  return make_model("toy-repulsive-spin-cut", {{"cutoff", cutoff}}, PositionSpace::unit_interval(), z, beta);
}

inline ModelSpec ideal_model(double z = 0.5, PositionSpace space = PositionSpace::unit_interval()) {
  return make_model("zero", {}, space, z, 1.0);
}

}  // namespace mgibbs
