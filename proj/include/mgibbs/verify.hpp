#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mgibbs/combinat.hpp"
#include "mgibbs/conditions.hpp"
#include "mgibbs/expansion.hpp"
#include "mgibbs/gibbsmc.hpp"
#include "mgibbs/lpintegrate.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/oracle.hpp"
#include "mgibbs/registry.hpp"
#include "mgibbs/starcalc.hpp"
#include "mgibbs/tree_bound.hpp"
#include "mgibbs/ursell.hpp"

namespace mgibbs {

/// Outcome of one property check. `margin` is the slack to failure in the check's own
/// units (tolerance minus observed error, or sigmas to spare); negative when failing.
struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double margin = 0.0;
  std::string detail;
};

/// Sample sizes for the property suite.
struct VerifyProfile {
  std::string name = "full";
  int random_configs = 500;
  int tree_bound_configs = 1000;
  int q_instances = 200;
  int integral_max_n = 4;
  int integral_grid = 24;
  int majorant_max_n = 6;
  std::size_t sampler_draws = 100000;
  std::size_t dlr_samples = 100000;
  std::size_t locality_trials = 1000;
  std::size_t star_mc_samples = 8000;
  std::size_t poisson_draws = 20000;

  static VerifyProfile full() { return {}; }

  static VerifyProfile quick() {
    VerifyProfile p;
    p.name = "quick";
    p.random_configs = 60;
    p.tree_bound_configs = 100;
    p.q_instances = 20;
    p.integral_max_n = 3;
    p.integral_grid = 12;
    p.majorant_max_n = 4;
    p.sampler_draws = 20000;
    p.dlr_samples = 5000;
    p.locality_trials = 200;
    p.star_mc_samples = 2000;
    p.poisson_draws = 5000;
    return p;
  }

  static VerifyProfile named(const std::string& name) {
    if (name == "quick") return quick();
    require(name == "full", ErrorKind::invalid_argument, "unknown verify profile '" + name + "'");
    return full();
  }
};

namespace detail {

/// |a - b| / max(1, |b|).
inline double unit_rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline double strict_rel(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline std::vector<MarkedPoint> random_points(const ModelSpec& model, int n, Rng& rng) {
  std::vector<MarkedPoint> pts;
  const Box box = model.space.box();
  while (static_cast<int>(pts.size()) < n) {
    auto p = uniform_point(model, box, rng);
    bool clash = false;
    for (const auto& q : pts) clash = clash || q.position == p.position;
    if (!clash) pts.push_back(p);
  }
  return pts;
}

inline ConfigFunctional random_functional(int n, Rng& rng, bool in_ideal) {
  ConfigFunctional f(n);
  for (SubsetMask s = 0;; ++s) {
    f[s] = 2.0 * uniform01(rng) - 1.0;
    if (s == f.full()) break;
  }
  if (in_ideal) f[0] = 0.0;
  return f;
}

inline double max_abs_diff(const ConfigFunctional& a, const ConfigFunctional& b, SubsetMask skip = 0) {
  double m = 0.0;
  for (SubsetMask s = 0;; ++s) {
    if ((s & skip) == 0) m = std::max(m, unit_rel(a[s], b[s]));
    if (s == a.full()) break;
  }
  return m;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline CheckResult make_result(int id, std::string name, bool passed, double margin, std::string detail) {
  return CheckResult{id, std::move(name), passed, margin, std::move(detail)};
}

}  // namespace detail

inline CheckResult check_cayley(const VerifyProfile&) {
  bool ok = true;
  double margin = kInfinity;
  std::ostringstream detail;
  for (int n = 2; n <= 7; ++n) {
    std::set<LabeledGraph> distinct;
    std::uint64_t valid = 0, total = 0;
    for_each_tree(n, [&](const LabeledGraph& t) {
      ++total;
      if (static_cast<int>(t.edges.size()) == n - 1 && connected_components(t).size() == 1) ++valid;
      distinct.insert(t);
    });
    std::uint64_t expected = 1;
    for (int i = 0; i < n - 2; ++i) expected *= static_cast<std::uint64_t>(n);
    const double bound = std::exp(static_cast<double>(n)) * factorial(n);
    ok = ok && total == expected && valid == expected && distinct.size() == expected && cayley_count(n) == expected &&
         static_cast<double>(expected) < bound;
    margin = std::min(margin, std::log(bound / static_cast<double>(expected)));
    detail << "n=" << n << ":" << distinct.size() << " ";
  }
  return detail::make_result(1, "cayley_count", ok, margin, detail.str());
}

inline CheckResult check_connected_graphs(const VerifyProfile&) {
  const long expected[] = {1, 1, 4, 38, 728};
  bool ok = true;
  std::ostringstream detail;
  for (int n = 1; n <= 5; ++n) {
    const auto graphs = enumerate_connected_graphs(n);
    const std::set<LabeledGraph> distinct(graphs.begin(), graphs.end());
    const long oracle = oracle::connected_graph_count(n);
    ok = ok && static_cast<long>(graphs.size()) == oracle && oracle == expected[n - 1] && distinct.size() == graphs.size();
    detail << "n=" << n << ":" << graphs.size() << "/" << oracle << " ";
  }
  return detail::make_result(2, "connected_graph_counts", ok, 0.0, detail.str());
}

inline CheckResult check_ursell_triangle(const VerifyProfile& p, std::uint64_t seed) {
  const ModelSpec model = toy_model(0.05, 1.0);
  double worst = 0.0;
  for (int i = 0; i < p.random_configs; ++i) {
    Rng rng = make_stream(seed, {3, static_cast<std::uint64_t>(i)});
    const int n = 1 + i % 5;
    const auto pts = detail::random_points(model, n, rng);
    const double direct = ursell_direct(pts, model);
    const double table = ursell_table(pts, model).full();
    const auto logb = star_log(boltzmann_functional(pts, model));
    const double viaLog = logb[logb.full()];
    worst = std::max({worst, detail::unit_rel(table, direct), detail::unit_rel(viaLog, direct)});
  }
  const double tol = 1e-10;
  return detail::make_result(3, "ursell_triangle", worst <= tol, tol - worst,
                             "max rel err " + detail::fmt(worst) + " over " + std::to_string(p.random_configs));
}

inline CheckResult check_cluster_decomposition(const VerifyProfile& p, std::uint64_t seed) {
  const ModelSpec model = toy_model(0.05, 1.0);
  double worst = 0.0;
  for (int i = 0; i < p.random_configs; ++i) {
    Rng rng = make_stream(seed, {4, static_cast<std::uint64_t>(i)});
    const int n = 1 + i % 8;
    const auto pts = detail::random_points(model, n, rng);
    const auto table = ursell_table(pts, model);
    worst = std::max(worst, detail::max_abs_diff(star_exp(table.values), boltzmann_functional(pts, model)));
  }
  const double tol = 1e-10;
  return detail::make_result(4, "cluster_decomposition", worst <= tol, tol - worst,
                             "max rel err " + detail::fmt(worst) + " over " + std::to_string(p.random_configs));
}

/// Models with different interaction shapes for the bound checks.
inline std::vector<ModelSpec> bound_test_models() {
  const auto unit = PositionSpace::unit_interval();
  return {toy_model(0.05, 1.0), toy_model(0.05, 3.0), make_model("continuum-potts", {}, unit, 0.05, 1.0),
          make_model("planar-rotator", {}, unit, 0.05, 1.0)};
}

inline CheckResult check_tree_graph_bound(const VerifyProfile& p, std::uint64_t seed) {
  const auto models = bound_test_models();
  int violations = 0;
  double margin = kInfinity;
  for (int i = 0; i < p.tree_bound_configs; ++i) {
    const ModelSpec& model = models[static_cast<std::size_t>(i) % models.size()];
    Rng rng = make_stream(seed, {5, static_cast<std::uint64_t>(i)});
    const int n = 2 + (i / static_cast<int>(models.size())) % 5;
    const auto pts = detail::random_points(model, n, rng);
    const double k = std::abs(ursell_value(pts, model));
    const double q = tree_bound_Q(pts.front(), std::span(pts).subspan(1), model);
    if (k > q * (1.0 + 1e-12)) ++violations;
    if (q > 0.0) margin = std::min(margin, (q * (1.0 + 1e-12) - k) / q);
  }
  return detail::make_result(5, "tree_graph_bound", violations == 0, margin,
                             std::to_string(violations) + " violations in " + std::to_string(p.tree_bound_configs));
}

inline CheckResult check_q_closed_form(const VerifyProfile& p, std::uint64_t seed) {
  const auto models = bound_test_models();
  double worst = 0.0;
  for (int i = 0; i < p.q_instances; ++i) {
    const ModelSpec& model = models[static_cast<std::size_t>(i) % models.size()];
    Rng rng = make_stream(seed, {6, static_cast<std::uint64_t>(i)});
    const int m = 1 + static_cast<int>(uniform01(rng) * 3);
    const int n = static_cast<int>(uniform01(rng) * (8 - m));
    const auto pts = detail::random_points(model, m + n, rng);
    const std::span<const MarkedPoint> omega(pts.data(), static_cast<std::size_t>(m));
    const std::span<const MarkedPoint> zeta(pts.data() + m, static_cast<std::size_t>(n));
    const double closed = tree_bound_Q(omega, zeta, model);
    for (auto policy : {AnchorPolicy::lowest_index, AnchorPolicy::highest_index, AnchorPolicy::stability}) {
      worst = std::max(worst, detail::strict_rel(tree_bound_recursive(omega, zeta, model, policy), closed));
    }
  }
  const double tol = 1e-10;
  return detail::make_result(6, "q_closed_form", worst <= tol, tol - worst,
                             "max rel err " + detail::fmt(worst) + " over " + std::to_string(p.q_instances));
}

/// int Q({x}, y_1..y_n) <= e^{2 beta B (n+1)} C^{n-1} (n+1)^{n-1} int |f(x, y)|, both sides on
/// the same midpoint grid, with the grid error estimates added to the right.
inline CheckResult check_integral_tree_bound(const VerifyProfile& p) {
  const ModelSpec model = toy_model(0.05, 1.0);
  const double C = convergence_radius(model).C_beta;
  const double B = model.potential->stability_B();
  QuadratureScheme scheme;
  scheme.points_per_axis = p.integral_grid;
  const Domain domain{model.space.box()};
  const std::vector<MarkedPoint> anchors{point1(0.5, model.marks.label_mark(0)), point1(0.05, model.marks.label_mark(1))};
  int violations = 0;
  double margin = kInfinity;
  std::ostringstream detail;
  for (const auto& x : anchors) {
    const Integrand absf = [&](std::span<const MarkedPoint> ys) { return std::abs(mayer_pair(x, ys[0], model)); };
    const auto mass = integrate_order(absf, model, domain, 1, scheme);
    for (int n = 1; n <= p.integral_max_n; ++n) {
      const Integrand q = [&](std::span<const MarkedPoint> ys) { return tree_bound_Q(x, ys, model); };
      const auto lhs = integrate_order(q, model, domain, n, scheme);
      const double factor = std::exp(2.0 * model.beta * B * (n + 1)) * std::pow(C, n - 1) * std::pow(n + 1.0, n - 1);
      const double rhs = factor * mass.value;
      const double budget = lhs.error + factor * mass.error;
      if (lhs.value > rhs + budget) ++violations;
      margin = std::min(margin, (rhs + budget - lhs.value) / rhs);
      if (x == anchors.front()) detail << "n=" << n << " lhs/rhs=" << detail::fmt(lhs.value / rhs) << " ";
    }
  }
  return detail::make_result(7, "integral_tree_bound", violations == 0, margin, detail.str());
}

inline CheckResult check_convergence_certificate(const VerifyProfile& p) {
  ModelSpec model = toy_model(0.05, 1.0);
  const auto radius = convergence_radius(model);
  bool ok = radius.z_star > 0.0 && std::isfinite(radius.z_star);
  model.z = 0.5 * radius.z_star;
  const Box region = model.space.box();
  const double mass = model.intensity_mass(region);
  const auto terms = absolute_cluster_terms(model, region, p.majorant_max_n, QuadratureScheme{});
  double margin = kInfinity;
  double partial = 0.0, partial_majorant = 0.0, previous = -1.0;
  std::ostringstream detail;
  detail << "z*=" << detail::fmt(radius.z_star) << " ";
  for (const auto& t : terms) {
    const double maj = majorant_term(model, radius.C_beta, t.n, mass);
    partial += t.value;
    partial_majorant += maj;
    ok = ok && t.value + t.error < maj && partial > previous && partial < partial_majorant;
    previous = partial;
    margin = std::min(margin, (maj - t.value - t.error) / maj);
    detail << "n=" << t.n << " term/maj=" << detail::fmt(t.value / maj) << " ";
  }
  return detail::make_result(8, "convergence_certificate", ok, margin, detail.str());
}

inline CheckResult check_partition_cross(const VerifyProfile&) {
  const ModelSpec model = toy_model(0.05, 1.0);
  const Box region = model.space.box();
  const double C = convergence_radius(model).C_beta;
  QuadratureScheme scheme;
  const auto expansion = log_partition_truncated(model, region, 4, scheme, C);
  const auto direct = partition_direct_truncated(model, region, FiniteConfiguration{}, 8, scheme);
  const double x = model.z * model.intensity_mass(region) * std::exp(model.beta * model.potential->stability_B());
  const double direct_tail = std::pow(x, 9) / factorial(9) * std::exp(x);
  const double diff = std::abs(expansion.log_Z - std::log(direct.value));
  const double budget =
      expansion.tail_bound + expansion.integration_error + (direct.error + direct_tail) / (direct.value - direct.error - direct_tail);
  const bool ok = diff <= budget && budget <= 1e-3;
  return detail::make_result(9, "partition_cross_check", ok, std::min(budget - diff, 1e-3 - budget),
                             "diff " + detail::fmt(diff) + " budget " + detail::fmt(budget));
}

namespace detail {

/// A test functional psi with singleton part g and pair part h; zero on larger sets.
struct PairFunctional {
  static double g(const MarkedPoint& x) { return 0.4 + 0.2 * x.mark.value * x.position[0]; }
  static double h(const MarkedPoint& x, const MarkedPoint& y) {
    const double r = x.position[0] - y.position[0];
    return -0.3 * (1.0 + 0.5 * x.mark.value * y.mark.value) * std::exp(-r * r / 0.1);
  }
  static constexpr double g_max = 0.6;
  static constexpr double h_max = 0.45;

  static ConfigFunctional table(std::span<const MarkedPoint> pts) {
    const int n = static_cast<int>(pts.size());
    ConfigFunctional f(n);
    for (int i = 0; i < n; ++i) {
      f[1u << i] = g(pts[static_cast<std::size_t>(i)]);
      for (int j = i + 1; j < n; ++j) f[(1u << i) | (1u << j)] = h(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
    }
    return f;
  }

  /// (exp* psi) of the constant majorant |g| <= a, |h| <= b on an n-set: sum over matchings.
  static double majorant_exp(int n) {
    double total = 0.0;
    for (int k = 0; 2 * k <= n; ++k) {
      total += factorial(n) / (factorial(k) * factorial(n - 2 * k) * std::pow(2.0, k)) * std::pow(g_max, n - 2 * k) *
               std::pow(h_max, k);
    }
    return total;
  }
};

/// sum_{n > N} z^n/n! m^n (exp* of the constant majorant)(n + fixed): bounds the orders
/// dropped from int exp* psi(omega' u .) dnu with |omega'| = fixed.
inline double pair_functional_tail(double z, double mass, int N, int fixed = 0) {
  double tail = 0.0;
  for (int n = N + 1; n <= N + 60; ++n) {
    tail += std::pow(z * mass, n) / factorial(n) * PairFunctional::majorant_exp(n + fixed);
  }
  return tail;
}

}  // namespace detail

inline CheckResult check_star_identities(const VerifyProfile& p, std::uint64_t seed) {
  using detail::PairFunctional;
  double round = 0.0, leibniz = 0.0;
  for (int i = 0; i < 200; ++i) {
    Rng rng = make_stream(seed, {10, static_cast<std::uint64_t>(i)});
    const int n = 1 + i % 6;
    const auto psi = detail::random_functional(n, rng, true);
    const auto f = star_exp(psi);
    round = std::max({round, detail::max_abs_diff(star_log(f), psi), detail::max_abs_diff(star_exp(star_log(f)), f)});
    if (n <= 5 && n >= 2) {
      const auto a = detail::random_functional(n, rng, false);
      const auto b = detail::random_functional(n, rng, false);
      const SubsetMask x = 1u << (i % n);
      ConfigFunctional rhs = star_mul(d_shift(a, x), b);
      rhs += star_mul(a, d_shift(b, x));
      leibniz = std::max(leibniz, detail::max_abs_diff(d_shift(star_mul(a, b), x), rhs, x));
      leibniz = std::max(leibniz, detail::max_abs_diff(d_shift(f, x), star_mul(f, d_shift(psi, x)), x));
      const SubsetMask y = 1u << ((i + 1) % n);
      leibniz = std::max(leibniz, detail::max_abs_diff(d_shift(d_shift(a, x), y), d_shift(d_shift(a, y), x)));
    }
  }

  // int exp* psi dnu = exp(int psi dnu) on [0, 1] with toy marks, z = 1.
  ModelSpec model = toy_model(1.0, 1.0);
  const Box box = model.space.box();
  const int N = 8;
  QuadratureScheme mc;
  mc.kind = SchemeKind::monte_carlo;
  mc.samples = p.star_mc_samples;
  mc.seed = seed;
  QuadratureScheme grid;
  grid.points_per_axis = 200;
  const Integrand expf = [](std::span<const MarkedPoint> pts) {
    const auto e = star_exp(PairFunctional::table(pts));
    return e[e.full()];
  };
  const auto lhs = lp_integral(expf, model, box, N, mc);
  const Integrand g1 = [](std::span<const MarkedPoint> y) { return PairFunctional::g(y[0]); };
  const Integrand h2 = [](std::span<const MarkedPoint> y) { return PairFunctional::h(y[0], y[1]); };
  const auto ig = integrate_order(g1, model, Domain{box}, 1, grid);
  const auto ih = integrate_order(h2, model, Domain{box}, 2, grid);
  const double log_rhs = model.z * ig.value + model.z * model.z / 2.0 * ih.value;
  const double rhs = std::exp(log_rhs);
  const double rhs_err = rhs * (model.z * ig.error + model.z * model.z / 2.0 * ih.error);
  const double tail = detail::pair_functional_tail(model.z, model.intensity_mass(box), N);
  const double exp_sigma = std::abs(lhs.value - rhs) - tail - rhs_err;
  const bool exp_ok = exp_sigma <= 3.0 * lhs.error;

  // Conditional factorisation with Lambda' = [0, 0.5), exterior [0.5, 1), omega' = two points.
  const Box exterior = interval_box(0.5, 1.0);
  const std::vector<MarkedPoint> fixed{point1(0.2, model.marks.label_mark(0)), point1(0.35, model.marks.label_mark(1))};
  const Integrand cond = [&](std::span<const MarkedPoint> ys) {
    std::vector<MarkedPoint> all(fixed);
    all.insert(all.end(), ys.begin(), ys.end());
    const auto e = star_exp(PairFunctional::table(all));
    return e[e.full()];
  };
  const auto cl = lp_integral(cond, model, exterior, N, mc);
  const auto eg = integrate_order(g1, model, Domain{exterior}, 1, grid);
  const auto eh = integrate_order(h2, model, Domain{exterior}, 2, grid);
  ConfigFunctional inner(2);
  for (int i = 0; i < 2; ++i) {
    const Integrand hx = [&](std::span<const MarkedPoint> y) { return PairFunctional::h(fixed[static_cast<std::size_t>(i)], y[0]); };
    inner[1u << i] = PairFunctional::g(fixed[static_cast<std::size_t>(i)]) +
                     model.z * integrate_order(hx, model, Domain{exterior}, 1, grid).value;
  }
  inner[3] = PairFunctional::h(fixed[0], fixed[1]);
  const auto ei = star_exp(inner);
  const double cond_rhs = std::exp(model.z * eg.value + model.z * model.z / 2.0 * eh.value) * ei[3];
  const double cond_tail = detail::pair_functional_tail(model.z, model.intensity_mass(exterior), N, 2);
  const double cond_err = std::abs(cond_rhs) * (model.z * eg.error + model.z * model.z / 2.0 * eh.error) + 1e-9;
  const double cond_sigma = std::abs(cl.value - cond_rhs) - cond_tail - cond_err;
  const bool cond_ok = cond_sigma <= 3.0 * cl.error;

  const bool ok = round <= 1e-10 && leibniz <= 1e-12 && exp_ok && cond_ok;
  std::ostringstream d;
  d << "round " << detail::fmt(round) << " D " << detail::fmt(leibniz) << " exp " << detail::fmt(lhs.value) << "/"
    << detail::fmt(rhs) << " se " << detail::fmt(lhs.error) << " cond " << detail::fmt(cl.value) << "/"
    << detail::fmt(cond_rhs) << " se " << detail::fmt(cl.error);
  const double margin = std::min({1e-10 - round, 1e-12 - leibniz, 3.0 - exp_sigma / lhs.error, 3.0 - cond_sigma / cl.error});
  return detail::make_result(10, "star_identities", ok, margin, d.str());
}

inline CheckResult check_ideal_gas(const VerifyProfile& p, std::uint64_t seed) {
  const ModelSpec model = ideal_model(0.5);
  const Box box = model.space.box();
  bool exact = true;
  for (int i = 0; i < 50; ++i) {
    Rng rng = make_stream(seed, {11, static_cast<std::uint64_t>(i)});
    const auto pts = detail::random_points(model, 1 + i % 8, rng);
    const auto t = ursell_table(pts, model);
    for (SubsetMask s = 1; s <= t.values.full(); ++s) {
      exact = exact && t[s] == (std::popcount(s) == 1 ? 1.0 : 0.0);
      if (s == t.values.full()) break;
    }
  }
  const QuadratureScheme scheme;
  const auto one = log_partition_truncated(model, box, 1, scheme, 0.0);
  const auto three = log_partition_truncated(model, box, 3, scheme, 0.0);
  exact = exact && one.log_Z == model.z * model.intensity_mass(box) && three.coefficients[1] == 0.0 &&
          three.coefficients[2] == 0.0;
  for (const auto& xs : {std::vector<double>{0.3}, std::vector<double>{0.2, 0.7}}) {
    std::vector<MarkedPoint> pts;
    for (double x : xs) pts.push_back(point1(x));
    exact = exact && correlation_truncated(FiniteConfiguration::canonicalize(pts), model, box, 3, scheme).value == 1.0;
  }

  const double lambda = model.z * model.intensity_mass(box);
  const auto rej = rejection_run(model, box, BoundaryCondition::empty(), p.poisson_draws, seed);
  SamplerConfig cfg;
  cfg.seed = seed;
  cfg.sweeps = p.poisson_draws;
  const auto chain = mcmc_run(model, box, BoundaryCondition::empty(), cfg).stats;
  const auto mean_z = [&](const ChainStats& s) {
    return std::abs(s.mean_n() - lambda) / std::sqrt(lambda * s.iat / static_cast<double>(s.samples));
  };
  const auto var_z = [&](const ChainStats& s) {
    return std::abs(s.var_n() - lambda) / std::sqrt((lambda + 2.0 * lambda * lambda) * s.iat / static_cast<double>(s.samples));
  };
  const double worst = std::max({mean_z(rej), var_z(rej), mean_z(chain), var_z(chain)});
  const bool ok = exact && worst <= 3.0;
  std::ostringstream d;
  d << "exact " << (exact ? "yes" : "no") << " rejection mean " << detail::fmt(rej.mean_n()) << " mcmc mean "
    << detail::fmt(chain.mean_n()) << " worst z " << detail::fmt(worst);
  return detail::make_result(11, "ideal_gas", ok, 3.0 - worst, d.str());
}

inline CheckResult check_three_routes(const VerifyProfile& p, std::uint64_t seed) {
  const ModelSpec model = toy_model(0.05, 1.0);
  const Box box = model.space.box();
  const double C = convergence_radius(model).C_beta;
  const auto a = density_truncated(model, box, 3, QuadratureScheme{}, C);
  const auto b = rejection_run(model, box, BoundaryCondition::empty(), p.sampler_draws, seed);
  SamplerConfig cfg;
  cfg.seed = seed;
  cfg.sweeps = p.sampler_draws;
  const auto c = mcmc_run(model, box, BoundaryCondition::empty(), cfg).stats;
  const double sa = a.standard_error(), sb = b.rho1_standard_error(), sc = c.rho1_standard_error();
  const double zab = std::abs(a.value - b.rho1()) / std::hypot(sa, sb);
  const double zac = std::abs(a.value - c.rho1()) / std::hypot(sa, sc);
  const double zbc = std::abs(b.rho1() - c.rho1()) / std::hypot(sb, sc);
  const double worst = std::max({zab, zac, zbc});
  std::ostringstream d;
  d << "expansion " << detail::fmt(a.value) << " rejection " << detail::fmt(b.rho1()) << "+-" << detail::fmt(sb)
    << " mcmc " << detail::fmt(c.rho1()) << "+-" << detail::fmt(sc);
  return detail::make_result(12, "three_route_consistency", worst <= 3.0, 3.0 - worst, d.str());
}

inline CheckResult check_dlr(const VerifyProfile& p, std::uint64_t seed) {
  const ModelSpec model = toy_cut_model(0.5, 1.0, 0.3);
  const auto rep = dlr_check(model, interval_box(0.4, 0.6), model.space.box(), p.dlr_samples, p.locality_trials, seed);
  const double z = rep.standard_error > 0.0 ? std::abs(rep.discrepancy) / rep.standard_error : 0.0;
  std::ostringstream d;
  d << "discrepancy " << detail::fmt(rep.discrepancy) << " se " << detail::fmt(rep.standard_error) << " locality "
    << rep.locality_violations << "/" << rep.locality_trials;
  return detail::make_result(13, "dlr_locality", rep.within_3_sigma && rep.locality_violations == 0, 3.0 - z, d.str());
}

/// Checks 1 to 13; the determinism check lives with the CLI.
inline std::vector<std::function<CheckResult()>> property_checks(const VerifyProfile& p, std::uint64_t seed) {
  return {[=] { return check_cayley(p); },
          [=] { return check_connected_graphs(p); },
          [=] { return check_ursell_triangle(p, seed); },
          [=] { return check_cluster_decomposition(p, seed); },
          [=] { return check_tree_graph_bound(p, seed); },
          [=] { return check_q_closed_form(p, seed); },
          [=] { return check_integral_tree_bound(p); },
          [=] { return check_convergence_certificate(p); },
          [=] { return check_partition_cross(p); },
          [=] { return check_star_identities(p, seed); },
          [=] { return check_ideal_gas(p, seed); },
          [=] { return check_three_routes(p, seed); },
          [=] { return check_dlr(p, seed); }};
}

}  // namespace mgibbs
