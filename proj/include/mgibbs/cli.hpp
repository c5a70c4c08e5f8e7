#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mgibbs/config.hpp"
#include "mgibbs/error.hpp"
#include "mgibbs/expansion.hpp"
#include "mgibbs/gibbsmc.hpp"
#include "mgibbs/parallel.hpp"
#include "mgibbs/report.hpp"
#include "mgibbs/verify.hpp"

namespace mgibbs {

inline Json check_json(const CheckResult& c) {
  Json j;
  j["id"] = c.id;
  j["name"] = c.name;
  j["passed"] = c.passed;
  j["margin"] = number(c.margin);
  j["detail"] = c.detail;
  return j;
}

struct SuiteOutcome {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return !checks.empty();
  }
};

namespace detail {

inline Json radius_result(const RadiusReport& r, const ModelSpec& model) {
  Json j;
  j["C_beta"] = number(r.C_beta);
  j["z_star"] = number(r.z_star);
  j["within_radius"] = r.within_radius;
  j["majorant_ratio"] = number(majorant_ratio(model, r.C_beta));
  Json g;
  g["grid_size"] = r.integrability.grid_size;
  g["coarse_C_beta"] = number(r.integrability.coarse_C_beta);
  g["grid_change"] = number(r.integrability.grid_change);
  g["converged"] = r.integrability.converged;
  g["quadrature_error"] = number(r.integrability.quadrature_error);
  g["argmax_position"] = std::vector<double>(r.integrability.argmax_position.begin(),
                                             r.integrability.argmax_position.begin() + model.space.dimension());
  g["argmax_mark_label"] = r.integrability.argmax_mark.label;
  g["argmax_mark_value"] = r.integrability.argmax_mark.value;
  j["integrability"] = g;
  return j;
}

inline Json point_json(const MarkedPoint& p, int dim) {
  Json j;
  j["position"] = std::vector<double>(p.position.begin(), p.position.begin() + dim);
  j["label"] = p.mark.label;
  j["value"] = p.mark.value;
  return j;
}

inline SamplerConfig sampler_config(const RunConfig& c) {
  SamplerConfig s;
  s.seed = c.seed;
  s.sweeps = c.sample.sweeps;
  s.burn_in = c.sample.burn_in;
  s.thinning = c.sample.thinning;
  s.p_birth = c.sample.p_birth;
  s.p_death = c.sample.p_death;
  s.p_move = c.sample.p_move;
  s.p_mark = c.sample.p_mark;
  s.step_fraction = c.sample.step_fraction;
  s.histogram_bins = c.sample.histogram_bins;
  s.histogram_r_max = c.sample.histogram_r_max;
  s.keep_samples = !c.sample.sample_file.empty();
  return s;
}

inline std::string csv_number(const Json& v) { return v.is_null() ? "" : v.dump(); }

}  // namespace detail

inline SuiteOutcome full_suite(const VerifyProfile& profile, std::uint64_t seed,
                               const std::function<void(const CheckResult&)>& on_result = {});

/// Executes a validated configuration and returns the report document.
inline Json execute(const RunConfig& cfg) {
  validate_config(cfg);
  set_default_workers(cfg.workers);
  const ModelSpec model = build_model(cfg);
  const Box region = cfg.resolved_region(model);
  const double mass = model.intensity_mass(region);
  QuadratureScheme scheme = cfg.scheme;
  scheme.seed = cfg.seed;

  const bool needs_radius = cfg.command == "radius" || cfg.command == "expand" || cfg.command == "correlate";
  RadiusReport radius;
  bool have_radius = true;
  try {
    radius = convergence_radius(model);
  } catch (const Error& e) {
    if (needs_radius || e.kind() != ErrorKind::infinite_c_beta) throw;
    have_radius = false;
    radius.C_beta = kInfinity;
    radius.z_star = 0.0;
    radius.within_radius = false;
  }

  Provenance prov;
  prov.C_beta = radius.C_beta;
  prov.z_star = radius.z_star;
  prov.within_radius = radius.within_radius;
  prov.seed = cfg.seed;
  prov.truncation_order = cfg.expansion.order.value_or(
      have_radius ? default_truncation_order(model, radius.C_beta, mass, cfg.expansion.accuracy, cfg.expansion.max_order)
                  : cfg.expansion.max_order);
  if (have_radius && (radius.C_beta == 0.0 || majorant_ratio(model, radius.C_beta) < 1.0)) {
    prov.tail_bound = tail_bound(model, radius.C_beta, prov.truncation_order + 1, mass);
  }
  const int N = prov.truncation_order;

  Json result;
  if (cfg.command == "radius") {
    result = detail::radius_result(radius, model);
  } else if (cfg.command == "expand") {
    require(N <= 12, ErrorKind::size_limit, "truncation order above 12");
    auto rep = log_partition_truncated(model, region, N, scheme, radius.C_beta);
    result = expansion_json(rep);
  } else if (cfg.command == "correlate") {
    Json list = Json::array();
    for (std::size_t s = 0; s < cfg.point_sets.size(); ++s) {
      const FiniteConfiguration pts = resolve_points(cfg.point_sets[s], model);
      const int m = static_cast<int>(pts.size());
      const int order = std::min(N, 12 - m);
      require(order >= 0, ErrorKind::size_limit, "point set larger than 12");
      const auto est = correlation_truncated(pts, model, region, order, scheme);
      Json c;
      c["set"] = s;
      c["m"] = m;
      c["truncation_order"] = order;
      c["points"] = Json::array();
      for (const auto& p : pts) c["points"].push_back(detail::point_json(p, model.space.dimension()));
      c["value"] = number(est.value);
      c["error"] = number(est.error);
      c["tail_bound"] = m == 1 ? number(one_point_tail_bound(model, radius.C_beta, order)) : Json(nullptr);
      list.push_back(c);
    }
    result["correlations"] = list;
  } else if (cfg.command == "sample") {
    std::vector<FiniteConfiguration> samples;
    ChainStats stats;
    if (cfg.sample.method == "mcmc") {
      auto chain = mcmc_run_parallel(model, region, BoundaryCondition::empty(), detail::sampler_config(cfg),
                                     cfg.sample.chains);
      stats = chain.stats;
      samples = std::move(chain.samples);
    } else {
      stats = rejection_run(model, region, BoundaryCondition::empty(), cfg.sample.sweeps, cfg.seed,
                            cfg.sample.histogram_bins, cfg.sample.histogram_r_max, {},
                            cfg.sample.sample_file.empty() ? nullptr : &samples);
    }
    result["method"] = cfg.sample.method;
    result["chains"] = cfg.sample.method == "mcmc" ? cfg.sample.chains : 1;
    result["stats"] = chain_stats_json(stats);
    result["sample_file"] = cfg.sample.sample_file.empty() ? Json(nullptr) : Json(cfg.sample.sample_file);
    if (!cfg.sample.sample_file.empty()) {
      std::ofstream os(cfg.sample.sample_file);
      require(static_cast<bool>(os), ErrorKind::config_error, "cannot write sample file '" + cfg.sample.sample_file + "'");
      write_samples(os, samples, model.space.dimension());
    }
  } else if (cfg.command == "verify") {
    const auto outcome = full_suite(VerifyProfile::named(cfg.verify_profile), cfg.seed);
    Json list = Json::array();
    for (const auto& c : outcome.checks) list.push_back(check_json(c));
    result["profile"] = cfg.verify_profile;
    result["checks"] = list;
    result["all_passed"] = outcome.all_passed();
  }

  Json report;
  report["schema"] = kReportSchema;
  report["command"] = cfg.command;
  report["model"] = model_json(model);
  report["region"] = box_json(region);
  report["provenance"] = provenance_json(prov, scheme, model.marks);
  report["result"] = result;
  return report;
}

/// Tabular view of a report's main series.
inline std::string render_csv(const Json& report) {
  using detail::csv_number;
  std::ostringstream os;
  const std::string command = report.at("command");
  const auto& r = report.at("result");
  const auto& p = report.at("provenance");
  if (command == "radius") {
    os << "C_beta,z_star,within_radius,truncation_order,tail_bound\n";
    os << csv_number(r.at("C_beta")) << ',' << csv_number(r.at("z_star")) << ','
       << (r.at("within_radius").get<bool>() ? "true" : "false") << ',' << p.at("truncation_order").dump() << ','
       << csv_number(p.at("tail_bound")) << '\n';
  } else if (command == "expand") {
    os << "n,coefficient,error,method\n";
    const auto& orders = r.at("orders");
    for (std::size_t i = 0; i < r.at("coefficients").size(); ++i) {
      os << (i + 1) << ',' << csv_number(r.at("coefficients")[i]) << ',' << csv_number(r.at("coefficient_errors")[i])
         << ',' << (i < orders.size() ? orders[i].at("method").get<std::string>() : "") << '\n';
    }
  } else if (command == "correlate") {
    os << "set,m,value,error,tail_bound\n";
    for (const auto& c : r.at("correlations")) {
      os << c.at("set").dump() << ',' << c.at("m").dump() << ',' << csv_number(c.at("value")) << ','
         << csv_number(c.at("error")) << ',' << csv_number(c.at("tail_bound")) << '\n';
    }
  } else if (command == "sample") {
    const auto& s = r.at("stats");
    const auto& hist = s.at("pair_histogram");
    if (!hist.empty()) {
      const double r_max = s.at("pair_r_max");
      const double w = r_max / static_cast<double>(hist.size());
      os << "bin,r_lower,r_upper,pair_count\n";
      for (std::size_t b = 0; b < hist.size(); ++b) {
        os << b << ',' << Json(w * b).dump() << ',' << Json(w * (b + 1)).dump() << ',' << csv_number(hist[b]) << '\n';
      }
    } else {
      os << "samples,mean_n,var_n,rho1,rho1_standard_error\n";
      os << s.at("samples").dump() << ',' << csv_number(s.at("mean_n")) << ',' << csv_number(s.at("var_n")) << ','
         << csv_number(s.at("rho1")) << ',' << csv_number(s.at("rho1_standard_error")) << '\n';
    }
  } else if (command == "verify") {
    os << "criterion,name,passed,margin\n";
    for (const auto& c : r.at("checks")) {
      os << c.at("id").dump() << ',' << c.at("name").get<std::string>() << ','
         << (c.at("passed").get<bool>() ? "true" : "false") << ',' << csv_number(c.at("margin")) << '\n';
    }
  }
  return os.str();
}

/// The emitted body for a configuration: the report document or its CSV table.
inline std::string render(const RunConfig& cfg, const Json& report) {
  if (cfg.format == "csv") return render_csv(report);
  return report.dump(2) + "\n";
}

/// Runs a configuration, writing to cfg.out or `fallback`. Returns 0, or 1 when a verify
/// run has failing checks. Errors propagate as mgibbs::Error.
inline int run(const RunConfig& cfg, std::ostream& fallback) {
  const Json report = execute(cfg);
  const std::string body = render(cfg, report);
  if (cfg.out.empty()) {
    fallback << body;
  } else {
    std::ofstream os(cfg.out);
    require(static_cast<bool>(os), ErrorKind::config_error, "cannot write output '" + cfg.out + "'");
    os << body;
  }
  if (cfg.command == "verify" && !report.at("result").at("all_passed").get<bool>()) return 1;
  return 0;
}

/// Representative configurations for the determinism check.
inline std::vector<RunConfig> determinism_configs(std::uint64_t seed) {
  std::vector<RunConfig> out;
  RunConfig base;
  base.seed = seed;
  base.model.z = 0.05;

  RunConfig radius = base;
  radius.command = "radius";
  out.push_back(radius);

  RunConfig expand = base;
  expand.command = "expand";
  expand.expansion.order = 3;
  expand.scheme.kind = SchemeKind::monte_carlo;
  expand.scheme.samples = 6000;
  out.push_back(expand);

  RunConfig correlate = base;
  correlate.command = "correlate";
  correlate.expansion.order = 2;
  correlate.scheme.kind = SchemeKind::monte_carlo;
  correlate.scheme.samples = 4000;
  PointSpec p;
  p.position = {0.3, 0.0, 0.0};
  p.dimension = 1;
  p.label = 0;
  PointSpec q = p;
  q.position = {0.6, 0.0, 0.0};
  q.label = 1;
  correlate.point_sets = {PointSetConfig{{p}}, PointSetConfig{{p, q}}};
  out.push_back(correlate);

  RunConfig mcmc = base;
  mcmc.command = "sample";
  mcmc.model.z = 2.0;
  mcmc.sample.sweeps = 3000;
  mcmc.sample.burn_in = 500;
  mcmc.sample.chains = 3;
  mcmc.sample.histogram_bins = 8;
  mcmc.sample.histogram_r_max = 0.5;
  out.push_back(mcmc);

  RunConfig rejection = mcmc;
  rejection.sample.method = "rejection";
  rejection.sample.sweeps = 9000;
  out.push_back(rejection);

  RunConfig csv = expand;
  csv.format = "csv";
  out.push_back(csv);
  return out;
}

/// Same configuration and seed at 1 and 3 workers must give byte-identical bodies.
inline CheckResult check_determinism(std::uint64_t seed) {
  int mismatches = 0;
  int runs = 0;
  std::string first_mismatch;
  for (auto cfg : determinism_configs(seed)) {
    std::string bodies[2];
    const std::size_t workers[2] = {1, 3};
    for (int k = 0; k < 2; ++k) {
      cfg.workers = workers[k];
      bodies[k] = render(cfg, execute(cfg));
    }
    // A rerun at the same width must also match.
    cfg.workers = 3;
    const std::string again = render(cfg, execute(cfg));
    ++runs;
    if (bodies[0] != bodies[1] || bodies[1] != again) {
      ++mismatches;
      if (first_mismatch.empty()) first_mismatch = cfg.command + "/" + cfg.format;
    }
  }
  set_default_workers(0);
  std::ostringstream d;
  d << runs << " configurations at 1 and 3 workers, " << mismatches << " mismatching";
  if (!first_mismatch.empty()) d << " (first: " << first_mismatch << ")";
  return detail::make_result(14, "determinism", mismatches == 0, -mismatches, d.str());
}

/// Checks 1 to 14 in order.
inline SuiteOutcome full_suite(const VerifyProfile& profile, std::uint64_t seed,
                               const std::function<void(const CheckResult&)>& on_result) {
  auto checks = property_checks(profile, seed);
  checks.push_back([seed] { return check_determinism(seed); });
  SuiteOutcome out;
  for (const auto& check : checks) {
    CheckResult r;
    try {
      r = check();
    } catch (const Error& e) {
      r.id = static_cast<int>(out.checks.size()) + 1;
      r.name = "error";
      r.passed = false;
      r.margin = -1.0;
      r.detail = e.what();
    }
    if (on_result) on_result(r);
    out.checks.push_back(std::move(r));
  }
  return out;
}

}  // namespace mgibbs
