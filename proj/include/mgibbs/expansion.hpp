#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "mgibbs/conditions.hpp"
#include "mgibbs/error.hpp"
#include "mgibbs/lpintegrate.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/numeric.hpp"
#include "mgibbs/potential.hpp"
#include "mgibbs/starcalc.hpp"
#include "mgibbs/ursell.hpp"

namespace mgibbs {

struct RadiusReport {
  double C_beta = 0.0;
  double z_star = kInfinity;
  bool within_radius = true;
  IntegrabilityReport integrability;
};

/// z* = 1 / (2 e e^{2 beta B} C(beta)); infinite when C(beta) = 0.
inline double z_star_from(double C_beta, double B, double beta) {
  require(std::isfinite(C_beta), ErrorKind::infinite_c_beta, "C(beta) is not finite");
  if (C_beta == 0.0) return kInfinity;
  return 1.0 / (2.0 * std::numbers::e * std::exp(2.0 * beta * B) * C_beta);
}

inline RadiusReport convergence_radius(const ModelSpec& model, const IntegrabilityOptions& opt = {}) {
  RadiusReport r;
  r.integrability = check_integrability(model, opt);
  require(r.integrability.finite, ErrorKind::infinite_c_beta, "C(beta) is not finite");
  r.C_beta = r.integrability.C_beta;
  r.z_star = z_star_from(r.C_beta, model.potential->stability_B(), model.beta);
  r.within_radius = model.z < r.z_star;
  return r;
}

/// q = 2 z e C(beta) e^{2 beta B}; the ratio of the geometric majorant.
inline double majorant_ratio(const ModelSpec& model, double C_beta) {
  return 2.0 * model.z * std::numbers::e * C_beta * std::exp(2.0 * model.beta * model.potential->stability_B());
}

/// (mass / C) q^from / (1 - q): bounds sum_{n >= from} z^n/n! int |k| over a region of
/// sigma^tau-mass `mass`.
inline double tail_bound(const ModelSpec& model, double C_beta, int from_order, double mass) {
  require(from_order >= 1, ErrorKind::invalid_argument, "tail starts at order >= 1");
  if (C_beta == 0.0) return 0.0;
  const double q = majorant_ratio(model, C_beta);
  require(q < 1.0, ErrorKind::outside_radius, "z is outside the certified radius; no tail bound");
  return (mass / C_beta) * std::pow(q, from_order) / (1.0 - q);
}

inline double tail_bound(const ModelSpec& model, double C_beta, int from_order) {
  return tail_bound(model, C_beta, from_order, model.intensity_mass());
}

/// Term-wise geometric majorant (mass / C) q^n of z^n/n! int |k_n|.
inline double majorant_term(const ModelSpec& model, double C_beta, int n, double mass) {
  if (C_beta == 0.0) return n == 1 ? mass * model.z : 0.0;
  return (mass / C_beta) * std::pow(majorant_ratio(model, C_beta), n);
}

/// Smallest N whose discarded tail (orders > N) is below `accuracy`; `max_order` when
/// no certificate exists.
inline int default_truncation_order(const ModelSpec& model, double C_beta, double mass, double accuracy,
                                    int max_order = 12) {
  if (C_beta == 0.0) return 1;
  if (majorant_ratio(model, C_beta) >= 1.0) return max_order;
  for (int n = 1; n < max_order; ++n) {
    if (tail_bound(model, C_beta, n + 1, mass) <= accuracy) return n;
  }
  return max_order;
}

struct ExpansionReport {
  int truncation_order = 0;
  std::vector<double> coefficients;  // b_n = z^n/n! int k_n, n = 1..N
  std::vector<double> coefficient_errors;
  std::vector<OrderEstimate> orders;
  double log_Z = 0.0;
  double integration_error = 0.0;
  double tail_bound = kInfinity;  // infinite when outside the certified radius
  double z_star = kInfinity;
  double C_beta = 0.0;
  bool within_radius = true;
  QuadratureScheme scheme;
};

inline Domain region_domain(const ModelSpec& model, const Box& region) {
  require(region.inside(model.space.box()), ErrorKind::region_out_of_bounds, "region is not inside the model box");
  return Domain{region};
}

inline double domain_mass(const ModelSpec& model, const Domain& d) { return domain_volume(d) * model.marks.total_mass(); }

/// log Z~ ~= sum_{n=1}^N z^n/n! int k(x_1..x_n) over (region x S)^n.
inline ExpansionReport log_partition_truncated(const ModelSpec& model, const Box& region, int N,
                                               const QuadratureScheme& scheme, double C_beta) {
  model.validate();
  require(N >= 1, ErrorKind::invalid_argument, "truncation order must be >= 1");
  const Domain domain = region_domain(model, region);
  const double mass = domain_mass(model, domain);
  ExpansionReport rep;
  rep.truncation_order = N;
  rep.scheme = scheme;
  rep.C_beta = C_beta;
  rep.z_star = z_star_from(C_beta, model.potential->stability_B(), model.beta);
  rep.within_radius = model.z < rep.z_star;
  const Integrand k = [&](std::span<const MarkedPoint> pts) { return ursell_value(pts, model); };
  std::vector<double> errors;
  for (int n = 1; n <= N; ++n) {
    OrderEstimate est;
    if (n == 1) {
      est.n = 1;
      est.value = mass;  // k = 1 on singletons
      est.evaluations = 0;
    } else if (model.z == 0.0) {
      est.n = n;
    } else {
      est = integrate_order(k, model, domain, n, scheme);
    }
    const double c = std::pow(model.z, n) / factorial(n);
    rep.coefficients.push_back(c * est.value);
    rep.coefficient_errors.push_back(c * est.error);
    rep.orders.push_back(est);
  }
  rep.log_Z = pairwise_sum(rep.coefficients);
  rep.integration_error = pairwise_sum(rep.coefficient_errors);
  if (rep.within_radius || C_beta == 0.0) {
    rep.tail_bound = model.z == 0.0 ? 0.0 : tail_bound(model, C_beta, N + 1, mass);
  }
  return rep;
}

inline ExpansionReport log_partition_truncated(const ModelSpec& model, const Box& region, int N,
                                               const QuadratureScheme& scheme) {
  return log_partition_truncated(model, region, N, scheme, convergence_radius(model).C_beta);
}

/// z^n/n! int |k_n| for n = 1..N: the absolute cluster series.
inline std::vector<OrderEstimate> absolute_cluster_terms(const ModelSpec& model, const Box& region, int N,
                                                         const QuadratureScheme& scheme) {
  const Domain domain = region_domain(model, region);
  const Integrand k = [&](std::span<const MarkedPoint> pts) { return std::abs(ursell_value(pts, model)); };
  std::vector<OrderEstimate> out;
  for (int n = 1; n <= N; ++n) {
    auto est = integrate_order(k, model, domain, n, scheme);
    const double c = std::pow(model.z, n) / factorial(n);
    est.value *= c;
    est.error *= c;
    out.push_back(est);
  }
  return out;
}

/// Z~_region(boundary) ~= 1 + sum_{n=1}^N z^n/n! int e^{-beta (E(y) + W(y, boundary))}.
inline IntegralEstimate partition_direct_truncated(const ModelSpec& model, const Box& region,
                                                   const FiniteConfiguration& boundary, int N,
                                                   const QuadratureScheme& scheme) {
  model.validate();
  require(N >= 0, ErrorKind::invalid_argument, "truncation order must be >= 0");
  const Domain domain = region_domain(model, region);
  const Integrand f = [&](std::span<const MarkedPoint> pts) {
    const double e = energy(pts, model);
    if (e == kInfinity) return 0.0;
    const double w = interaction_unchecked(pts, boundary.span(), model);
    if (w == kInfinity) return 0.0;
    return boltzmann(e + w, model.beta);
  };
  if (model.z == 0.0) {
    IntegralEstimate est;
    est.value = 1.0;
    est.scheme = scheme;
    return est;
  }
  return lp_integral(f, model, domain, N, scheme);
}

/// rho^(m)(points) ~= sum_{n=0}^N z^n/n! int kbar(points, y_1..y_n) over (region x S)^n.
inline IntegralEstimate correlation_truncated(const FiniteConfiguration& points, const ModelSpec& model,
                                              const Box& region, int N, const QuadratureScheme& scheme) {
  model.validate();
  const Domain domain = region_domain(model, region);
  for (const auto& p : points) {
    require(region.contains(p.position), ErrorKind::region_out_of_bounds, "correlation point outside region");
  }
  require(static_cast<int>(points.size()) + N <= 12, ErrorKind::size_limit, "m + N must be <= 12");
  const Integrand f = [&](std::span<const MarkedPoint> ys) { return kbar_unchecked(points.span(), ys, model); };
  if (model.z == 0.0 || points.empty()) {
    IntegralEstimate est;
    est.value = points.empty() ? 1.0 : f({});
    est.scheme = scheme;
    return est;
  }
  return lp_integral(f, model, domain, N, scheme);
}

/// Geometric bound on the discarded orders (> N) of the one-point series:
/// e e^{2 beta B} p^{N+1}/(1-p), p = e z C e^{2 beta B}.
inline double one_point_tail_bound(const ModelSpec& model, double C_beta, int N) {
  if (C_beta == 0.0) return 0.0;
  const double g = std::exp(2.0 * model.beta * model.potential->stability_B());
  const double p = std::numbers::e * model.z * C_beta * g;
  if (p >= 1.0) return kInfinity;
  return std::numbers::e * g * std::pow(p, N + 1) / (1.0 - p);
}

struct DensityEstimate {
  double value = 0.0;
  double integration_error = 0.0;
  double tail_bound = 0.0;
  double standard_error() const { return integration_error + tail_bound; }
};

/// The one-point correlation averaged over region x S:
/// sum_{n=0}^N z^n/n! int k(x_0..x_n) / sigma^tau(region x S).
inline DensityEstimate density_truncated(const ModelSpec& model, const Box& region, int N,
                                         const QuadratureScheme& scheme, double C_beta) {
  const Domain domain = region_domain(model, region);
  const double mass = domain_mass(model, domain);
  const Integrand k = [&](std::span<const MarkedPoint> pts) { return ursell_value(pts, model); };
  DensityEstimate d;
  std::vector<double> terms{1.0}, errors{0.0};
  for (int n = 1; n <= N; ++n) {
    const auto est = integrate_order(k, model, domain, n + 1, scheme);
    const double c = std::pow(model.z, n) / factorial(n) / mass;
    terms.push_back(c * est.value);
    errors.push_back(c * est.error);
  }
  d.value = pairwise_sum(terms);
  d.integration_error = pairwise_sum(errors);
  d.tail_bound = one_point_tail_bound(model, C_beta, N);
  return d;
}

struct LimitDensityReport {
  double density = 0.0;  // d mu^{region} / d nu at the configuration
  double log_Z = 0.0;    // log Z~^{region}
  double integration_error = 0.0;
  std::vector<double> k_values;  // k^{region} on the subsets of the configuration
  int truncation_order = 0;
};

/// Boxes covering {x : 0 < dist(x, region) < width} (sup-norm slabs, a superset of the
/// Euclidean collar; the integrand vanishes on the excess).
inline Domain collar_domain(const Box& region, double width) {
  if (width <= 0.0) return {};
  return box_difference(region.expanded(width), region);
}

/// Local density of the infinite-volume limit measure on `region`, for finite-range
/// potentials on free space. Order-n exterior integrals run over the n R collar, since a
/// chain of n exterior points reaches at most n R from the region.
inline LimitDensityReport limit_local_density(const FiniteConfiguration& config, const ModelSpec& model,
                                              const Box& region, int N, const QuadratureScheme& scheme) {
  model.validate();
  require(model.potential->range().has_value(), ErrorKind::requires_finite_range,
          "limit density needs a finite-range potential");
  require(model.space.boundary() == Boundary::free, ErrorKind::unsupported_boundary,
          "limit density is defined for free boundary only");
  require(N >= 1, ErrorKind::invalid_argument, "truncation order must be >= 1");
  require(config.size() <= 10, ErrorKind::size_limit, "limit density configuration above cap");
  for (const auto& p : config) {
    require(region.contains(p.position), ErrorKind::region_out_of_bounds, "configuration outside region");
  }
  const double R = *model.potential->range();
  LimitDensityReport rep;
  rep.truncation_order = N;
  std::vector<double> errs;

  // k^{region}(eta) for each nonempty eta subset of config.
  const int m = static_cast<int>(config.size());
  ConfigFunctional kr(m);
  for (SubsetMask s = 1; m > 0 && s <= kr.full(); ++s) {
    std::vector<MarkedPoint> eta;
    for (SubsetMask r = s; r != 0; r &= r - 1) eta.push_back(config[static_cast<std::size_t>(std::countr_zero(r))]);
    std::vector<double> terms{ursell_value(eta, model)};
    for (int n = 1; n <= N && model.z > 0.0; ++n) {
      const Domain collar = collar_domain(region, n * R);
      if (collar.empty()) break;
      const Integrand f = [&](std::span<const MarkedPoint> ys) {
        std::vector<MarkedPoint> all(eta);
        all.insert(all.end(), ys.begin(), ys.end());
        return ursell_value(all, model);
      };
      const auto est = integrate_order(f, model, collar, n, scheme);
      const double c = std::pow(model.z, n) / factorial(n);
      terms.push_back(c * est.value);
      errs.push_back(c * est.error);
    }
    kr[s] = pairwise_sum(terms);
    if (s == kr.full()) break;
  }
  const auto e = star_exp(kr);
  rep.k_values = kr.values();

  // log Z~^{region}: order-p integrals over region u collar((p-1) R) touching the region.
  std::vector<double> log_terms;
  for (int p = 1; p <= N && model.z > 0.0; ++p) {
    Domain d{region};
    for (const auto& b : collar_domain(region, (p - 1) * R)) d.push_back(b);
    const Integrand f = [&](std::span<const MarkedPoint> ys) {
      const bool touches = std::any_of(ys.begin(), ys.end(), [&](const auto& y) { return region.contains(y.position); });
      return touches ? ursell_value(ys, model) : 0.0;
    };
    OrderEstimate est;
    if (p == 1) {
      est.value = region.volume() * model.marks.total_mass();
    } else {
      est = integrate_order(f, model, d, p, scheme);
    }
    const double c = std::pow(model.z, p) / factorial(p);
    log_terms.push_back(c * est.value);
    errs.push_back(c * est.error);
  }
  rep.log_Z = pairwise_sum(log_terms);
  rep.integration_error = pairwise_sum(errs);
  rep.density = e[e.full()] * std::exp(-rep.log_Z);
  return rep;
}

}  // namespace mgibbs
