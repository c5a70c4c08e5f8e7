#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mgibbs/error.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/numeric.hpp"
#include "mgibbs/parallel.hpp"
#include "mgibbs/quadrature.hpp"
#include "mgibbs/rng.hpp"

namespace mgibbs {

/// A disjoint union of boxes; the integration region for positions.
using Domain = std::vector<Box>;

inline double domain_volume(const Domain& d) {
  double v = 0.0;
  for (const auto& b : d) v += b.volume();
  return v;
}

inline bool domain_contains(const Domain& d, const Position& p) {
  for (const auto& b : d) {
    if (b.contains(p)) return true;
  }
  return false;
}

enum class SchemeKind { tensor_grid, monte_carlo };

inline const char* to_string(SchemeKind k) { return k == SchemeKind::tensor_grid ? "tensor_grid" : "monte_carlo"; }

struct QuadratureScheme {
  SchemeKind kind = SchemeKind::tensor_grid;
  int points_per_axis = 32;
  std::size_t samples = 20000;
  std::uint64_t seed = 1;
  std::optional<MarkRule> mark_rule;  // unset: the natural rule for the mark space
  int mark_nodes = 16;
  int max_grid_dimensions = 6;
  double max_grid_nodes = 2.0e6;  // multisets evaluated per order on the finer grid

  MarkRule resolved_mark_rule(const MarkSpace& marks) const { return mark_rule.value_or(default_mark_rule(marks)); }

  void validate(const MarkSpace& marks) const {
    require(points_per_axis >= 1, ErrorKind::scheme_mismatch, "points_per_axis must be positive");
    require(samples >= 2, ErrorKind::scheme_mismatch, "Monte Carlo needs at least 2 samples");
    require(mark_nodes >= 1, ErrorKind::scheme_mismatch, "mark_nodes must be positive");
    require(max_grid_nodes >= 1.0, ErrorKind::scheme_mismatch, "max_grid_nodes must be positive");
    mark_nodes_for(marks);
  }

  std::vector<MarkNode> mark_nodes_for(const MarkSpace& marks) const {
    return mgibbs::mark_nodes(marks, resolved_mark_rule(marks), mark_nodes);
  }
};

struct OrderEstimate {
  int n = 0;
  double value = 0.0;  // the n-fold integral, without z^n/n!
  double error = 0.0;
  SchemeKind method = SchemeKind::tensor_grid;
  int points_per_axis = 0;
  std::size_t evaluations = 0;
};

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
  QuadratureScheme scheme;
  std::vector<OrderEstimate> orders;
};

using Integrand = std::function<double(std::span<const MarkedPoint>)>;

/// One-point quadrature nodes on Domain x S.
struct PointNode {
  MarkedPoint point;
  double weight;
};

/// Midpoint positions (G per axis in each box) crossed with the scheme's mark nodes.
inline std::vector<PointNode> grid_point_nodes(const ModelSpec& model, const Domain& domain, int g,
                                               const QuadratureScheme& scheme) {
  const int dim = model.space.dimension();
  const auto marks = scheme.mark_nodes_for(model.marks);
  std::vector<PointNode> out;
  for (const auto& box : domain) {
    require(box.dim == dim, ErrorKind::invalid_argument, "region dimension differs from the model");
    double cells = 1.0;
    for (int i = 0; i < dim; ++i) cells *= g;
    const double w = box.volume() / cells;
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    for (;;) {
      Position p{};
      for (int i = 0; i < dim; ++i) {
        p[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * (idx[i] + 0.5) / g;
      }
      for (const auto& m : marks) out.push_back({MarkedPoint{p, m.mark}, w * m.weight});
      int a = 0;
      while (a < dim && idx[a] == g - 1) idx[a++] = 0;
      if (a == dim) break;
      ++idx[a];
    }
  }
  return out;
}

namespace detail {

inline double multiset_count(double k, int n) {
  double c = 1.0;
  for (int i = 1; i <= n; ++i) c = c * (k + i - 1) / i;
  return c;
}

inline double nodes_per_point(const ModelSpec& model, const Domain& domain, int g, const QuadratureScheme& scheme) {
  double cells = 1.0;
  for (int i = 0; i < model.space.dimension(); ++i) cells *= g;
  return cells * static_cast<double>(domain.size()) * static_cast<double>(scheme.mark_nodes_for(model.marks).size());
}

inline void check_finite(double v) {
  require(std::isfinite(v), ErrorKind::non_finite_integrand, "integrand returned a non-finite value");
}

/// Sum over nondecreasing index tuples with multinomial weights, chunked by first index.
inline double symmetric_grid_sum(const Integrand& f, const std::vector<PointNode>& nodes, int n) {
  const std::size_t k = nodes.size();
  auto partial = run_chunks<CompensatedSum>(k, 0, [&](std::size_t first) {
    CompensatedSum acc;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), first);
    std::vector<MarkedPoint> tuple(static_cast<std::size_t>(n));
    for (;;) {
      double w = factorial(n);
      std::size_t run = 1;
      for (int i = 0; i < n; ++i) {
        tuple[static_cast<std::size_t>(i)] = nodes[idx[static_cast<std::size_t>(i)]].point;
        w *= nodes[idx[static_cast<std::size_t>(i)]].weight;
        if (i > 0 && idx[static_cast<std::size_t>(i)] == idx[static_cast<std::size_t>(i - 1)]) {
          ++run;
          w /= static_cast<double>(run);
        } else {
          run = 1;
        }
      }
      const double v = f(tuple);
      check_finite(v);
      acc += w * v;
      int pos = n - 1;
      while (pos >= 1 && idx[static_cast<std::size_t>(pos)] == k - 1) --pos;
      if (pos < 1) break;
      const std::size_t next = idx[static_cast<std::size_t>(pos)] + 1;
      for (int i = pos; i < n; ++i) idx[static_cast<std::size_t>(i)] = next;
    }
    return acc;
  });
  std::vector<double> values;
  values.reserve(partial.size());
  for (const auto& p : partial) values.push_back(p.value());
  return pairwise_sum(values);
}

/// Sum over all ordered index tuples (no symmetry assumed).
inline double ordered_grid_sum(const Integrand& f, const std::vector<PointNode>& nodes, int n) {
  const std::size_t k = nodes.size();
  auto partial = run_chunks<CompensatedSum>(k, 0, [&](std::size_t first) {
    CompensatedSum acc;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    idx[0] = first;
    std::vector<MarkedPoint> tuple(static_cast<std::size_t>(n));
    for (;;) {
      double w = 1.0;
      for (int i = 0; i < n; ++i) {
        tuple[static_cast<std::size_t>(i)] = nodes[idx[static_cast<std::size_t>(i)]].point;
        w *= nodes[idx[static_cast<std::size_t>(i)]].weight;
      }
      const double v = f(tuple);
      check_finite(v);
      acc += w * v;
      int pos = n - 1;
      while (pos >= 1 && idx[static_cast<std::size_t>(pos)] == k - 1) idx[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 1) break;
      ++idx[static_cast<std::size_t>(pos)];
    }
    return acc;
  });
  std::vector<double> values;
  for (const auto& p : partial) values.push_back(p.value());
  return pairwise_sum(values);
}

struct MomentPair {
  CompensatedSum sum;
  CompensatedSum sum_sq;
};

inline constexpr std::size_t kMonteCarloChunk = 1024;

/// Uniform position in the domain (box chosen by volume) and a mark from tau / tau(S).
inline MarkedPoint draw_point(const ModelSpec& model, const Domain& domain, double volume, Rng& rng) {
  double u = uniform01(rng) * volume;
  std::size_t b = 0;
  while (b + 1 < domain.size() && u >= domain[b].volume()) u -= domain[b++].volume();
  const Box& box = domain[b];
  MarkedPoint p;
  for (int i = 0; i < box.dim; ++i) p.position[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * uniform01(rng);
  p.mark = model.marks.sample(rng);
  return p;
}

}  // namespace detail

/// The n-fold integral over (Domain x S)^n by midpoint grid (symmetric integrands only).
inline OrderEstimate grid_order(const Integrand& f, const ModelSpec& model, const Domain& domain, int n, int g,
                                const QuadratureScheme& scheme, bool symmetric = true) {
  OrderEstimate est;
  est.n = n;
  est.method = SchemeKind::tensor_grid;
  est.points_per_axis = g;
  auto eval = [&](int grid) {
    const auto nodes = grid_point_nodes(model, domain, grid, scheme);
    return symmetric ? detail::symmetric_grid_sum(f, nodes, n) : detail::ordered_grid_sum(f, nodes, n);
  };
  est.value = eval(g);
  const int coarse = std::max(1, g / 2);
  est.error = coarse < g ? std::abs(est.value - eval(coarse)) : 0.0;
  const double k = detail::nodes_per_point(model, domain, g, scheme);
  est.evaluations = static_cast<std::size_t>(symmetric ? detail::multiset_count(k, n) : std::pow(k, n));
  return est;
}

/// The n-fold integral by seeded Monte Carlo; chunk c of order n draws from stream (seed, n, c).
inline OrderEstimate monte_carlo_order(const Integrand& f, const ModelSpec& model, const Domain& domain, int n,
                                       const QuadratureScheme& scheme) {
  const double volume = domain_volume(domain);
  const double mass = volume * model.marks.total_mass();
  const std::size_t chunks = (scheme.samples + detail::kMonteCarloChunk - 1) / detail::kMonteCarloChunk;
  auto parts = run_chunks<detail::MomentPair>(chunks, 0, [&](std::size_t c) {
    Rng rng = make_stream(scheme.seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(c)});
    detail::MomentPair m;
    const std::size_t begin = c * detail::kMonteCarloChunk;
    const std::size_t end = std::min(scheme.samples, begin + detail::kMonteCarloChunk);
    std::vector<MarkedPoint> tuple(static_cast<std::size_t>(n));
    for (std::size_t s = begin; s < end; ++s) {
      for (auto& p : tuple) p = detail::draw_point(model, domain, volume, rng);
      const double v = f(tuple);
      detail::check_finite(v);
      m.sum += v;
      m.sum_sq += v * v;
    }
    return m;
  });
  std::vector<double> sums, squares;
  for (const auto& p : parts) {
    sums.push_back(p.sum.value());
    squares.push_back(p.sum_sq.value());
  }
  const double count = static_cast<double>(scheme.samples);
  const double mean = pairwise_sum(sums) / count;
  const double var = std::max(0.0, pairwise_sum(squares) / count - mean * mean) * count / (count - 1.0);
  const double scale = std::pow(mass, n);
  OrderEstimate est;
  est.n = n;
  est.method = SchemeKind::monte_carlo;
  est.value = mean * scale;
  est.error = std::sqrt(var / count) * scale;
  est.evaluations = scheme.samples;
  return est;
}

/// Largest grid resolution whose multiset count fits the node budget (0 if none does).
inline int grid_resolution_for(const ModelSpec& model, const Domain& domain, int n, const QuadratureScheme& scheme) {
  if (scheme.kind != SchemeKind::tensor_grid) return 0;
  if (model.space.dimension() * n > scheme.max_grid_dimensions) return 0;
  for (int g = scheme.points_per_axis; g >= 2; --g) {
    if (detail::multiset_count(detail::nodes_per_point(model, domain, g, scheme), n) <= scheme.max_grid_nodes) return g;
  }
  return 0;
}

/// The n-fold integral of a symmetric integrand; grids where affordable, Monte Carlo otherwise.
inline OrderEstimate integrate_order(const Integrand& f, const ModelSpec& model, const Domain& domain, int n,
                                     const QuadratureScheme& scheme) {
  scheme.validate(model.marks);
  require(!domain.empty(), ErrorKind::invalid_argument, "empty integration domain");
  if (n == 0) {
    OrderEstimate est;
    est.value = f({});
    detail::check_finite(est.value);
    est.evaluations = 1;
    return est;
  }
  const int g = grid_resolution_for(model, domain, n, scheme);
  if (g >= 2) return grid_order(f, model, domain, n, g, scheme);
  return monte_carlo_order(f, model, domain, n, scheme);
}

/// sum_{n=0}^{N} z^n/n! * int f(x_1..x_n) sigma^tau(dx)^n over the domain.
inline IntegralEstimate lp_integral(const Integrand& f, const ModelSpec& model, const Domain& domain, int max_order,
                                    const QuadratureScheme& scheme) {
  require(max_order >= 0, ErrorKind::invalid_argument, "truncation order must be nonnegative");
  IntegralEstimate out;
  out.scheme = scheme;
  std::vector<double> terms, errors;
  for (int n = 0; n <= max_order; ++n) {
    auto est = integrate_order(f, model, domain, n, scheme);
    const double c = std::pow(model.z, n) / factorial(n);
    terms.push_back(c * est.value);
    errors.push_back(c * est.error);
    out.orders.push_back(est);
  }
  out.value = pairwise_sum(terms);
  out.error = pairwise_sum(errors);
  return out;
}

inline IntegralEstimate lp_integral(const Integrand& f, const ModelSpec& model, const Box& region, int max_order,
                                    const QuadratureScheme& scheme) {
  return lp_integral(f, model, Domain{region}, max_order, scheme);
}

/// Visits the n-tuples of a scheme with their weights. Grids give the full ordered product;
/// Monte Carlo gives `samples` draws with weight sigma^tau(region x S)^n / samples.
template <class Visit>
void marked_point_nodes(const ModelSpec& model, const Domain& domain, int n, const QuadratureScheme& scheme,
                        Visit&& visit) {
  require(n >= 1, ErrorKind::invalid_argument, "node tuples need n >= 1");
  scheme.validate(model.marks);
  std::vector<MarkedPoint> tuple(static_cast<std::size_t>(n));
  if (scheme.kind == SchemeKind::tensor_grid) {
    const auto nodes = grid_point_nodes(model, domain, scheme.points_per_axis, scheme);
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
      double w = 1.0;
      for (int i = 0; i < n; ++i) {
        tuple[static_cast<std::size_t>(i)] = nodes[idx[static_cast<std::size_t>(i)]].point;
        w *= nodes[idx[static_cast<std::size_t>(i)]].weight;
      }
      visit(std::span<const MarkedPoint>(tuple), w);
      int pos = n - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == nodes.size() - 1) idx[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) return;
      ++idx[static_cast<std::size_t>(pos)];
    }
  }
  const double volume = domain_volume(domain);
  const double w = std::pow(volume * model.marks.total_mass(), n) / static_cast<double>(scheme.samples);
  const std::size_t chunks = (scheme.samples + detail::kMonteCarloChunk - 1) / detail::kMonteCarloChunk;
  for (std::size_t c = 0; c < chunks; ++c) {
    Rng rng = make_stream(scheme.seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(c)});
    const std::size_t end = std::min(scheme.samples, (c + 1) * detail::kMonteCarloChunk);
    for (std::size_t s = c * detail::kMonteCarloChunk; s < end; ++s) {
      for (auto& p : tuple) p = detail::draw_point(model, domain, volume, rng);
      visit(std::span<const MarkedPoint>(tuple), w);
    }
  }
}

}  // namespace mgibbs
