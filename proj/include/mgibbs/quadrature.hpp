#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "mgibbs/error.hpp"
#include "mgibbs/model.hpp"

namespace mgibbs {

enum class MarkRule { exact_discrete_sum, periodic_trapezoid, gauss };

inline const char* to_string(MarkRule r) {
  switch (r) {
    case MarkRule::exact_discrete_sum: return "exact_discrete_sum";
    case MarkRule::periodic_trapezoid: return "periodic_trapezoid";
    case MarkRule::gauss: return "gauss";
  }
  return "unknown";
}

/// The natural rule for a mark space.
inline MarkRule default_mark_rule(const MarkSpace& marks) {
  switch (marks.kind()) {
    case MarkKind::discrete: return MarkRule::exact_discrete_sum;
    case MarkKind::circle: return MarkRule::periodic_trapezoid;
    case MarkKind::interval: return MarkRule::gauss;
  }
  return MarkRule::gauss;
}

/// Gauss-Legendre nodes and weights on [a, b].
inline std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b) {
  require(n >= 1, ErrorKind::invalid_argument, "need at least one Gauss node");
  std::vector<std::pair<double, double>> out;
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  auto add = [&](double x) {
    const double dp = boost::math::legendre_p_prime<double>(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out.emplace_back(mid + half * x, half * w);
  };
  for (double x : zeros) {
    if (x == 0.0) {
      add(0.0);
    } else {
      add(-x);
      add(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct MarkNode {
  Mark mark;
  double weight;
};

/// Nodes whose weights sum to tau(S) (exactly for discrete marks).
inline std::vector<MarkNode> mark_nodes(const MarkSpace& marks, MarkRule rule, int count) {
  std::vector<MarkNode> out;
  switch (rule) {
    case MarkRule::exact_discrete_sum:
      require(marks.kind() == MarkKind::discrete, ErrorKind::scheme_mismatch,
              "exact_discrete_sum needs discrete marks");
      for (std::size_t i = 0; i < marks.values().size(); ++i) {
        out.push_back({Mark{static_cast<int>(i), marks.values()[i]}, marks.weights()[i]});
      }
      return out;
    case MarkRule::periodic_trapezoid:
      require(marks.kind() == MarkKind::circle, ErrorKind::scheme_mismatch, "periodic_trapezoid needs circle marks");
      require(count >= 1, ErrorKind::scheme_mismatch, "mark node count must be positive");
      for (int i = 0; i < count; ++i) {
        out.push_back({Mark{0, 2.0 * std::numbers::pi * i / count}, marks.total_mass() / count});
      }
      return out;
    case MarkRule::gauss:
      require(marks.kind() != MarkKind::discrete, ErrorKind::scheme_mismatch, "gauss mark rule needs continuous marks");
      require(count >= 1, ErrorKind::scheme_mismatch, "mark node count must be positive");
      for (auto [x, w] : gauss_legendre(count, marks.lower(), marks.upper())) {
        out.push_back({Mark{0, x}, w * marks.density()});
      }
      return out;
  }
  return out;
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod over [a, b], split at every interior point in `splits`.
template <class F>
QuadResult gk_integrate(F&& f, double a, double b, std::vector<double> splits, double tolerance = 1e-12) {
  QuadResult r;
  if (!(b > a)) return r;
  splits.push_back(a);
  splits.push_back(b);
  std::sort(splits.begin(), splits.end());
  double lo = a;
  for (double s : splits) {
    if (s <= lo) continue;
    if (s > b) s = b;
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, s, 12, tolerance, &err);
    r.value += v;
    r.error += err;
    lo = s;
    if (lo >= b) break;
  }
  return r;
}

}  // namespace mgibbs
