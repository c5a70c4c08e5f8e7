#pragma once

// Brute-force reference computations. Slow and small-n only; they share no code
// paths with the production routines they check.

#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "mgibbs/combinat.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/numeric.hpp"
#include "mgibbs/potential.hpp"
#include "mgibbs/starcalc.hpp"

namespace mgibbs::oracle {

/// Connected labeled graphs on n vertices, counted by depth-first search over an adjacency matrix.
inline long connected_graph_count(int n) {
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
  }
  long count = 0;
  for (long bits = 0; bits < (1L << all.size()); ++bits) {
    std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    for (std::size_t e = 0; e < all.size(); ++e) {
      if (bits & (1L << e)) adj[all[e].first][all[e].second] = adj[all[e].second][all[e].first] = true;
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        if (adj[v][w] && !seen[w]) {
          seen[w] = true;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    if (reached == n) ++count;
  }
  return count;
}

/// Weighted spanning-tree sum by Pruefer enumeration.
inline double tree_sum(const std::vector<std::vector<double>>& w) {
  const int n = static_cast<int>(w.size());
  double total = 0.0;
  for_each_tree(n, [&](const LabeledGraph& t) {
    double prod = 1.0;
    for (auto [a, b] : t.edges) prod *= w[a][b];
    total += prod;
  }, 12);
  return total;
}

inline std::vector<std::vector<double>> abs_mayer(std::span<const MarkedPoint> pts, const ModelSpec& model) {
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) w[i][j] = std::abs(std::exp(-model.beta * pair_value(pts[i], pts[j], model)) - 1.0);
    }
  }
  return w;
}

/// exp* as the literal power series sum_m psi^{*m} / m!.
inline ConfigFunctional star_exp_series(const ConfigFunctional& psi) {
  ConfigFunctional result = ConfigFunctional::unit(psi.ground_size());
  ConfigFunctional power = ConfigFunctional::unit(psi.ground_size());
  for (int m = 1; m <= psi.ground_size(); ++m) {
    power = star_mul(power, psi);
    ConfigFunctional term = power;
    term *= 1.0 / factorial(m);
    result += term;
  }
  return result;
}

/// ln*(1* + phi) as the literal series sum_m (-1)^{m-1} phi^{*m} / m.
inline ConfigFunctional star_log_series(const ConfigFunctional& f) {
  ConfigFunctional phi = f;
  phi[0] -= 1.0;
  ConfigFunctional result(f.ground_size());
  ConfigFunctional power = ConfigFunctional::unit(f.ground_size());
  for (int m = 1; m <= f.ground_size(); ++m) {
    power = star_mul(power, phi);
    ConfigFunctional term = power;
    term *= (m % 2 == 1 ? 1.0 : -1.0) / m;
    result += term;
  }
  return result;
}

/// kbar by its recursion in the first point x0 of omega:
/// kbar(w, z) = e^{-beta W(x0, w \ x0)} sum_{w' in z} prod_{y in w'} f(x0, y) kbar(w \ x0 u w', z \ w').
inline double kbar_recursive(std::span<const MarkedPoint> omega, std::span<const MarkedPoint> zeta,
                             const ModelSpec& model) {
  std::vector<MarkedPoint> pts(omega.begin(), omega.end());
  pts.insert(pts.end(), zeta.begin(), zeta.end());
  const int total = static_cast<int>(pts.size());
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> memo;
  std::function<double(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t w, std::uint32_t z) -> double {
    if (w == 0) return z == 0 ? 1.0 : 0.0;
    if (auto it = memo.find({w, z}); it != memo.end()) return it->second;
    const int x = std::countr_zero(w);
    const std::uint32_t rest = w ^ (1u << x);
    double wsum = 0.0;
    bool hard = false;
    for (int j = 0; j < total; ++j) {
      if (rest & (1u << j)) {
        const double v = pair_value(pts[x], pts[j], model);
        if (v == kInfinity) hard = true;
        wsum += v;
      }
    }
    double acc = 0.0;
    if (!hard) {
      for (std::uint32_t t = z;; t = (t - 1) & z) {
        double prod = 1.0;
        for (int j = 0; j < total; ++j) {
          if (t & (1u << j)) prod *= mayer(pair_value(pts[x], pts[j], model), model.beta);
        }
        acc += prod * rec(rest | t, z ^ t);
        if (t == 0) break;
      }
      acc *= std::exp(-model.beta * wsum);
    }
    memo[{w, z}] = acc;
    return acc;
  };
  const std::uint32_t w0 = (1u << omega.size()) - 1;
  return rec(w0, ((1u << total) - 1) ^ w0);
}

/// Dense ordered midpoint rule for n-fold integrals over (box x S)^n, discrete marks only.
inline double dense_grid_integral(const std::function<double(std::span<const MarkedPoint>)>& f,
                                  const ModelSpec& model, const Box& box, int n, int g) {
  require(model.marks.kind() == MarkKind::discrete && box.dim == 1, ErrorKind::invalid_argument,
          "dense oracle supports 1-d boxes with discrete marks");
  const auto& values = model.marks.values();
  const auto& weights = model.marks.weights();
  const std::size_t k = static_cast<std::size_t>(g) * values.size();
  const double h = (box.upper[0] - box.lower[0]) / g;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  std::vector<MarkedPoint> pts(static_cast<std::size_t>(n));
  double total = 0.0;
  if (n == 0) return f(pts);
  for (;;) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      const std::size_t cell = idx[i] / values.size();
      const std::size_t mark = idx[i] % values.size();
      pts[i] = MarkedPoint{{box.lower[0] + h * (cell + 0.5), 0.0, 0.0}, Mark{static_cast<int>(mark), values[mark]}};
      w *= h * weights[mark];
    }
    total += w * f(pts);
    int pos = n - 1;
    while (pos >= 0 && idx[pos] == k - 1) idx[pos--] = 0;
    if (pos < 0) break;
    ++idx[pos];
  }
  return total;
}

/// int |e^{-beta phi((y,t),(x,s))} - 1| over [0, L] x S by a dense midpoint rule (1-d, discrete marks).
inline double dense_mayer_mass(const ModelSpec& model, double y, const Mark& t, int cells) {
  const double L = model.space.sides()[0];
  const double h = L / cells;
  double total = 0.0;
  for (std::size_t s = 0; s < model.marks.values().size(); ++s) {
    const Mark m{static_cast<int>(s), model.marks.values()[s]};
    double acc = 0.0;
    for (int i = 0; i < cells; ++i) {
      const double x = h * (i + 0.5);
      acc += std::abs(std::exp(-model.beta * model.potential->at_distance(model.space.distance({x}, {y}), t, m)) - 1.0);
    }
    total += model.marks.weights()[s] * acc * h;
  }
  return total;
}

}  // namespace mgibbs::oracle
