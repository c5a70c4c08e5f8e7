#pragma once

#include <bit>
#include <functional>
#include <cmath>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "mgibbs/combinat.hpp"
#include "mgibbs/error.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/potential.hpp"
#include "mgibbs/starcalc.hpp"
#include "mgibbs/ursell.hpp"

namespace mgibbs {

inline constexpr int kDefaultTreeBoundCap = 8;

/// Sum over spanning trees of the product of edge weights (Kirchhoff's matrix-tree theorem).
/// `weight` is a symmetric n x n matrix; the diagonal is ignored.
inline double tree_sum(const Eigen::MatrixXd& weight) {
  const int n = static_cast<int>(weight.rows());
  if (n <= 1) return 1.0;
  std::vector<std::uint32_t> adjacency(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && weight(i, j) != 0.0) adjacency[static_cast<std::size_t>(i)] |= 1u << j;
    }
  }
  if (!mask_connected((1u << n) - 1, adjacency)) return 0.0;
  if (n == 2) return weight(0, 1);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (int i = 1; i < n; ++i) {
    double deg = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) deg += weight(i, j);
    }
    lap(i - 1, i - 1) = deg;
    for (int j = 1; j < n; ++j) {
      if (j != i) lap(i - 1, j - 1) = -weight(i, j);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(lap);
  if (llt.info() != Eigen::Success) return std::max(0.0, lap.determinant());
  double det = 1.0;
  const auto& l = llt.matrixLLT();
  for (int i = 0; i < n - 1; ++i) det *= l(i, i) * l(i, i);
  return det;
}

/// |Mayer| weight matrix of a tuple.
inline Eigen::MatrixXd abs_mayer_matrix(std::span<const MarkedPoint> pts, const ModelSpec& model) {
  const int n = static_cast<int>(pts.size());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      w(i, j) = w(j, i) = std::abs(mayer_pair(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)], model));
    }
  }
  return w;
}

/// Q({x}, zeta) = e^{2 beta B (|zeta| + 1)} * sum over trees on {x} u zeta of prod |f|.
inline double tree_bound_Q(const MarkedPoint& anchor, std::span<const MarkedPoint> zeta, const ModelSpec& model,
                           int cap = kDefaultTreeBoundCap) {
  require(static_cast<int>(zeta.size()) <= cap, ErrorKind::size_limit, "tree bound above size cap");
  std::vector<MarkedPoint> pts{anchor};
  pts.insert(pts.end(), zeta.begin(), zeta.end());
  const double B = model.potential->stability_B();
  const double pref = std::exp(2.0 * model.beta * B * static_cast<double>(pts.size()));
  return pref * tree_sum(abs_mayer_matrix(pts, model));
}

/// Multi-anchor Q(omega, zeta): sum over ordered splittings of zeta among the anchors
/// of the product of single-anchor bounds (a star product over the subsets of zeta).
inline double tree_bound_Q(std::span<const MarkedPoint> omega, std::span<const MarkedPoint> zeta,
                           const ModelSpec& model, int cap = kDefaultTreeBoundCap) {
  const int n = static_cast<int>(zeta.size());
  require(n <= cap, ErrorKind::size_limit, "tree bound above size cap");
  const SubsetMask all = (1u << n) - 1;
  ConfigFunctional acc = ConfigFunctional::unit(n);
  for (const auto& x : omega) {
    ConfigFunctional q(n);
    for (SubsetMask t = 0;; ++t) {
      std::vector<MarkedPoint> part;
      for (SubsetMask r = t; r != 0; r &= r - 1) part.push_back(zeta[static_cast<std::size_t>(std::countr_zero(r))]);
      q[t] = tree_bound_Q(x, part, model, cap);
      if (t == all) break;
    }
    acc = star_mul(acc, q);
  }
  return acc[all];
}

enum class AnchorPolicy { lowest_index, highest_index, stability };

inline const char* to_string(AnchorPolicy p) {
  switch (p) {
    case AnchorPolicy::lowest_index: return "lowest_index";
    case AnchorPolicy::highest_index: return "highest_index";
    case AnchorPolicy::stability: return "stability";
  }
  return "unknown";
}

/// Solves Q(w, z) = e^{2 beta B} sum_{w' in z} prod_{y in w'} |f(I(w), y)| Q(w \ I(w) u w', z \ w')
/// with Q(empty, z) = 1*(z), memoised over (w, z) index masks.
inline double tree_bound_recursive(std::span<const MarkedPoint> omega, std::span<const MarkedPoint> zeta,
                                   const ModelSpec& model, AnchorPolicy policy = AnchorPolicy::lowest_index,
                                   int cap = kDefaultTreeBoundCap) {
  const int m = static_cast<int>(omega.size());
  const int n = static_cast<int>(zeta.size());
  require(m + n <= cap, ErrorKind::size_limit, "recursive tree bound above size cap");
  std::vector<MarkedPoint> pts(omega.begin(), omega.end());
  pts.insert(pts.end(), zeta.begin(), zeta.end());
  const auto pf = pair_factors(pts, model);
  std::vector<double> phi(static_cast<std::size_t>((m + n) * (m + n)), 0.0);
  for (int i = 0; i < m + n; ++i) {
    for (int j = 0; j < m + n; ++j) {
      if (i != j) phi[static_cast<std::size_t>(i * (m + n) + j)] = pair_value(pts[i], pts[j], model);
    }
  }
  const double growth = std::exp(2.0 * model.beta * model.potential->stability_B());

  auto choose = [&](SubsetMask w) {
    if (policy == AnchorPolicy::lowest_index) return std::countr_zero(w);
    if (policy == AnchorPolicy::highest_index) return 31 - std::countl_zero(w);
    int best = -1;
    double best_w = -kInfinity;
    for (SubsetMask r = w; r != 0; r &= r - 1) {
      const int i = std::countr_zero(r);
      double s = 0.0;
      for (SubsetMask q = w ^ (1u << i); q != 0; q &= q - 1) s += phi[static_cast<std::size_t>(i * (m + n) + std::countr_zero(q))];
      if (s > best_w || best < 0) {
        best_w = s;
        best = i;
      }
    }
    return best;
  };

  std::unordered_map<std::uint64_t, double> memo;
  std::function<double(SubsetMask, SubsetMask)> solve = [&](SubsetMask w, SubsetMask z) -> double {
    if (w == 0) return z == 0 ? 1.0 : 0.0;
    const std::uint64_t key = (static_cast<std::uint64_t>(w) << 32) | z;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const int x = choose(w);
    const SubsetMask w_rest = w ^ (1u << x);
    CompensatedSum acc;
    for (SubsetMask t = z;; t = (t - 1) & z) {
      double weight = 1.0;
      for (SubsetMask r = t; r != 0 && weight != 0.0; r &= r - 1) weight *= std::abs(pf.f(x, std::countr_zero(r)));
      if (weight != 0.0) acc += weight * solve(w_rest | t, z ^ t);
      if (t == 0) break;
    }
    const double v = growth * acc.value();
    memo.emplace(key, v);
    return v;
  };
  const SubsetMask w0 = (1u << m) - 1;
  const SubsetMask z0 = ((1u << (m + n)) - 1) ^ w0;
  return solve(w0, z0);
}

}  // namespace mgibbs
