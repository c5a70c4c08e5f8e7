#pragma once

#include <bit>
#include <cmath>
#include <span>
#include <vector>

#include "mgibbs/combinat.hpp"
#include "mgibbs/error.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/numeric.hpp"
#include "mgibbs/potential.hpp"
#include "mgibbs/starcalc.hpp"

namespace mgibbs {

/// Pairwise Boltzmann and Mayer factors of a point tuple.
struct PairFactors {
  int n = 0;
  std::vector<double> boltzmann;  // e^{-beta phi}, row-major n x n
  std::vector<double> mayer;      // e^{-beta phi} - 1
  std::vector<std::uint32_t> adjacency;  // bit j set in row i iff mayer(i, j) != 0

  double b(int i, int j) const { return boltzmann[static_cast<std::size_t>(i * n + j)]; }
  double f(int i, int j) const { return mayer[static_cast<std::size_t>(i * n + j)]; }
};

inline PairFactors pair_factors(std::span<const MarkedPoint> pts, const ModelSpec& model) {
  PairFactors pf;
  pf.n = static_cast<int>(pts.size());
  const std::size_t n = pts.size();
  pf.boltzmann.assign(n * n, 1.0);
  pf.mayer.assign(n * n, 0.0);
  pf.adjacency.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double phi = pair_value(pts[i], pts[j], model);
      const double b = boltzmann(phi, model.beta);
      const double f = mayer(phi, model.beta);
      pf.boltzmann[i * n + j] = pf.boltzmann[j * n + i] = b;
      pf.mayer[i * n + j] = pf.mayer[j * n + i] = f;
      if (f != 0.0) {
        pf.adjacency[i] |= 1u << j;
        pf.adjacency[j] |= 1u << i;
      }
    }
  }
  return pf;
}

/// rho(S) = e^{-beta E(S)} for every subset, as a product of pair factors.
inline ConfigFunctional boltzmann_functional(const PairFactors& pf, int cap = kDefaultGroundCap) {
  ConfigFunctional rho(pf.n, cap);
  rho[0] = 1.0;
  for (SubsetMask s = 1; s <= rho.full() && s != 0; ++s) {
    const int top = 31 - std::countl_zero(s);
    const SubsetMask rest = s ^ (1u << top);
    double v = rho[rest];
    for (SubsetMask r = rest; r != 0 && v != 0.0; r &= r - 1) v *= pf.b(top, std::countr_zero(r));
    rho[s] = v;
    if (s == rho.full()) break;
  }
  return rho;
}

inline ConfigFunctional boltzmann_functional(std::span<const MarkedPoint> pts, const ModelSpec& model,
                                             int cap = kDefaultGroundCap) {
  return boltzmann_functional(pair_factors(pts, model), cap);
}

/// k on every subset of a ground configuration.
struct UrsellTable {
  std::vector<MarkedPoint> ground;
  ConfigFunctional values;

  double operator[](SubsetMask s) const { return values[s]; }
  double full() const { return values[values.full()]; }
};

namespace detail {

/// Anchored inversion of e^{-beta E} = exp* k over the subsets visited by `visit_order`.
/// Subsets whose Mayer graph is disconnected get k = 0 exactly.
inline void ursell_recursion(ConfigFunctional& k, const ConfigFunctional& rho, const PairFactors& pf,
                             SubsetMask s) {
  if (!mask_connected(s, pf.adjacency)) {
    k[s] = 0.0;
    return;
  }
  const SubsetMask anchor = s & (~s + 1);
  const SubsetMask rest = s ^ anchor;
  CompensatedSum acc(rho[s]);
  if (rest != 0) {
    for (SubsetMask t = (rest - 1) & rest;; t = (t - 1) & rest) {
      const double kt = k[t | anchor];
      if (kt != 0.0) acc += -kt * rho[rest ^ t];
      if (t == 0) break;
    }
  }
  k[s] = acc.value();
}

}  // namespace detail

inline UrsellTable ursell_table(std::span<const MarkedPoint> pts, const ModelSpec& model,
                                int cap = kDefaultGroundCap) {
  require(static_cast<int>(pts.size()) <= cap, ErrorKind::size_limit, "Ursell table above size cap");
  const auto pf = pair_factors(pts, model);
  const auto rho = boltzmann_functional(pf, cap);
  UrsellTable t{std::vector<MarkedPoint>(pts.begin(), pts.end()), ConfigFunctional(pf.n, cap)};
  for (SubsetMask s = 1; s <= t.values.full() && s != 0; ++s) {
    detail::ursell_recursion(t.values, rho, pf, s);
    if (s == t.values.full()) break;
  }
  return t;
}

inline UrsellTable ursell_table(const FiniteConfiguration& omega, const ModelSpec& model,
                                int cap = kDefaultGroundCap) {
  return ursell_table(omega.span(), model, cap);
}

/// k of the whole tuple; only subsets containing point 0 are solved for.
inline double ursell_value(std::span<const MarkedPoint> pts, const ModelSpec& model) {
  const int n = static_cast<int>(pts.size());
  if (n == 0) return 0.0;
  if (n == 1) return 1.0;
  require(n <= 24, ErrorKind::size_limit, "Ursell value above size cap");
  const auto pf = pair_factors(pts, model);
  if (!mask_connected((1u << n) - 1, pf.adjacency)) return 0.0;
  if (n == 2) return pf.f(0, 1);
  const auto rho = boltzmann_functional(pf, 24);
  ConfigFunctional k(n, 24);
  for (SubsetMask s = 1; s <= k.full(); s += 2) {
    detail::ursell_recursion(k, rho, pf, s);
    if (s == k.full()) break;
  }
  return k[k.full()];
}

/// Graph-sum Ursell coefficient: sum over connected graphs of products of Mayer factors.
inline double ursell_direct(std::span<const MarkedPoint> pts, const ModelSpec& model) {
  const int n = static_cast<int>(pts.size());
  if (n == 0) return 0.0;
  require(n <= kConnectedGraphCap, ErrorKind::size_limit, "direct Ursell sum is limited to n <= 5");
  const auto pf = pair_factors(pts, model);
  CompensatedSum acc;
  for_each_connected_graph(n, [&](const LabeledGraph& g) {
    double prod = 1.0;
    for (auto [a, b] : g.edges) prod *= pf.f(a, b);
    acc += prod;
  });
  return acc.value();
}

inline double ursell_direct(const FiniteConfiguration& omega, const ModelSpec& model) {
  return ursell_direct(omega.span(), model);
}

/// kbar(omega, zeta) = (exp*(-k) * D_omega e^{-beta E})(zeta), evaluated on the subsets of zeta.
inline double kbar_unchecked(std::span<const MarkedPoint> omega, std::span<const MarkedPoint> zeta,
                             const ModelSpec& model, int cap = 12) {
  const int m = static_cast<int>(omega.size());
  const int n = static_cast<int>(zeta.size());
  require(m + n <= cap, ErrorKind::size_limit, "kbar ground above cap");
  if (m == 0) return n == 0 ? 1.0 : 0.0;
  std::vector<MarkedPoint> ground(zeta.begin(), zeta.end());
  ground.insert(ground.end(), omega.begin(), omega.end());
  const auto pf = pair_factors(ground, model);
  const auto rho_all = boltzmann_functional(pf, 24);
  const SubsetMask zeta_mask = (1u << n) - 1;
  const SubsetMask omega_mask = ((1u << (m + n)) - 1) ^ zeta_mask;
  const auto rho_zeta = restrict_ground(rho_all, zeta_mask);
  const auto inverse = star_exp(-star_log(rho_zeta));
  CompensatedSum acc;
  for (SubsetMask t = zeta_mask;; t = (t - 1) & zeta_mask) {
    acc += inverse[t] * rho_all[(zeta_mask ^ t) | omega_mask];
    if (t == 0) break;
  }
  return acc.value();
}

inline double kbar(const FiniteConfiguration& omega, const FiniteConfiguration& zeta, const ModelSpec& model,
                   int cap = 12) {
  require(position_disjoint(omega.span(), zeta.span()), ErrorKind::overlapping_configurations,
          "kbar needs position-disjoint configurations");
  return kbar_unchecked(omega.span(), zeta.span(), model, cap);
}

}  // namespace mgibbs
