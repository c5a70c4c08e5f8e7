#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mgibbs/error.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/numeric.hpp"

namespace mgibbs {

/// Radial-and-mark form of a pair interaction: phi(r, s, t).
using PairKernel = std::function<double(double r, const Mark& s, const Mark& t)>;

/// Symmetric pair interaction with values in R u {+inf}.
class PairPotential {
 public:
  struct Declaration {
    std::string name;
    std::map<std::string, double> parameters;
    double stability_B = 0.0;
    std::optional<double> range;
    /// Declared infimum of phi over all pairs (used to bound boundary interactions).
    double lower_bound = 0.0;
    /// Radii where phi or its derivative jumps; quadrature splits there.
    std::vector<double> breakpoints;
  };

  PairPotential(Declaration decl, PairKernel kernel) : decl_(std::move(decl)), kernel_(std::move(kernel)) {
    require(decl_.stability_B >= 0.0, ErrorKind::invalid_argument, "stability constant must be nonnegative");
    if (decl_.range) require(*decl_.range >= 0.0, ErrorKind::invalid_argument, "range must be nonnegative");
  }

  const std::string& name() const { return decl_.name; }
  const std::map<std::string, double>& parameters() const { return decl_.parameters; }
  double stability_B() const { return decl_.stability_B; }
  const std::optional<double>& range() const { return decl_.range; }
  double lower_bound() const { return decl_.lower_bound; }
  const std::vector<double>& breakpoints() const { return decl_.breakpoints; }
  const Declaration& declaration() const { return decl_; }

  double at_distance(double r, const Mark& s, const Mark& t) const {
    if (decl_.range && r >= *decl_.range) return 0.0;
    return kernel_(r, s, t);
  }

  double operator()(const MarkedPoint& a, const MarkedPoint& b, const PositionSpace& space) const {
    return at_distance(space.distance(a.position, b.position), a.mark, b.mark);
  }

 private:
  Declaration decl_;
  PairKernel kernel_;
};

inline double pair_value(const MarkedPoint& a, const MarkedPoint& b, const ModelSpec& model) {
  return (*model.potential)(a, b, model.space);
}

/// E(omega) = sum over unordered pairs; +inf if any pair is +inf.
inline double energy(std::span<const MarkedPoint> omega, const ModelSpec& model) {
  double e = 0.0;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    for (std::size_t j = i + 1; j < omega.size(); ++j) {
      const double v = pair_value(omega[i], omega[j], model);
      if (v == kInfinity) return kInfinity;
      e += v;
    }
  }
  return e;
}

inline double energy(const FiniteConfiguration& omega, const ModelSpec& model) {
  return energy(omega.span(), model);
}

/// W(omega, zeta) without the disjointness check; for integrands whose nodes may coincide.
inline double interaction_unchecked(std::span<const MarkedPoint> omega, std::span<const MarkedPoint> zeta,
                                    const ModelSpec& model) {
  double w = 0.0;
  for (const auto& a : omega) {
    for (const auto& b : zeta) {
      const double v = pair_value(a, b, model);
      if (v == kInfinity) return kInfinity;
      w += v;
    }
  }
  return w;
}

inline double interaction(const FiniteConfiguration& omega, const FiniteConfiguration& zeta, const ModelSpec& model) {
  require(position_disjoint(omega.span(), zeta.span()), ErrorKind::overlapping_configurations,
          "configurations share a position");
  return interaction_unchecked(omega.span(), zeta.span(), model);
}

/// E_region(omega) = E(omega_region) + W(omega_region, omega outside region).
inline double conditional_energy(const Box& region, const FiniteConfiguration& omega, const ModelSpec& model) {
  std::vector<MarkedPoint> inside;
  std::vector<MarkedPoint> outside;
  for (const auto& p : omega) (region.contains(p.position) ? inside : outside).push_back(p);
  const double e = energy(std::span<const MarkedPoint>(inside), model);
  if (e == kInfinity) return kInfinity;
  const double w = interaction_unchecked(inside, outside, model);
  if (w == kInfinity) return kInfinity;
  return e + w;
}

/// Mayer factor of a pair under the model's beta.
inline double mayer_pair(const MarkedPoint& a, const MarkedPoint& b, const ModelSpec& model) {
  return mayer(pair_value(a, b, model), model.beta);
}

}  // namespace mgibbs
