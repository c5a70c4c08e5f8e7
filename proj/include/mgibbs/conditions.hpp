#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mgibbs/error.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/numeric.hpp"
#include "mgibbs/potential.hpp"
#include "mgibbs/quadrature.hpp"
#include "mgibbs/rng.hpp"

namespace mgibbs {

struct IntegrabilityOptions {
  int grid_size = 0;  // 0 picks 21 in d = 1 and 7 otherwise
  int mark_reference_nodes = 9;
  int mark_integration_nodes = 32;
  double relative_tolerance = 1e-10;
  double convergence_threshold = 1e-4;
};

struct IntegrabilityReport {
  double C_beta = 0.0;
  bool finite = true;
  int grid_size = 0;
  double coarse_C_beta = 0.0;
  double grid_change = 0.0;
  bool converged = true;
  Position argmax_position{};
  Mark argmax_mark{};
  double quadrature_error = 0.0;
};

namespace detail {

/// Reference marks at which the supremum is sampled.
inline std::vector<Mark> reference_marks(const MarkSpace& marks, int count) {
  std::vector<Mark> out;
  if (marks.kind() == MarkKind::discrete) {
    for (std::size_t i = 0; i < marks.values().size(); ++i) out.push_back({static_cast<int>(i), marks.values()[i]});
  } else if (marks.kind() == MarkKind::circle) {
    for (int i = 0; i < count; ++i) out.push_back({0, 2.0 * std::numbers::pi * i / count});
  } else {
    for (int i = 0; i < count; ++i) {
      out.push_back({0, marks.lower() + (marks.upper() - marks.lower()) * i / std::max(1, count - 1)});
    }
  }
  return out;
}

inline std::vector<MarkNode> integration_marks(const MarkSpace& marks, int count) {
  return mark_nodes(marks, default_mark_rule(marks), count);
}

/// Integrates g(|u|) over the box of displacements u in [lo_i, hi_i], splitting each axis
/// where |u| crosses a breakpoint and at u_i = 0.
template <class G>
QuadResult integrate_radial(G&& g, int dim, const Position& lo, const Position& hi,
                            const std::vector<double>& breakpoints, double tolerance, int axis = 0,
                            double partial_r2 = 0.0) {
  std::vector<double> splits{0.0};
  for (double b : breakpoints) {
    const double rem = b * b - partial_r2;
    if (rem > 0.0) {
      splits.push_back(std::sqrt(rem));
      splits.push_back(-std::sqrt(rem));
    }
  }
  if (axis == dim - 1) {
    return gk_integrate([&](double u) { return g(std::sqrt(partial_r2 + u * u)); }, lo[axis], hi[axis], splits,
                        tolerance);
  }
  QuadResult inner_error;
  auto outer = [&](double u) {
    const auto r = integrate_radial(g, dim, lo, hi, breakpoints, tolerance, axis + 1, partial_r2 + u * u);
    inner_error.error = std::max(inner_error.error, r.error);
    return r.value;
  };
  auto r = gk_integrate(outer, lo[axis], hi[axis], splits, tolerance);
  r.error += inner_error.error * (hi[axis] - lo[axis]);
  return r;
}

/// int |e^{-beta phi((y,t),(x,s))} - 1| sigma^tau(dx, ds) for one reference point.
inline QuadResult mayer_mass_at(const ModelSpec& model, const Position& y, const Mark& t,
                                const std::vector<MarkNode>& nodes, double tolerance) {
  const auto& space = model.space;
  const int dim = space.dimension();
  Position lo{}, hi{};
  for (int i = 0; i < dim; ++i) {
    if (space.boundary() == Boundary::periodic) {
      lo[i] = -0.5 * space.sides()[i];
      hi[i] = 0.5 * space.sides()[i];
    } else {
      lo[i] = -y[i];
      hi[i] = space.sides()[i] - y[i];
    }
  }
  std::vector<double> bps = model.potential->breakpoints();
  if (model.potential->range()) bps.push_back(*model.potential->range());
  QuadResult total;
  for (const auto& node : nodes) {
    auto g = [&](double r) {
      return std::abs(mayer(model.potential->at_distance(r, t, node.mark), model.beta));
    };
    const auto r = integrate_radial(g, dim, lo, hi, bps, tolerance);
    total.value += node.weight * r.value;
    total.error += node.weight * r.error;
  }
  return total;
}

inline std::vector<Position> reference_positions(const PositionSpace& space, int grid) {
  const int dim = space.dimension();
  if (space.boundary() == Boundary::periodic) return {Position{}};  // translation invariant
  std::vector<Position> out;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  for (;;) {
    Position p{};
    for (int i = 0; i < dim; ++i) {
      // Grid includes both faces; the upper face is nudged inside the half-open box.
      double x = space.sides()[i] * idx[i] / std::max(1, grid - 1);
      if (idx[i] == grid - 1) x = std::nextafter(space.sides()[i], 0.0);
      p[i] = x;
    }
    out.push_back(p);
    int a = 0;
    while (a < dim && idx[a] == grid - 1) idx[a++] = 0;
    if (a == dim) break;
    ++idx[a];
  }
  return out;
}

struct GridMax {
  double value = 0.0;
  double error = 0.0;
  Position position{};
  Mark mark{};
};

inline GridMax integrability_max(const ModelSpec& model, int grid, const IntegrabilityOptions& opt) {
  const auto nodes = integration_marks(model.marks, opt.mark_integration_nodes);
  const auto marks = reference_marks(model.marks, opt.mark_reference_nodes);
  GridMax best;
  for (const auto& y : reference_positions(model.space, grid)) {
    for (const auto& t : marks) {
      const auto r = mayer_mass_at(model, y, t, nodes, opt.relative_tolerance);
      if (!std::isfinite(r.value) || !std::isfinite(r.error)) {
        fail(ErrorKind::quadrature_failure, "Mayer factor is not integrable at the configured resolution");
      }
      if (r.error > 1e-6 * std::max(1.0, r.value)) {
        fail(ErrorKind::quadrature_failure, "quadrature did not reach tolerance for the Mayer integral");
      }
      if (r.value > best.value) best = {r.value, r.error, y, t};
      best.error = std::max(best.error, r.error);
    }
  }
  return best;
}

}  // namespace detail

/// C(beta): max over a reference grid of the integrated |Mayer factor|, with a
/// grid-refinement self-check (G -> 2G - 1 reference points per axis).
inline IntegrabilityReport check_integrability(const ModelSpec& model, IntegrabilityOptions opt = {}) {
  model.validate();
  int grid = opt.grid_size > 0 ? opt.grid_size : (model.space.dimension() == 1 ? 21 : 7);
  require(grid >= 2, ErrorKind::invalid_argument, "reference grid needs at least 2 points per axis");
  IntegrabilityReport rep;
  const auto coarse = detail::integrability_max(model, grid, opt);
  const auto fine = detail::integrability_max(model, 2 * grid - 1, opt);
  rep.grid_size = 2 * grid - 1;
  rep.coarse_C_beta = coarse.value;
  rep.C_beta = fine.value;
  rep.finite = std::isfinite(fine.value);
  rep.grid_change = fine.value > 0.0 ? std::abs(fine.value - coarse.value) / fine.value : 0.0;
  rep.converged = rep.grid_change < opt.convergence_threshold;
  rep.argmax_position = fine.position;
  rep.argmax_mark = fine.mark;
  rep.quadrature_error = fine.error;
  return rep;
}

inline IntegrabilityReport check_integrability(const ModelSpec& model, int grid_size) {
  IntegrabilityOptions opt;
  opt.grid_size = grid_size;
  return check_integrability(model, opt);
}

/// Raised when a sampled configuration has E(omega) < -B |omega|.
class StabilityViolation : public Error {
 public:
  StabilityViolation(const std::string& what, FiniteConfiguration witness)
      : Error(ErrorKind::stability_violation, what), witness_(std::move(witness)) {}
  const FiniteConfiguration& witness() const { return witness_; }

 private:
  FiniteConfiguration witness_;
};

struct StabilityReport {
  int trials = 0;
  int max_n = 0;
  double worst_margin = kInfinity;  // min over trials of (E + B n) / n
  int worst_size = 0;
};

/// Falsification check of E(omega) >= -B |omega| on random configurations. Half the
/// trials place all points inside a small ball, where collapse shows first.
inline StabilityReport spot_check_stability(const ModelSpec& model, int trials, int max_n, std::uint64_t seed = 1) {
  model.validate();
  require(trials >= 1 && max_n >= 2, ErrorKind::invalid_argument, "need trials >= 1 and max_n >= 2");
  const double B = model.potential->stability_B();
  const int dim = model.space.dimension();
  StabilityReport rep;
  rep.trials = trials;
  rep.max_n = max_n;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = make_stream(seed, {static_cast<std::uint64_t>(trial)});
    const int n = 2 + trial % (max_n - 1);
    const bool clustered = (trial / (max_n - 1)) % 2 == 1;
    Position centre{};
    for (int i = 0; i < dim; ++i) centre[i] = model.space.sides()[i] * uniform01(rng);
    std::vector<MarkedPoint> pts;
    while (static_cast<int>(pts.size()) < n) {
      MarkedPoint p;
      for (int i = 0; i < dim; ++i) {
        const double side = model.space.sides()[i];
        double x = clustered ? centre[i] + 0.01 * side * (uniform01(rng) - 0.5) : side * uniform01(rng);
        p.position[i] = std::clamp(x, 0.0, std::nextafter(side, 0.0));
      }
      p.mark = model.marks.sample(rng);
      const bool clash = std::any_of(pts.begin(), pts.end(), [&](const auto& q) { return q.position == p.position; });
      if (!clash) pts.push_back(p);
    }
    const auto omega = FiniteConfiguration::canonicalize(pts);
    const double e = energy(omega, model);
    const double margin = (e + B * n) / n;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_size = n;
    }
    if (e < -B * n) {
      std::ostringstream msg;
      msg << "E = " << e << " < -B|omega| = " << -B * n << " for a " << n << "-point configuration";
      throw StabilityViolation(msg.str(), omega);
    }
  }
  return rep;
}

}  // namespace mgibbs
