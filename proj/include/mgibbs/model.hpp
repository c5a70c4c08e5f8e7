#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mgibbs/error.hpp"
#include "mgibbs/rng.hpp"

namespace mgibbs {

inline constexpr int kMaxDimension = 3;

/// Coordinates beyond the space dimension are kept at zero.
using Position = std::array<double, kMaxDimension>;

/// Axis-aligned half-open box [lower, upper) in the first `dim` coordinates.
struct Box {
  int dim = 1;
  Position lower{};
  Position upper{};

  bool contains(const Position& p) const {
    for (int i = 0; i < dim; ++i) {
      if (p[i] < lower[i] || p[i] >= upper[i]) return false;
    }
    return true;
  }

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= upper[i] - lower[i];
    return v;
  }

  bool inside(const Box& outer) const {
    if (dim != outer.dim) return false;
    for (int i = 0; i < dim; ++i) {
      if (lower[i] < outer.lower[i] || upper[i] > outer.upper[i]) return false;
    }
    return true;
  }

  bool valid() const {
    if (dim < 1 || dim > kMaxDimension) return false;
    for (int i = 0; i < dim; ++i) {
      if (!(upper[i] > lower[i])) return false;
    }
    return true;
  }

  /// The box grown by `margin` on every side.
  Box expanded(double margin) const {
    Box b = *this;
    for (int i = 0; i < dim; ++i) {
      b.lower[i] -= margin;
      b.upper[i] += margin;
    }
    return b;
  }

  bool operator==(const Box&) const = default;
};

inline Box make_box(std::span<const double> lower, std::span<const double> upper) {
  require(lower.size() == upper.size() && !lower.empty() && lower.size() <= kMaxDimension,
          ErrorKind::invalid_argument, "box bounds must have matching dimension 1..3");
  Box b;
  b.dim = static_cast<int>(lower.size());
  for (int i = 0; i < b.dim; ++i) {
    b.lower[i] = lower[i];
    b.upper[i] = upper[i];
  }
  require(b.valid(), ErrorKind::invalid_argument, "box must have positive side lengths");
  return b;
}

inline Box interval_box(double lo, double hi) {
  const double lower[] = {lo};
  const double upper[] = {hi};
  return make_box(lower, upper);
}

/// Splits outer \ hole into disjoint boxes (slab decomposition, at most 2*dim pieces).
inline std::vector<Box> box_difference(const Box& outer, const Box& hole) {
  std::vector<Box> pieces;
  Box rest = outer;
  for (int axis = 0; axis < outer.dim; ++axis) {
    const double lo = std::max(hole.lower[axis], rest.lower[axis]);
    const double hi = std::min(hole.upper[axis], rest.upper[axis]);
    if (lo >= hi) {
      pieces.push_back(rest);
      return pieces;
    }
    if (rest.lower[axis] < lo) {
      Box below = rest;
      below.upper[axis] = lo;
      pieces.push_back(below);
    }
    if (hi < rest.upper[axis]) {
      Box above = rest;
      above.lower[axis] = hi;
      pieces.push_back(above);
    }
    rest.lower[axis] = lo;
    rest.upper[axis] = hi;
  }
  return pieces;
}

enum class Boundary { free, periodic };

/// The box [0, L_1] x ... x [0, L_d] with free or periodic boundary.
class PositionSpace {
 public:
  PositionSpace() : PositionSpace(1, {1.0, 0.0, 0.0}, Boundary::free) {}

  PositionSpace(int dimension, Position sides, Boundary boundary)
      : dimension_(dimension), sides_(sides), boundary_(boundary) {
    require(dimension >= 1 && dimension <= kMaxDimension, ErrorKind::invalid_argument,
            "dimension must be 1..3");
    for (int i = 0; i < dimension; ++i) {
      require(sides[i] > 0.0 && std::isfinite(sides[i]), ErrorKind::invalid_argument,
              "side lengths must be positive");
    }
    for (int i = dimension; i < kMaxDimension; ++i) sides_[i] = 0.0;
  }

  static PositionSpace unit_interval() { return PositionSpace(1, {1.0, 0.0, 0.0}, Boundary::free); }

  int dimension() const { return dimension_; }
  const Position& sides() const { return sides_; }
  Boundary boundary() const { return boundary_; }

  Box box() const {
    Box b;
    b.dim = dimension_;
    b.upper = sides_;
    return b;
  }

  double volume() const { return box().volume(); }

  double distance(const Position& a, const Position& b) const {
    double r2 = 0.0;
    for (int i = 0; i < dimension_; ++i) {
      double d = std::abs(a[i] - b[i]);
      if (boundary_ == Boundary::periodic) {
        d = std::fmod(d, sides_[i]);
        d = std::min(d, sides_[i] - d);
      }
      r2 += d * d;
    }
    return std::sqrt(r2);
  }

 private:
  int dimension_;
  Position sides_;
  Boundary boundary_;
};

enum class MarkKind { discrete, circle, interval };

/// A mark value. `label` indexes the discrete label set; `value` is the numeric
/// value the potentials see (label value, angle, or real coordinate).
struct Mark {
  int label = 0;
  double value = 0.0;

  bool operator==(const Mark&) const = default;
};

/// Finite mark measure tau on the mark space S. Position-independent.
class MarkSpace {
 public:
  static MarkSpace discrete(std::vector<double> values, std::vector<double> weights) {
    require(!values.empty() && values.size() == weights.size(), ErrorKind::invalid_argument,
            "discrete marks need matching values and weights");
    MarkSpace s;
    s.kind_ = MarkKind::discrete;
    double total = 0.0;
    for (double w : weights) {
      require(w >= 0.0 && std::isfinite(w), ErrorKind::invalid_argument, "weights must be nonnegative");
      total += w;
    }
    require(total > 0.0, ErrorKind::invalid_argument, "mark mass must be positive");
    s.values_ = std::move(values);
    s.weights_ = std::move(weights);
    s.mass_ = total;
    return s;
  }

  /// Uniform density mass/(2 pi) on angles [0, 2 pi).
  static MarkSpace circle(double mass = 1.0) {
    require(mass > 0.0 && std::isfinite(mass), ErrorKind::invalid_argument, "mark mass must be positive");
    MarkSpace s;
    s.kind_ = MarkKind::circle;
    s.mass_ = mass;
    s.lower_ = 0.0;
    s.upper_ = 2.0 * std::numbers::pi;
    return s;
  }

  /// Uniform density mass/(upper-lower) on [lower, upper].
  static MarkSpace interval(double lower, double upper, double mass = 1.0) {
    require(upper > lower, ErrorKind::invalid_argument, "mark interval must be nonempty");
    require(mass > 0.0 && std::isfinite(mass), ErrorKind::invalid_argument, "mark mass must be positive");
    MarkSpace s;
    s.kind_ = MarkKind::interval;
    s.mass_ = mass;
    s.lower_ = lower;
    s.upper_ = upper;
    return s;
  }

  /// The single-mark space (unmarked points).
  static MarkSpace single() { return discrete({0.0}, {1.0}); }

  MarkKind kind() const { return kind_; }
  double total_mass() const { return mass_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  /// Density of tau w.r.t. the reference measure (counting for discrete, Lebesgue otherwise).
  double density() const { return kind_ == MarkKind::discrete ? 0.0 : mass_ / (upper_ - lower_); }

  Mark label_mark(int label) const {
    require(kind_ == MarkKind::discrete && label >= 0 && label < static_cast<int>(values_.size()),
            ErrorKind::invalid_argument, "unknown mark label");
    return Mark{label, values_[static_cast<std::size_t>(label)]};
  }

  Mark value_mark(double value) const {
    if (kind_ == MarkKind::discrete) {
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] == value) return Mark{static_cast<int>(i), value};
      }
      fail(ErrorKind::invalid_argument, "mark value is not a discrete label value");
    }
    require(value >= lower_ && value <= upper_, ErrorKind::invalid_argument, "mark outside mark space");
    return Mark{0, value};
  }

  bool contains(const Mark& m) const {
    if (kind_ == MarkKind::discrete) {
      return m.label >= 0 && m.label < static_cast<int>(values_.size()) &&
             values_[static_cast<std::size_t>(m.label)] == m.value;
    }
    return m.value >= lower_ && m.value <= upper_;
  }

  /// Draws from the normalized mark law tau / tau(S).
  Mark sample(Rng& rng) const {
    if (kind_ == MarkKind::discrete) {
      std::discrete_distribution<int> pick(weights_.begin(), weights_.end());
      const int label = pick(rng);
      return Mark{label, values_[static_cast<std::size_t>(label)]};
    }
    return Mark{0, lower_ + (upper_ - lower_) * uniform01(rng)};
  }

 private:
  MarkKind kind_ = MarkKind::discrete;
  std::vector<double> values_;
  std::vector<double> weights_;
  double mass_ = 1.0;
  double lower_ = 0.0;
  double upper_ = 0.0;
};

struct MarkedPoint {
  Position position{};
  Mark mark{};

  bool operator==(const MarkedPoint&) const = default;
};

inline MarkedPoint point1(double x, Mark mark = {}) { return MarkedPoint{{x, 0.0, 0.0}, mark}; }

/// A finite marked configuration with pairwise-distinct positions, stored in
/// lexicographic position order.
class FiniteConfiguration {
 public:
  FiniteConfiguration() = default;

  /// Sorts and validates; throws DuplicatePosition on coincident positions.
  static FiniteConfiguration canonicalize(std::vector<MarkedPoint> points) {
    std::sort(points.begin(), points.end(),
              [](const MarkedPoint& a, const MarkedPoint& b) { return a.position < b.position; });
    for (std::size_t i = 1; i < points.size(); ++i) {
      require(points[i - 1].position != points[i].position, ErrorKind::duplicate_position,
              "two points share a position");
    }
    FiniteConfiguration c;
    c.points_ = std::move(points);
    return c;
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const MarkedPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<MarkedPoint>& points() const { return points_; }
  std::span<const MarkedPoint> span() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  bool operator==(const FiniteConfiguration&) const = default;

 private:
  std::vector<MarkedPoint> points_;
};

/// Points of `config` whose position lies in `region`. The region must lie in the box.
inline FiniteConfiguration restrict_to(const FiniteConfiguration& config, const Box& region,
                                       const PositionSpace& space) {
  require(region.inside(space.box()), ErrorKind::region_out_of_bounds, "region is not inside the model box");
  std::vector<MarkedPoint> kept;
  for (const auto& p : config) {
    if (region.contains(p.position)) kept.push_back(p);
  }
  return FiniteConfiguration::canonicalize(std::move(kept));
}

/// Points of `config` outside `region` (the exterior part omega_{X \ region}).
inline FiniteConfiguration exterior_of(const FiniteConfiguration& config, const Box& region) {
  std::vector<MarkedPoint> kept;
  for (const auto& p : config) {
    if (!region.contains(p.position)) kept.push_back(p);
  }
  return FiniteConfiguration::canonicalize(std::move(kept));
}

/// Union of two configurations; throws DuplicatePosition if positions collide.
inline FiniteConfiguration merge(const FiniteConfiguration& a, const FiniteConfiguration& b) {
  std::vector<MarkedPoint> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return FiniteConfiguration::canonicalize(std::move(all));
}

inline bool position_disjoint(std::span<const MarkedPoint> a, std::span<const MarkedPoint> b) {
  for (const auto& p : a) {
    for (const auto& q : b) {
      if (p.position == q.position) return false;
    }
  }
  return true;
}

class PairPotential;

/// Everything needed to define the Lebesgue-Poisson measure and the specification.
struct ModelSpec {
  PositionSpace space;
  MarkSpace marks = MarkSpace::single();
  double z = 1.0;
  double beta = 1.0;
  std::shared_ptr<const PairPotential> potential;

  /// sigma^tau(region x S) for Lebesgue sigma.
  double intensity_mass(const Box& region) const { return region.volume() * marks.total_mass(); }
  double intensity_mass() const { return intensity_mass(space.box()); }

  void validate() const {
    require(z >= 0.0 && std::isfinite(z), ErrorKind::invalid_argument, "activity must be nonnegative");
    require(beta > 0.0 && std::isfinite(beta), ErrorKind::invalid_argument, "beta must be positive");
    require(potential != nullptr, ErrorKind::invalid_argument, "model has no potential");
  }
};

}  // namespace mgibbs
