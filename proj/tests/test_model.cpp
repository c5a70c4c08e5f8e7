#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "mgibbs/model.hpp"
#include "mgibbs/registry.hpp"

using namespace mgibbs;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an mgibbs::Error";
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST(Canonicalize, EmptyInputGivesEmptyConfiguration) {
  const auto c = FiniteConfiguration::canonicalize({});
  EXPECT_TRUE(c.empty());
  EXPECT_EQ(c.size(), 0u);
}

TEST(Canonicalize, SortsByPosition) {
  const auto c = FiniteConfiguration::canonicalize({point1(0.7, {1, -1.0}), point1(0.2, {0, 1.0})});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].position[0], 0.2);
  EXPECT_EQ(c[1].position[0], 0.7);
  EXPECT_EQ(c[0].mark.label, 0);
  EXPECT_EQ(c[1].mark.label, 1);
}

TEST(Canonicalize, RejectsDuplicatePositionsEvenWithDifferentMarks) {
  EXPECT_EQ(kind_of([] { FiniteConfiguration::canonicalize({point1(0.5, {0, 1.0}), point1(0.5, {1, -1.0})}); }),
            ErrorKind::duplicate_position);
}

TEST(Canonicalize, OrderIndependent) {
  const auto a = FiniteConfiguration::canonicalize({point1(0.1), point1(0.9), point1(0.4)});
  const auto b = FiniteConfiguration::canonicalize({point1(0.9), point1(0.4), point1(0.1)});
  EXPECT_EQ(a, b);
}

TEST(Restrict, FullBoxIsIdentity) {
  const auto space = PositionSpace::unit_interval();
  const auto c = FiniteConfiguration::canonicalize({point1(0.1), point1(0.4), point1(0.9)});
  EXPECT_EQ(restrict_to(c, space.box(), space), c);
}

TEST(Restrict, EmptyStaysEmpty) {
  const auto space = PositionSpace::unit_interval();
  EXPECT_TRUE(restrict_to(FiniteConfiguration{}, interval_box(0.2, 0.3), space).empty());
}

TEST(Restrict, HalfOpenSubinterval) {
  const auto space = PositionSpace::unit_interval();
  const auto c = FiniteConfiguration::canonicalize({point1(0.1), point1(0.4), point1(0.9)});
  const auto r = restrict_to(c, interval_box(0.0, 0.5), space);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].position[0], 0.1);
  EXPECT_EQ(r[1].position[0], 0.4);
  EXPECT_EQ(exterior_of(c, interval_box(0.0, 0.5)).size(), 1u);
}

TEST(Restrict, RegionOutsideBoxIsRejected) {
  const auto space = PositionSpace::unit_interval();
  EXPECT_EQ(kind_of([&] { restrict_to(FiniteConfiguration{}, interval_box(0.5, 1.5), space); }),
            ErrorKind::region_out_of_bounds);
}

TEST(Restrict, UpperFaceIsExcluded) {
  const auto space = PositionSpace::unit_interval();
  const auto c = FiniteConfiguration::canonicalize({point1(0.5)});
  EXPECT_TRUE(restrict_to(c, interval_box(0.0, 0.5), space).empty());
}

TEST(Merge, UnionAndCollision) {
  const auto a = FiniteConfiguration::canonicalize({point1(0.1)});
  const auto b = FiniteConfiguration::canonicalize({point1(0.3)});
  EXPECT_EQ(merge(a, b).size(), 2u);
  EXPECT_EQ(kind_of([&] { merge(a, a); }), ErrorKind::duplicate_position);
}

TEST(BoxGeometry, VolumeContainmentAndDifference) {
  const double lo[] = {0.0, 0.0};
  const double hi[] = {1.0, 2.0};
  const Box outer = make_box(lo, hi);
  EXPECT_DOUBLE_EQ(outer.volume(), 2.0);
  const double hlo[] = {0.25, 0.5};
  const double hhi[] = {0.75, 1.0};
  const Box hole = make_box(hlo, hhi);
  EXPECT_TRUE(hole.inside(outer));
  const auto pieces = box_difference(outer, hole);
  double v = 0.0;
  for (const auto& p : pieces) v += p.volume();
  EXPECT_NEAR(v, outer.volume() - hole.volume(), 1e-15);
  EXPECT_LE(pieces.size(), 4u);
  EXPECT_EQ(kind_of([] { interval_box(1.0, 0.5); }), ErrorKind::invalid_argument);
}

TEST(PositionSpace, FreeAndPeriodicDistances) {
  const PositionSpace free(1, {1.0, 0.0, 0.0}, Boundary::free);
  const PositionSpace torus(1, {1.0, 0.0, 0.0}, Boundary::periodic);
  EXPECT_DOUBLE_EQ(free.distance({0.1}, {0.9}), 0.8);
  EXPECT_NEAR(torus.distance({0.1}, {0.9}), 0.2, 1e-15);
  const PositionSpace plane(2, {1.0, 1.0, 0.0}, Boundary::free);
  EXPECT_DOUBLE_EQ(plane.distance({0.0, 0.0}, {0.3, 0.4}), 0.5);
  EXPECT_EQ(kind_of([] { PositionSpace(4, {1.0, 1.0, 1.0}, Boundary::free); }), ErrorKind::invalid_argument);
}

TEST(MarkSpace, DiscreteLabelsAndValues) {
  const auto m = MarkSpace::discrete({1.0, -1.0}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(m.total_mass(), 1.0);
  EXPECT_EQ(m.label_mark(1), (Mark{1, -1.0}));
  EXPECT_EQ(m.value_mark(-1.0).label, 1);
  EXPECT_TRUE(m.contains(Mark{0, 1.0}));
  EXPECT_FALSE(m.contains(Mark{0, -1.0}));
  EXPECT_EQ(kind_of([&] { m.label_mark(2); }), ErrorKind::invalid_argument);
}

TEST(MarkSpace, ContinuousMarks) {
  const auto circle = MarkSpace::circle(2.0);
  EXPECT_DOUBLE_EQ(circle.total_mass(), 2.0);
  EXPECT_NEAR(circle.density(), 2.0 / (2.0 * std::numbers::pi), 1e-15);
  const auto iv = MarkSpace::interval(-1.0, 1.0);
  EXPECT_TRUE(iv.contains(Mark{0, 0.3}));
  EXPECT_FALSE(iv.contains(Mark{0, 1.3}));
  Rng rng = make_stream(3);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(iv.contains(iv.sample(rng)));
}

TEST(ModelSpec, IntensityMassAndValidation) {
  const auto model = toy_model(0.05, 1.0);
  EXPECT_DOUBLE_EQ(model.intensity_mass(), 1.0);
  EXPECT_DOUBLE_EQ(model.intensity_mass(interval_box(0.0, 0.25)), 0.25);
  auto bad = model;
  bad.z = -1.0;
  EXPECT_EQ(kind_of([&] { bad.validate(); }), ErrorKind::invalid_argument);
  bad = model;
  bad.beta = 0.0;
  EXPECT_EQ(kind_of([&] { bad.validate(); }), ErrorKind::invalid_argument);
}

TEST(Registry, LookupAndOverrides) {
  for (const auto& e : registry()) {
    const auto model = make_model(e.name, {}, PositionSpace::unit_interval(), 0.1, 1.0);
    EXPECT_EQ(model.potential->name(), e.name);
    EXPECT_GE(model.potential->stability_B(), 0.0);
  }
  EXPECT_EQ(kind_of([] { registry_entry("no-such-model"); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([] { make_model("toy-repulsive-spin", {{"bogus", 1.0}}, PositionSpace::unit_interval(), 0.1, 1.0); }),
            ErrorKind::invalid_argument);
  const auto m = make_model("toy-repulsive-spin", {{"amplitude", 2.0}}, PositionSpace::unit_interval(), 0.1, 1.0);
  EXPECT_DOUBLE_EQ(m.potential->parameters().at("amplitude"), 2.0);
}
