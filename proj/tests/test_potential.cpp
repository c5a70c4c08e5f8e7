#include <gtest/gtest.h>

#include <cmath>

#include "mgibbs/conditions.hpp"
#include "mgibbs/oracle.hpp"
#include "mgibbs/potential.hpp"
#include "mgibbs/registry.hpp"

using namespace mgibbs;

namespace {

double toy_phi(double r, double s, double t) { return (1.0 + 0.5 * s * t) * std::exp(-(r * r) / 0.04); }

FiniteConfiguration toy_config(std::initializer_list<std::pair<double, int>> pts) {
  const auto marks = toy_model().marks;
  std::vector<MarkedPoint> v;
  for (auto [x, label] : pts) v.push_back(point1(x, marks.label_mark(label)));
  return FiniteConfiguration::canonicalize(v);
}

}  // namespace

TEST(Energy, EmptyAndSingleton) {
  const auto model = toy_model();
  EXPECT_EQ(energy(FiniteConfiguration{}, model), 0.0);
  EXPECT_EQ(energy(toy_config({{0.3, 0}}), model), 0.0);
}

TEST(Energy, ThreePointsHandExpanded) {
  const auto model = toy_model();
  const auto c = toy_config({{0.1, 0}, {0.25, 1}, {0.4, 0}});
  const double expected = toy_phi(0.15, 1, -1) + toy_phi(0.3, 1, 1) + toy_phi(0.15, -1, 1);
  EXPECT_NEAR(energy(c, model), expected, 1e-15);
}

TEST(Energy, HardCoreOverlapIsInfinite) {
  const auto model = make_model("hard-core", {{"r0", 0.1}}, PositionSpace::unit_interval(), 0.1, 1.0);
  EXPECT_EQ(energy(FiniteConfiguration::canonicalize({point1(0.1), point1(0.15)}), model), kInfinity);
  EXPECT_EQ(energy(FiniteConfiguration::canonicalize({point1(0.1), point1(0.25)}), model), 0.0);
}

TEST(Interaction, EmptyAndSingletons) {
  const auto model = toy_model();
  const auto x = toy_config({{0.2, 0}});
  const auto y = toy_config({{0.3, 1}});
  EXPECT_EQ(interaction(FiniteConfiguration{}, y, model), 0.0);
  EXPECT_DOUBLE_EQ(interaction(x, y, model), toy_phi(0.1, 1, -1));
}

TEST(Interaction, AdditivityOnRandomConfigurations) {
  const auto model = toy_model();
  Rng rng = make_stream(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MarkedPoint> a, b;
    for (int i = 0; i < 3; ++i) {
      a.push_back(point1(uniform01(rng), model.marks.sample(rng)));
      b.push_back(point1(uniform01(rng), model.marks.sample(rng)));
    }
    const auto w = FiniteConfiguration::canonicalize(a);
    const auto z = FiniteConfiguration::canonicalize(b);
    const double lhs = energy(merge(w, z), model) - energy(w, model) - energy(z, model);
    EXPECT_NEAR(interaction(w, z, model), lhs, 1e-12);
  }
}

TEST(Interaction, OverlappingConfigurationsRejected) {
  const auto model = toy_model();
  const auto x = toy_config({{0.2, 0}});
  try {
    interaction(x, x, model);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::overlapping_configurations);
  }
}

TEST(ConditionalEnergy, InsideOutsideAndSplit) {
  const auto model = toy_model();
  const Box region = interval_box(0.0, 0.5);
  const auto inside = toy_config({{0.1, 0}, {0.3, 1}});
  const auto outside = toy_config({{0.6, 0}, {0.9, 1}});
  EXPECT_DOUBLE_EQ(conditional_energy(region, inside, model), energy(inside, model));
  EXPECT_EQ(conditional_energy(region, outside, model), 0.0);
  const auto all = merge(inside, outside);
  EXPECT_NEAR(conditional_energy(region, all, model), energy(all, model) - energy(outside, model), 1e-14);
}

TEST(Integrability, ZeroPotentialHasZeroConstant) {
  const auto rep = check_integrability(ideal_model());
  EXPECT_EQ(rep.C_beta, 0.0);
  EXPECT_TRUE(rep.finite);
}

TEST(Integrability, ToyModelMatchesDenseGridOracle) {
  const auto model = toy_model(0.05, 1.0);
  const auto rep = check_integrability(model);
  double oracle_max = 0.0;
  for (const auto& y : detail::reference_positions(model.space, rep.grid_size)) {
    for (int label = 0; label < 2; ++label) {
      oracle_max = std::max(oracle_max, oracle::dense_mayer_mass(model, y[0], model.marks.label_mark(label), 100000));
    }
  }
  EXPECT_NEAR(rep.C_beta / oracle_max, 1.0, 1e-6);
  EXPECT_TRUE(rep.converged);
}

TEST(Integrability, ToyModelFrozenValue) {
  EXPECT_NEAR(check_integrability(toy_model(0.05, 1.0)).C_beta, 0.24253499693951, 1e-10);
}

TEST(Integrability, HardCoreIsExclusionLength) {
  const auto model = make_model("hard-core", {{"r0", 0.1}}, PositionSpace::unit_interval(), 0.1, 1.0);
  const auto rep = check_integrability(model);
  EXPECT_NEAR(rep.C_beta, 0.2, 1e-10);
}

TEST(Integrability, MayerMassAtAPointMatchesOracle) {
  const auto model = toy_model(0.05, 2.0);
  const auto nodes = detail::integration_marks(model.marks, 16);
  for (double y : {0.0, 0.1, 0.5, 0.77}) {
    for (int label = 0; label < 2; ++label) {
      const Mark t = model.marks.label_mark(label);
      const auto q = detail::mayer_mass_at(model, {y}, t, nodes, 1e-12);
      EXPECT_NEAR(q.value, oracle::dense_mayer_mass(model, y, t, 100000), 1e-8);
    }
  }
}

TEST(Stability, NonnegativePotentialAlwaysPasses) {
  const auto model = make_model("hard-core", {}, PositionSpace::unit_interval(), 0.1, 1.0);
  const auto rep = spot_check_stability(model, 500, 8, 3);
  EXPECT_GE(rep.worst_margin, 0.0);
}

TEST(Stability, ToyModelPassesTenThousandTrials) {
  const auto rep = spot_check_stability(toy_model(), 10000, 8, 5);
  EXPECT_EQ(rep.trials, 10000);
  EXPECT_GE(rep.worst_margin, 0.0);
}

TEST(Stability, NegativeConstantFailsWithTwoPointWitness) {
  const auto model = make_model("constant", {{"value", -1.0}, {"B", 0.0}}, PositionSpace::unit_interval(), 0.1, 1.0);
  try {
    spot_check_stability(model, 10, 6, 1);
    FAIL();
  } catch (const StabilityViolation& e) {
    EXPECT_EQ(e.kind(), ErrorKind::stability_violation);
    EXPECT_EQ(e.witness().size(), 2u);
    EXPECT_LT(energy(e.witness(), model), 0.0);
  }
}

TEST(Potential, RangeCutsInteraction) {
  const auto model = toy_cut_model(0.05, 1.0, 0.3);
  EXPECT_GT(model.potential->at_distance(0.29, Mark{0, 1.0}, Mark{0, 1.0}), 0.0);
  EXPECT_EQ(model.potential->at_distance(0.3, Mark{0, 1.0}, Mark{0, 1.0}), 0.0);
}

TEST(Potential, DeclaredLowerBoundHolds) {
  for (const auto& e : registry()) {
    const auto model = make_model(e.name, {}, PositionSpace::unit_interval(), 0.1, 1.0);
    Rng rng = make_stream(12);
    for (int i = 0; i < 200; ++i) {
      const double r = 0.001 + uniform01(rng);
      const double v = model.potential->at_distance(r, model.marks.sample(rng), model.marks.sample(rng));
      EXPECT_GE(v, model.potential->lower_bound() - 1e-15) << e.name;
    }
  }
}
