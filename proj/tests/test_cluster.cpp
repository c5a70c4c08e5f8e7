#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "mgibbs/expansion.hpp"
#include "mgibbs/oracle.hpp"
#include "mgibbs/registry.hpp"
#include "mgibbs/tree_bound.hpp"
#include "mgibbs/ursell.hpp"

using namespace mgibbs;

namespace {

std::vector<MarkedPoint> random_points(const ModelSpec& model, int n, Rng& rng, double lo = 0.0, double hi = 1.0) {
  std::vector<MarkedPoint> pts;
  while (static_cast<int>(pts.size()) < n) {
    const auto p = point1(lo + (hi - lo) * uniform01(rng), model.marks.sample(rng));
    if (std::none_of(pts.begin(), pts.end(), [&](const auto& q) { return q.position == p.position; })) pts.push_back(p);
  }
  return pts;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double f_of(const MarkedPoint& a, const MarkedPoint& b, const ModelSpec& m) { return mayer_pair(a, b, m); }

ModelSpec toy_with_B(double B) {
  return make_model("toy-repulsive-spin", {{"B", B}}, PositionSpace::unit_interval(), 0.05, 1.0);
}

}  // namespace

TEST(UrsellDirect, SmallCases) {
  const auto model = toy_model(0.05, 1.0);
  Rng rng = make_stream(21);
  const auto p = random_points(model, 3, rng, 0.0, 0.3);
  EXPECT_EQ(ursell_direct(std::span(p).first(1), model), 1.0);
  EXPECT_DOUBLE_EQ(ursell_direct(std::span(p).first(2), model), f_of(p[0], p[1], model));
  const double f12 = f_of(p[0], p[1], model), f13 = f_of(p[0], p[2], model), f23 = f_of(p[1], p[2], model);
  EXPECT_NEAR(ursell_direct(p, model), f12 * f13 + f12 * f23 + f13 * f23 + f12 * f13 * f23, 1e-15);
}

TEST(UrsellTable, EmptySubsetIsZero) {
  const auto model = toy_model();
  Rng rng = make_stream(22);
  const auto t = ursell_table(random_points(model, 4, rng), model);
  EXPECT_EQ(t[0], 0.0);
}

TEST(UrsellTable, IdealGasVanishesBeyondSingletons) {
  const auto model = ideal_model();
  Rng rng = make_stream(23);
  const auto t = ursell_table(random_points(model, 6, rng), model);
  for (SubsetMask s = 1; s <= t.values.full(); ++s) EXPECT_EQ(t[s], std::popcount(s) == 1 ? 1.0 : 0.0);
}

TEST(UrsellTable, MatchesDirectSumAndStarLog) {
  const auto model = toy_model(0.05, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    Rng rng = make_stream(24, {static_cast<std::uint64_t>(i)});
    const int n = 1 + i % 5;
    const auto pts = random_points(model, n, rng, 0.0, 0.5);
    const auto table = ursell_table(pts, model);
    const double direct = ursell_direct(pts, model);
    worst = std::max({worst, rel(table.full(), direct), rel(ursell_value(pts, model), direct)});
    const auto logb = star_log(boltzmann_functional(pts, model));
    worst = std::max(worst, rel(logb[logb.full()], direct));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(UrsellTable, ReproducesBoltzmannFactor) {
  const auto model = toy_model(0.05, 2.0);
  for (int i = 0; i < 100; ++i) {
    Rng rng = make_stream(25, {static_cast<std::uint64_t>(i)});
    const auto pts = random_points(model, 1 + i % 8, rng, 0.0, 0.4);
    const auto e = star_exp(ursell_table(pts, model).values);
    EXPECT_LE(rel(e[e.full()], std::exp(-model.beta * energy(pts, model))), 1e-10);
  }
}

TEST(UrsellTable, DisconnectedMayerGraphGivesExactZero) {
  const auto model = toy_cut_model(0.05, 1.0, 0.1);
  const std::vector<MarkedPoint> pts{point1(0.1, Mark{0, 1.0}), point1(0.15, Mark{0, 1.0}), point1(0.8, Mark{1, -1.0})};
  EXPECT_EQ(ursell_value(pts, model), 0.0);
  EXPECT_EQ(ursell_table(pts, model).full(), 0.0);
}

TEST(Kbar, EmptyOmega) {
  const auto model = toy_model();
  Rng rng = make_stream(26);
  EXPECT_EQ(kbar(FiniteConfiguration{}, FiniteConfiguration{}, model), 1.0);
  EXPECT_EQ(kbar(FiniteConfiguration{}, FiniteConfiguration::canonicalize(random_points(model, 2, rng)), model), 0.0);
}

TEST(Kbar, SingletonOmegaEqualsUrsell) {
  const auto model = toy_model(0.05, 1.0);
  for (int i = 0; i < 50; ++i) {
    Rng rng = make_stream(27, {static_cast<std::uint64_t>(i)});
    const auto pts = random_points(model, 1 + i % 6, rng, 0.0, 0.5);
    const double kb = kbar_unchecked(std::span(pts).first(1), std::span(pts).subspan(1), model);
    EXPECT_LE(rel(kb, ursell_value(pts, model)), 1e-12);
  }
}

TEST(Kbar, IdealGasCollapses) {
  const auto model = ideal_model();
  Rng rng = make_stream(28);
  const auto pts = random_points(model, 5, rng);
  const auto w = std::span(pts).first(2);
  EXPECT_NEAR(kbar_unchecked(w, {}, model), 1.0, 1e-15);
  for (int k = 1; k <= 3; ++k) EXPECT_NEAR(kbar_unchecked(w, std::span(pts).subspan(2, k), model), 0.0, 1e-15);
}

TEST(Kbar, MatchesRecursionOracle) {
  const auto model = toy_model(0.05, 1.0);
  for (int i = 0; i < 100; ++i) {
    Rng rng = make_stream(29, {static_cast<std::uint64_t>(i)});
    const int m = 1 + i % 3;
    const int n = i % 4;
    const auto pts = random_points(model, m + n, rng, 0.0, 0.5);
    const auto w = std::span(pts).first(static_cast<std::size_t>(m));
    const auto z = std::span(pts).subspan(static_cast<std::size_t>(m));
    EXPECT_LE(rel(kbar_unchecked(w, z, model), oracle::kbar_recursive(w, z, model)), 1e-10) << m << " " << n;
  }
}

TEST(TreeBound, EmptyZetaIsOne) {
  const auto model = toy_model();
  EXPECT_EQ(tree_bound_Q(point1(0.3, Mark{0, 1.0}), {}, model), 1.0);
}

TEST(TreeBound, SingleEdge) {
  const auto model = toy_model();
  const auto x = point1(0.3, Mark{0, 1.0});
  const std::vector<MarkedPoint> z{point1(0.35, Mark{1, -1.0})};
  EXPECT_DOUBLE_EQ(tree_bound_Q(x, z, model), std::abs(f_of(x, z[0], model)));
}

TEST(TreeBound, KirchhoffMatchesPrueferEnumeration) {
  const auto model = toy_model(0.05, 1.0);
  for (int n = 2; n <= 7; ++n) {
    Rng rng = make_stream(30, {static_cast<std::uint64_t>(n)});
    const auto pts = random_points(model, n, rng, 0.0, 0.4);
    EXPECT_LE(rel(tree_sum(abs_mayer_matrix(pts, model)), oracle::tree_sum(oracle::abs_mayer(pts, model))), 1e-12);
  }
}

TEST(TreeBound, DominatesKbar) {
  const auto model = toy_with_B(0.2);
  double slack = kInfinity;
  for (int i = 0; i < 500; ++i) {
    Rng rng = make_stream(31, {static_cast<std::uint64_t>(i)});
    const int m = 1 + i % 3;
    const int n = i % (7 - m);
    const auto pts = random_points(model, m + n, rng, 0.0, 0.5);
    const auto w = std::span(pts).first(static_cast<std::size_t>(m));
    const auto z = std::span(pts).subspan(static_cast<std::size_t>(m));
    const double k = std::abs(kbar_unchecked(w, z, model));
    const double q = tree_bound_Q(w, z, model);
    EXPECT_LE(k, q * (1.0 + 1e-12));
    if (q > 0.0) slack = std::min(slack, (q - k) / q);
  }
  RecordProperty("min_relative_slack", std::to_string(slack));
}

TEST(TreeBound, RecursiveInitialStep) {
  const auto model = toy_with_B(0.3);
  const std::vector<MarkedPoint> x{point1(0.5, Mark{0, 1.0})};
  EXPECT_NEAR(tree_bound_recursive(x, {}, model), std::exp(2.0 * model.beta * 0.3), 1e-15);
}

TEST(TreeBound, RecursiveMatchesClosedFormUnderEveryPolicy) {
  const auto model = toy_with_B(0.1);
  for (int i = 0; i < 200; ++i) {
    Rng rng = make_stream(32, {static_cast<std::uint64_t>(i)});
    const int m = 1 + i % 3;
    const int n = i % (8 - m);
    const auto pts = random_points(model, m + n, rng, 0.0, 0.5);
    const auto w = std::span(pts).first(static_cast<std::size_t>(m));
    const auto z = std::span(pts).subspan(static_cast<std::size_t>(m));
    const double closed = tree_bound_Q(w, z, model);
    const double lo = tree_bound_recursive(w, z, model, AnchorPolicy::lowest_index);
    const double hi = tree_bound_recursive(w, z, model, AnchorPolicy::highest_index);
    const double st = tree_bound_recursive(w, z, model, AnchorPolicy::stability);
    EXPECT_LE(std::abs(lo - hi) / closed, 1e-12);
    EXPECT_LE(std::abs(lo - st) / closed, 1e-12);
    EXPECT_LE(std::abs(lo - closed) / closed, 1e-10);
  }
}

TEST(Radius, UnitConstantAndZeroB) {
  EXPECT_NEAR(z_star_from(1.0, 0.0, 1.0), 1.0 / (2.0 * std::numbers::e), 1e-15);
  EXPECT_NEAR(z_star_from(1.0, 0.0, 1.0), 0.18394, 1e-5);
  EXPECT_EQ(z_star_from(0.0, 0.0, 1.0), kInfinity);
}

TEST(Radius, ToyModelFrozenValues) {
  const auto r = convergence_radius(toy_model(0.05, 1.0));
  EXPECT_NEAR(r.C_beta, 0.24253499693951, 1e-10);
  EXPECT_NEAR(r.z_star, 0.758404860769834, 1e-9);
  EXPECT_GT(r.z_star, 0.0);
  EXPECT_TRUE(r.within_radius);
}

TEST(Radius, DoublingBScalesExponentially) {
  const double C = 0.3, B = 0.4, beta = 1.5;
  EXPECT_NEAR(z_star_from(C, 2.0 * B, beta) / z_star_from(C, B, beta), std::exp(-2.0 * beta * B), 1e-14);
}

TEST(Tail, VanishesAsZGoesToZero) {
  auto model = toy_model(1e-8, 1.0);
  EXPECT_LT(tail_bound(model, 0.24, 2), 1e-14);
  model.z = 0.0;
  EXPECT_EQ(tail_bound(model, 0.24, 1), 0.0);
}

TEST(Tail, GeometricFormulaAtHalf) {
  auto model = toy_model(1.0, 1.0);
  const double C = 0.5;
  model.z = 0.5 / (2.0 * std::numbers::e * C);  // q = 1/2
  EXPECT_NEAR(majorant_ratio(model, C), 0.5, 1e-15);
  EXPECT_NEAR(tail_bound(model, C, 10, 1.0), (1.0 / C) * std::pow(0.5, 10) / 0.5, 1e-15);
}

TEST(Tail, MonotoneAndOutsideRadius) {
  const auto model = toy_model(0.3, 1.0);
  for (int n = 1; n < 10; ++n) EXPECT_LE(tail_bound(model, 0.24, n + 1), tail_bound(model, 0.24, n));
  try {
    tail_bound(toy_model(5.0, 1.0), 0.24, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::outside_radius);
  }
}

TEST(LogPartition, IdealGasExact) {
  const auto model = ideal_model(0.7);
  const Box region = interval_box(0.0, 0.8);
  const auto r1 = log_partition_truncated(model, region, 1, {});
  EXPECT_NEAR(r1.log_Z, 0.7 * 0.8, 1e-15);
  const auto r4 = log_partition_truncated(model, region, 4, {});
  for (std::size_t n = 1; n < r4.coefficients.size(); ++n) EXPECT_EQ(r4.coefficients[n], 0.0);
  EXPECT_EQ(r4.tail_bound, 0.0);
}

TEST(LogPartition, ZeroActivity) {
  const auto r = log_partition_truncated(toy_model(0.0, 1.0), interval_box(0.0, 1.0), 3, {});
  EXPECT_EQ(r.log_Z, 0.0);
  for (double c : r.coefficients) EXPECT_EQ(c, 0.0);
}

TEST(LogPartition, AgreesWithDirectSum) {
  const auto model = toy_model(0.05, 1.0);
  const Box region = model.space.box();
  const auto rep = log_partition_truncated(model, region, 4, {});
  const auto direct = partition_direct_truncated(model, region, FiniteConfiguration{}, 8, {});
  const double x = model.z * model.intensity_mass(region);
  const double direct_tail = std::pow(x, 9) / std::tgamma(10) * std::exp(x);
  const double budget = rep.tail_bound + rep.integration_error + (direct.error + direct_tail) / direct.value;
  EXPECT_LE(std::abs(rep.log_Z - std::log(direct.value)), budget);
  EXPECT_LE(budget, 1e-3);
}

TEST(LogPartition, HardCoreSecondCoefficient) {
  const double r0 = 0.1, z = 0.01;
  const auto model = make_model("hard-core", {{"r0", r0}}, PositionSpace::unit_interval(), z, 1.0);
  QuadratureScheme s;
  s.points_per_axis = 400;
  const auto rep = log_partition_truncated(model, model.space.box(), 2, s);
  // int int f = -|{|x - y| < r0}| = -(2 r0 - r0^2) on the unit square.
  const double exact = -z * z / 2.0 * (2.0 * r0 - r0 * r0);
  const Integrand k = [&](std::span<const MarkedPoint> p) { return ursell_value(p, model); };
  const double dense = z * z / 2.0 * oracle::dense_grid_integral(k, model, model.space.box(), 2, 400);
  EXPECT_NEAR(rep.coefficients[1], dense, 1e-3 * std::abs(exact));
  EXPECT_NEAR(rep.coefficients[1], exact, 0.02 * std::abs(exact));
  EXPECT_DOUBLE_EQ(rep.coefficients[0], z);
}

TEST(AbsoluteTerms, DominateSignedCoefficients) {
  const auto model = toy_model(0.2, 1.0);
  const auto abs_terms = absolute_cluster_terms(model, model.space.box(), 4, {});
  const auto rep = log_partition_truncated(model, model.space.box(), 4, {});
  for (int n = 0; n < 4; ++n) {
    EXPECT_GE(abs_terms[static_cast<std::size_t>(n)].value + 1e-15, std::abs(rep.coefficients[static_cast<std::size_t>(n)]));
    EXPECT_LT(abs_terms[static_cast<std::size_t>(n)].value, majorant_term(model, rep.C_beta, n + 1, 1.0));
  }
}

TEST(DirectPartition, ZeroActivityAndIdealGas) {
  EXPECT_EQ(partition_direct_truncated(toy_model(0.0, 1.0), interval_box(0.0, 1.0), {}, 5, {}).value, 1.0);
  const auto model = ideal_model(0.9);
  const auto est = partition_direct_truncated(model, interval_box(0.0, 0.5), {}, 5, {});
  double s = 0.0;
  for (int n = 0; n <= 5; ++n) s += std::pow(0.45, n) / std::tgamma(n + 1);
  EXPECT_NEAR(est.value, s, 1e-15);
}

TEST(DirectPartition, BoundaryBeyondRangeIsInvisible) {
  const auto model = toy_cut_model(0.3, 1.0, 0.3);
  const Box region = interval_box(0.0, 0.4);
  const auto far = FiniteConfiguration::canonicalize({point1(0.75, Mark{0, 1.0}), point1(0.95, Mark{1, -1.0})});
  const auto a = partition_direct_truncated(model, region, FiniteConfiguration{}, 4, {});
  const auto b = partition_direct_truncated(model, region, far, 4, {});
  EXPECT_EQ(a.value, b.value);
  const auto near = FiniteConfiguration::canonicalize({point1(0.45, Mark{0, 1.0})});
  EXPECT_LT(partition_direct_truncated(model, region, near, 4, {}).value, a.value);
}

TEST(Correlation, IdealGasIsOne) {
  const auto model = ideal_model(0.8);
  const auto one = FiniteConfiguration::canonicalize({point1(0.3)});
  const auto two = FiniteConfiguration::canonicalize({point1(0.3), point1(0.6)});
  EXPECT_NEAR(correlation_truncated(one, model, model.space.box(), 4, {}).value, 1.0, 1e-15);
  EXPECT_NEAR(correlation_truncated(two, model, model.space.box(), 4, {}).value, 1.0, 1e-15);
}

TEST(Correlation, OnePointMatchesPartitionRatio) {
  const auto model = toy_model(0.05, 1.0);
  const Box box = model.space.box();
  const auto x = FiniteConfiguration::canonicalize({point1(0.3, model.marks.label_mark(1))});
  const auto rho = correlation_truncated(x, model, box, 4, {});
  const auto zx = partition_direct_truncated(model, box, x, 8, {});
  const auto z0 = partition_direct_truncated(model, box, {}, 8, {});
  const double ratio = zx.value / z0.value;
  const double budget = rho.error + one_point_tail_bound(model, 0.24253499693951, 4) + zx.error + z0.error + 1e-12;
  EXPECT_LE(std::abs(rho.value - ratio), budget);
  EXPECT_LT(rho.value, 1.0);
}

TEST(Correlation, DistantPairFactorises) {
  const auto model = toy_cut_model(0.05, 1.0, 0.2);
  const Box box = model.space.box();
  const auto a = FiniteConfiguration::canonicalize({point1(0.1, Mark{0, 1.0})});
  const auto b = FiniteConfiguration::canonicalize({point1(0.9, Mark{1, -1.0})});
  const auto ab = merge(a, b);
  QuadratureScheme s;
  s.points_per_axis = 48;
  const auto ra = correlation_truncated(a, model, box, 3, s);
  const auto rb = correlation_truncated(b, model, box, 3, s);
  const auto rab = correlation_truncated(ab, model, box, 3, s);
  // Chains of length two or more can still couple the points; at z = 0.05 these are O(z^2).
  EXPECT_NEAR(rab.value, ra.value * rb.value, 2e-4 + rab.error + ra.error + rb.error);
}

TEST(Correlation, SizeCapAndRegionChecks) {
  const auto model = toy_model();
  const auto x = FiniteConfiguration::canonicalize({point1(0.7)});
  try {
    correlation_truncated(x, model, interval_box(0.0, 0.5), 2, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::region_out_of_bounds);
  }
  try {
    correlation_truncated(x, model, model.space.box(), 12, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::size_limit);
  }
}

TEST(Density, ThreeRoutesAgreeOnOnePointDensity) {
  const auto model = toy_model(0.05, 1.0);
  const auto d = density_truncated(model, model.space.box(), 3, {}, 0.24253499693951);
  EXPECT_GT(d.value, 0.95);
  EXPECT_LT(d.value, 1.0);
  EXPECT_LT(d.tail_bound, 1e-3);
}

TEST(LimitDensity, IdealGasIsPoissonDensity) {
  const auto model = ideal_model(0.6);
  const Box region = interval_box(0.2, 0.7);
  const auto cfg = FiniteConfiguration::canonicalize({point1(0.3), point1(0.5)});
  const auto rep = limit_local_density(cfg, model, region, 3, {});
  EXPECT_NEAR(rep.density, std::exp(-0.6 * 0.5), 1e-14);
  const auto empty = limit_local_density(FiniteConfiguration{}, model, region, 3, {});
  EXPECT_NEAR(empty.density, std::exp(-0.6 * 0.5), 1e-14);
}

TEST(LimitDensity, RequiresFiniteRange) {
  try {
    limit_local_density(FiniteConfiguration{}, toy_model(), interval_box(0.2, 0.7), 2, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::requires_finite_range);
  }
}
