#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <sstream>

#include "mgibbs/expansion.hpp"
#include "mgibbs/gibbsmc.hpp"
#include "mgibbs/parallel.hpp"
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

double toy_phi(double r, double s, double t) { return (1.0 + 0.5 * s * t) * std::exp(-(r * r) / 0.04); }

}  // namespace

TEST(PoissonSample, ZeroActivityIsEmpty) {
  Rng rng = make_stream(40);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(poisson_sample(toy_model(0.0, 1.0), interval_box(0.0, 1.0), rng).empty());
}

TEST(PoissonSample, CountAndMarkFrequencies) {
  const auto model = toy_model(2.0, 1.0);
  const Box region = interval_box(0.25, 0.75);
  Rng rng = make_stream(41);
  const int draws = 20000;
  double n = 0.0, plus = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto c = poisson_sample(model, region, rng);
    n += static_cast<double>(c.size());
    for (const auto& p : c) {
      plus += p.mark.label == 0 ? 1.0 : 0.0;
      EXPECT_TRUE(region.contains(p.position));
    }
  }
  const double mean = 1.0;
  EXPECT_NEAR(n / draws, mean, 4.0 * std::sqrt(mean / draws));
  EXPECT_NEAR(plus / n, 0.5, 4.0 * std::sqrt(0.25 / n));
}

TEST(SpecificationWeight, Examples) {
  const auto model = toy_model(0.1, 1.5);
  const Box region = interval_box(0.0, 0.5);
  const auto plus = model.marks.label_mark(0);
  const auto minus = model.marks.label_mark(1);
  EXPECT_EQ(specification_weight(FiniteConfiguration{}, BoundaryCondition::empty(), model, region), 1.0);
  const auto one = FiniteConfiguration::canonicalize({point1(0.2, plus)});
  EXPECT_EQ(specification_weight(one, BoundaryCondition::empty(), model, region), 1.0);
  const auto two = FiniteConfiguration::canonicalize({point1(0.2, plus), point1(0.3, minus)});
  EXPECT_NEAR(specification_weight(two, BoundaryCondition::empty(), model, region), std::exp(-1.5 * toy_phi(0.1, 1, -1)),
              1e-15);
  BoundaryCondition bc{FiniteConfiguration::canonicalize({point1(0.6, plus)})};
  EXPECT_NEAR(specification_weight(one, bc, model, region), std::exp(-1.5 * toy_phi(0.4, 1, 1)), 1e-15);
  EXPECT_EQ(kind_of([&] {
              specification_weight(FiniteConfiguration::canonicalize({point1(0.7, plus)}), bc, model, region);
            }),
            ErrorKind::region_out_of_bounds);
}

TEST(SpecificationWeight, HardCoreOverlapIsZero) {
  const auto model = make_model("hard-core", {{"r0", 0.1}}, PositionSpace::unit_interval(), 0.5, 1.0);
  const Box region = interval_box(0.0, 0.5);
  const auto c = FiniteConfiguration::canonicalize({point1(0.2), point1(0.25)});
  EXPECT_EQ(specification_weight(c, BoundaryCondition::empty(), model, region), 0.0);
  BoundaryCondition bc{FiniteConfiguration::canonicalize({point1(0.55)})};
  EXPECT_EQ(specification_weight(FiniteConfiguration::canonicalize({point1(0.48)}), bc, model, region), 0.0);
}

TEST(DistanceToBox, FreeAndPeriodic) {
  const Box box = interval_box(0.4, 0.6);
  const PositionSpace free(1, {1.0, 0.0, 0.0}, Boundary::free);
  const PositionSpace torus(1, {1.0, 0.0, 0.0}, Boundary::periodic);
  EXPECT_EQ(distance_to_box({0.5}, box, free), 0.0);
  EXPECT_NEAR(distance_to_box({0.1}, box, free), 0.3, 1e-15);
  const Box edge = interval_box(0.0, 0.1);
  EXPECT_NEAR(distance_to_box({0.95}, edge, torus), 0.05, 1e-15);
  EXPECT_NEAR(distance_to_box({0.95}, edge, free), 0.85, 1e-15);
}

TEST(Rejection, IdealGasAcceptsEverything) {
  const auto model = ideal_model(3.0);
  const Box region = interval_box(0.0, 0.5);
  const RejectionSampler s(model, region, BoundaryCondition::empty());
  EXPECT_EQ(s.estimated_acceptance(), 1.0);
  EXPECT_EQ(s.B_prime(), 0.0);
  const auto st = rejection_run(model, region, BoundaryCondition::empty(), 20000, 7);
  EXPECT_NEAR(st.mean_n(), 1.5, 4.0 * std::sqrt(1.5 / 20000.0));
  EXPECT_NEAR(st.var_n(), 1.5, 0.1);
}

TEST(Rejection, DensityMatchesClusterExpansion) {
  const auto model = toy_model(0.3, 1.0);
  const Box box = model.space.box();
  const auto st = rejection_run(model, box, BoundaryCondition::empty(), 40000, 8);
  const double C = 0.24253499693951;
  const auto d = density_truncated(model, box, 4, {}, C);
  const double budget = 4.0 * st.rho1_standard_error() + d.integration_error + d.tail_bound;
  EXPECT_NEAR(st.rho1(), d.value, budget);
}

TEST(Rejection, AcceptanceFloorIsEnforced) {
  const auto model = toy_model(40.0, 1.0);
  EXPECT_EQ(kind_of([&] { RejectionSampler(model, model.space.box(), BoundaryCondition::empty()); }),
            ErrorKind::acceptance_too_low);
}

TEST(Rejection, KeptDrawsAreIndependentOfWorkers) {
  const auto model = toy_model(0.5, 1.0);
  std::vector<FiniteConfiguration> a, b;
  set_default_workers(1);
  const auto sa = rejection_run(model, model.space.box(), BoundaryCondition::empty(), 9000, 3, 0, 0.0, {}, &a);
  set_default_workers(3);
  const auto sb = rejection_run(model, model.space.box(), BoundaryCondition::empty(), 9000, 3, 0, 0.0, {}, &b);
  set_default_workers(0);
  EXPECT_EQ(a.size(), 9000u);
  EXPECT_EQ(a, b);
  EXPECT_EQ(sa.sum_n, sb.sum_n);
  EXPECT_EQ(sa.sum_energy, sb.sum_energy);
}

TEST(Mcmc, IdealGasIsPoisson) {
  const auto model = ideal_model(4.0);
  SamplerConfig cfg;
  cfg.seed = 9;
  cfg.sweeps = 20000;
  const auto res = mcmc_run(model, model.space.box(), BoundaryCondition::empty(), cfg);
  EXPECT_EQ(res.stats.samples, 20000u);
  EXPECT_NEAR(res.stats.mean_n(), 4.0, 5.0 * res.stats.rho1_standard_error() * 4.0);
  EXPECT_NEAR(res.stats.var_n() / 4.0, 1.0, 0.15);
}

TEST(Mcmc, BirthDeathFluxBalances) {
  const auto model = toy_model(0.5, 1.0);
  SamplerConfig cfg;
  cfg.seed = 10;
  cfg.sweeps = 5000;
  const auto res = mcmc_run(model, model.space.box(), BoundaryCondition::empty(), cfg);
  const double births = static_cast<double>(res.stats.accepted[kBirth]);
  const double deaths = static_cast<double>(res.stats.accepted[kDeath]);
  EXPECT_GT(births, 1000.0);
  EXPECT_LE(std::abs(births - deaths), 30.0);
}

TEST(Mcmc, AgreesWithExactSampler) {
  const auto model = toy_model(0.5, 1.0);
  const Box box = model.space.box();
  SamplerConfig cfg;
  cfg.seed = 11;
  cfg.sweeps = 20000;
  const auto chain = mcmc_run_parallel(model, box, BoundaryCondition::empty(), cfg, 2);
  const auto exact = rejection_run(model, box, BoundaryCondition::empty(), 40000, 12);
  const double se = std::hypot(chain.stats.rho1_standard_error(), exact.rho1_standard_error());
  EXPECT_NEAR(chain.stats.rho1(), exact.rho1(), 4.0 * se);
  const double se_e = std::hypot(chain.stats.energy_standard_error(), exact.energy_standard_error());
  EXPECT_NEAR(chain.stats.mean_energy(), exact.mean_energy(), 4.0 * se_e);
}

TEST(Mcmc, BoundaryConditionLowersDensityNearRepulsiveWall) {
  const auto model = toy_cut_model(1.0, 1.0, 0.3);
  const Box region = interval_box(0.0, 0.5);
  std::vector<MarkedPoint> wall;
  for (int i = 0; i < 10; ++i) wall.push_back(point1(0.5 + 0.01 * i, model.marks.label_mark(0)));
  const BoundaryCondition bc{FiniteConfiguration::canonicalize(wall)};
  const auto free = rejection_run(model, region, BoundaryCondition::empty(), 8000, 13);
  const auto walled = rejection_run(model, region, bc, 8000, 13);
  EXPECT_LT(walled.mean_n(), free.mean_n());
}

TEST(Mcmc, ParallelChainsIndependentOfWorkers) {
  const auto model = toy_model(0.5, 1.0);
  SamplerConfig cfg;
  cfg.seed = 14;
  cfg.sweeps = 500;
  cfg.keep_samples = true;
  cfg.histogram_bins = 4;
  cfg.histogram_r_max = 0.5;
  set_default_workers(1);
  const auto a = mcmc_run_parallel(model, model.space.box(), BoundaryCondition::empty(), cfg, 3);
  set_default_workers(3);
  const auto b = mcmc_run_parallel(model, model.space.box(), BoundaryCondition::empty(), cfg, 3);
  set_default_workers(0);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.samples.size(), 1500u);
  EXPECT_EQ(a.stats.pair_histogram, b.stats.pair_histogram);
  EXPECT_EQ(a.stats.sum_energy, b.stats.sum_energy);
}

TEST(Mcmc, ConfigAndRegionErrors) {
  const auto model = toy_model();
  SamplerConfig bad;
  bad.p_mark = 0.5;
  EXPECT_EQ(kind_of([&] { mcmc_run(model, model.space.box(), BoundaryCondition::empty(), bad); }),
            ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([&] { mcmc_run(model, interval_box(0.5, 1.5), BoundaryCondition::empty(), SamplerConfig{}); }),
            ErrorKind::region_out_of_bounds);
  const BoundaryCondition inside{FiniteConfiguration::canonicalize({point1(0.2)})};
  EXPECT_EQ(kind_of([&] { RejectionSampler(model, interval_box(0.0, 0.5), inside); }), ErrorKind::invalid_argument);
}

TEST(Dlr, IdealGasAndFiniteRangeToy) {
  for (const auto& model : {ideal_model(1.0), toy_cut_model(0.5, 1.0, 0.2)}) {
    const auto rep = dlr_check(model, interval_box(0.4, 0.6), model.space.box(), 6000, 300, 15);
    EXPECT_LE(std::abs(rep.discrepancy), 4.0 * rep.standard_error + 1e-12);
    EXPECT_EQ(rep.locality_violations, 0u);
    EXPECT_EQ(rep.locality_trials, 300u);
  }
}

TEST(Dlr, RequiresFiniteRange) {
  const auto model = toy_model();
  EXPECT_EQ(kind_of([&] { dlr_check(model, interval_box(0.4, 0.6), model.space.box(), 10, 10, 1); }),
            ErrorKind::requires_finite_range);
}

TEST(SampleFile, RoundTrip) {
  const auto model = toy_model(2.0, 1.0);
  Rng rng = make_stream(16);
  std::vector<FiniteConfiguration> draws;
  for (int i = 0; i < 50; ++i) draws.push_back(poisson_sample(model, model.space.box(), rng));
  draws.push_back(FiniteConfiguration{});
  std::stringstream ss;
  write_samples(ss, draws, 1);
  EXPECT_EQ(read_samples(ss), draws);
}

TEST(SampleFile, MalformedInput) {
  std::istringstream empty("");
  EXPECT_EQ(kind_of([&] { read_samples(empty); }), ErrorKind::config_error);
  std::istringstream header("# not a sample file\n");
  EXPECT_EQ(kind_of([&] { read_samples(header); }), ErrorKind::config_error);
  std::istringstream truncated("# mgibbs-samples v1 dim=1\n2 0.5 0:1\n");
  EXPECT_EQ(kind_of([&] { read_samples(truncated); }), ErrorKind::config_error);
}
