#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mgibbs/error.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/numeric.hpp"
#include "mgibbs/parallel.hpp"
#include "mgibbs/potential.hpp"
#include "mgibbs/rng.hpp"

namespace mgibbs {

/// Exterior configuration for a specification on `region`; every point lies outside it.
struct BoundaryCondition {
  FiniteConfiguration exterior;

  static BoundaryCondition empty() { return {}; }

  void validate(const Box& region) const {
    for (const auto& p : exterior) {
      require(!region.contains(p.position), ErrorKind::invalid_argument, "boundary point inside the active region");
    }
  }
};

inline MarkedPoint uniform_point(const ModelSpec& model, const Box& region, Rng& rng) {
  MarkedPoint p;
  for (int i = 0; i < region.dim; ++i) {
    p.position[i] = region.lower[i] + (region.upper[i] - region.lower[i]) * uniform01(rng);
    if (p.position[i] >= region.upper[i]) p.position[i] = std::nextafter(region.upper[i], region.lower[i]);
  }
  p.mark = model.marks.sample(rng);
  return p;
}

/// Marked Poisson process with intensity activity * sigma^tau on region x S.
inline FiniteConfiguration poisson_sample(const ModelSpec& model, const Box& region, Rng& rng,
                                          std::optional<double> activity = std::nullopt) {
  const double mean = activity.value_or(model.z) * model.intensity_mass(region);
  const auto n = mean > 0.0 ? std::poisson_distribution<long>(mean)(rng) : 0L;
  for (;;) {
    std::vector<MarkedPoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) pts.push_back(uniform_point(model, region, rng));
    try {
      return FiniteConfiguration::canonicalize(std::move(pts));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::duplicate_position) throw;
    }
  }
}

/// e^{-beta E_region(boundary u candidate)}: the unnormalised specification density w.r.t. nu.
inline double specification_weight(const FiniteConfiguration& candidate, const BoundaryCondition& boundary,
                                   const ModelSpec& model, const Box& region) {
  for (const auto& p : candidate) {
    require(region.contains(p.position), ErrorKind::region_out_of_bounds, "candidate point outside the region");
  }
  const double e = energy(candidate, model);
  if (e == kInfinity) return 0.0;
  const double w = interaction_unchecked(candidate.span(), boundary.exterior.span(), model);
  if (w == kInfinity) return 0.0;
  return boltzmann(e + w, model.beta);
}

/// Distance from a point to a box (0 inside), with periodic images when the space wraps.
inline double distance_to_box(const Position& p, const Box& box, const PositionSpace& space) {
  auto axis_gap = [&](double x, int i) {
    if (x < box.lower[i]) return box.lower[i] - x;
    if (x > box.upper[i]) return x - box.upper[i];
    return 0.0;
  };
  double r2 = 0.0;
  for (int i = 0; i < box.dim; ++i) {
    double d = axis_gap(p[i], i);
    if (space.boundary() == Boundary::periodic) {
      const double L = space.sides()[i];
      d = std::min({d, axis_gap(p[i] + L, i), axis_gap(p[i] - L, i)});
    }
    r2 += d * d;
  }
  return std::sqrt(r2);
}

struct RejectionOptions {
  double acceptance_floor = 1e-3;
  int pilot_draws = 2000;
  std::uint64_t pilot_seed = 0x5eed;
  std::size_t max_attempts = 10'000'000;
};

/// Exact sampler for the specification on a region: Poisson proposals at activity
/// z e^{beta B'} accepted with probability e^{-beta E_region} e^{-beta B' |omega|}.
class RejectionSampler {
 public:
  RejectionSampler(const ModelSpec& model, const Box& region, BoundaryCondition boundary, RejectionOptions opt = {})
      : model_(model), region_(region), boundary_(std::move(boundary)), opt_(opt) {
    model.validate();
    require(region.inside(model.space.box()), ErrorKind::region_out_of_bounds, "region is not inside the model box");
    boundary_.validate(region);
    B_prime_ = model.potential->stability_B() + boundary_bound() / model.beta;
    activity_ = model.z * std::exp(model.beta * B_prime_);
    if (opt_.pilot_draws > 0) {
      Rng rng = make_stream(opt_.pilot_seed, {0x9170});
      int accepted = 0;
      for (int i = 0; i < opt_.pilot_draws; ++i) accepted += try_once(rng).has_value() ? 1 : 0;
      acceptance_ = static_cast<double>(accepted) / opt_.pilot_draws;
      if (acceptance_ < opt_.acceptance_floor) {
        std::ostringstream msg;
        msg << "estimated acceptance " << acceptance_ << " below floor " << opt_.acceptance_floor;
        fail(ErrorKind::acceptance_too_low, msg.str());
      }
    }
  }

  double B_prime() const { return B_prime_; }
  double proposal_activity() const { return activity_; }
  double estimated_acceptance() const { return acceptance_; }

  FiniteConfiguration sample(Rng& rng) const {
    for (std::size_t attempt = 0; attempt < opt_.max_attempts; ++attempt) {
      if (auto c = try_once(rng)) return std::move(*c);
    }
    fail(ErrorKind::acceptance_too_low, "rejection sampler exceeded its attempt budget");
  }

 private:
  /// w_max: |inf phi| times the number of boundary points that can reach the region.
  double boundary_bound() const {
    const double lb = std::min(0.0, model_.potential->lower_bound());
    if (lb == 0.0) return 0.0;
    const auto& range = model_.potential->range();
    int count = 0;
    for (const auto& p : boundary_.exterior) {
      if (!range || distance_to_box(p.position, region_, model_.space) < *range) ++count;
    }
    return -lb * count;
  }

  std::optional<FiniteConfiguration> try_once(Rng& rng) const {
    auto proposal = poisson_sample(model_, region_, rng, activity_);
    const double w = specification_weight(proposal, boundary_, model_, region_);
    const double accept = w * std::exp(-model_.beta * B_prime_ * static_cast<double>(proposal.size()));
    if (uniform01(rng) < accept) return proposal;
    return std::nullopt;
  }

  ModelSpec model_;
  Box region_;
  BoundaryCondition boundary_;
  RejectionOptions opt_;
  double B_prime_ = 0.0;
  double activity_ = 0.0;
  double acceptance_ = 1.0;
};

inline FiniteConfiguration rejection_sample(const ModelSpec& model, const Box& region,
                                            const BoundaryCondition& boundary, Rng& rng,
                                            const RejectionOptions& opt = {}) {
  return RejectionSampler(model, region, boundary, opt).sample(rng);
}

/// Integrated autocorrelation time with Sokal's automatic window (c = 5).
inline double integrated_autocorrelation(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 4) return 1.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double x : xs) c0 += (x - mean) * (x - mean);
  c0 /= static_cast<double>(n);
  if (c0 == 0.0) return 1.0;
  double tau = 1.0;
  for (std::size_t t = 1; t < n / 2; ++t) {
    double ct = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) ct += (xs[i] - mean) * (xs[i + t] - mean);
    ct /= static_cast<double>(n);
    tau += 2.0 * ct / c0;
    if (static_cast<double>(t) >= 5.0 * tau) break;
  }
  return std::max(1.0, tau);
}

enum Proposal { kBirth = 0, kDeath = 1, kMove = 2, kMarkResample = 3 };

/// Summary statistics of a sample sequence; merge() is associative.
struct ChainStats {
  std::array<std::uint64_t, 4> proposed{};
  std::array<std::uint64_t, 4> accepted{};
  std::uint64_t samples = 0;
  double sum_n = 0.0;
  double sum_n2 = 0.0;
  double sum_energy = 0.0;
  double sum_energy2 = 0.0;
  double iat = 1.0;        // integrated autocorrelation time of |omega|
  double intensity = 0.0;  // z sigma^tau(region x S), for normalising rho
  double pair_r_max = 0.0;
  std::vector<double> pair_histogram;  // unordered pair counts per distance bin, summed over samples

  double acceptance_rate(int kind) const {
    return proposed[kind] == 0 ? 0.0 : static_cast<double>(accepted[kind]) / static_cast<double>(proposed[kind]);
  }
  double mean_n() const { return samples == 0 ? 0.0 : sum_n / static_cast<double>(samples); }
  double var_n() const {
    if (samples < 2) return 0.0;
    const double m = mean_n();
    return std::max(0.0, sum_n2 / static_cast<double>(samples) - m * m) * samples / (samples - 1.0);
  }
  double mean_energy() const { return samples == 0 ? 0.0 : sum_energy / static_cast<double>(samples); }
  double energy_standard_error() const {
    if (samples < 2) return 0.0;
    const double m = mean_energy();
    const double v = std::max(0.0, sum_energy2 / static_cast<double>(samples) - m * m) * samples / (samples - 1.0);
    return std::sqrt(v * iat / static_cast<double>(samples));
  }
  /// rho^(1) averaged over region x S: E|omega| / (z sigma^tau(region x S)).
  double rho1() const { return intensity > 0.0 ? mean_n() / intensity : 0.0; }
  double rho1_standard_error() const {
    if (intensity <= 0.0 || samples < 2) return 0.0;
    return std::sqrt(var_n() * iat / static_cast<double>(samples)) / intensity;
  }

  void record(const FiniteConfiguration& omega, double e, const PositionSpace& space) {
    const double n = static_cast<double>(omega.size());
    ++samples;
    sum_n += n;
    sum_n2 += n * n;
    sum_energy += e;
    sum_energy2 += e * e;
    if (!pair_histogram.empty()) {
      const double bins = static_cast<double>(pair_histogram.size());
      for (std::size_t i = 0; i < omega.size(); ++i) {
        for (std::size_t j = i + 1; j < omega.size(); ++j) {
          const double r = space.distance(omega[i].position, omega[j].position);
          if (r < pair_r_max) {
            const auto bin = std::min(pair_histogram.size() - 1, static_cast<std::size_t>(r / pair_r_max * bins));
            pair_histogram[bin] += 1.0;
          }
        }
      }
    }
  }

  void merge(const ChainStats& o) {
    const double total = static_cast<double>(samples + o.samples);
    if (total > 0) iat = (iat * samples + o.iat * o.samples) / total;
    for (int k = 0; k < 4; ++k) {
      proposed[k] += o.proposed[k];
      accepted[k] += o.accepted[k];
    }
    samples += o.samples;
    sum_n += o.sum_n;
    sum_n2 += o.sum_n2;
    sum_energy += o.sum_energy;
    sum_energy2 += o.sum_energy2;
    if (pair_histogram.size() < o.pair_histogram.size()) pair_histogram.resize(o.pair_histogram.size(), 0.0);
    for (std::size_t i = 0; i < o.pair_histogram.size(); ++i) pair_histogram[i] += o.pair_histogram[i];
    if (intensity == 0.0) intensity = o.intensity;
    if (pair_r_max == 0.0) pair_r_max = o.pair_r_max;
  }
};

struct SamplerConfig {
  std::uint64_t seed = 1;
  std::size_t sweeps = 10000;     // recorded samples
  std::size_t burn_in = 1000;     // proposals discarded before recording
  std::size_t thinning = 10;      // proposals between recorded samples
  double p_birth = 0.3;
  double p_death = 0.3;
  double p_move = 0.3;
  double p_mark = 0.1;
  double step_fraction = 0.1;     // move half-width as a fraction of the region side
  int histogram_bins = 0;
  double histogram_r_max = 0.0;
  bool keep_samples = false;

  void validate() const {
    const double ps[] = {p_birth, p_death, p_move, p_mark};
    for (double p : ps) require(p >= 0.0, ErrorKind::invalid_argument, "proposal probabilities must be nonnegative");
    require(std::abs(p_birth + p_death + p_move + p_mark - 1.0) < 1e-12, ErrorKind::invalid_argument,
            "proposal probabilities must sum to 1");
    require(p_birth > 0.0 && p_death > 0.0, ErrorKind::invalid_argument, "birth and death must both be possible");
    require(thinning >= 1, ErrorKind::invalid_argument, "thinning must be >= 1");
    require(step_fraction > 0.0, ErrorKind::invalid_argument, "move step must be positive");
  }
};

struct ChainResult {
  ChainStats stats;
  std::vector<FiniteConfiguration> samples;
};

namespace detail {

inline double point_interaction(const MarkedPoint& x, const std::vector<MarkedPoint>& others, std::size_t skip,
                                const FiniteConfiguration& boundary, const ModelSpec& model) {
  double w = 0.0;
  for (std::size_t j = 0; j < others.size(); ++j) {
    if (j == skip) continue;
    const double v = pair_value(x, others[j], model);
    if (v == kInfinity) return kInfinity;
    w += v;
  }
  for (const auto& b : boundary) {
    const double v = pair_value(x, b, model);
    if (v == kInfinity) return kInfinity;
    w += v;
  }
  return w;
}

inline double accept_probability(double log_ratio) { return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio); }

}  // namespace detail

/// Birth/death/move/mark Metropolis-Hastings chain targeting the specification on region.
inline ChainResult mcmc_run(const ModelSpec& model, const Box& region, const BoundaryCondition& boundary,
                            const SamplerConfig& cfg, std::optional<FiniteConfiguration> start = std::nullopt) {
  model.validate();
  cfg.validate();
  require(region.inside(model.space.box()), ErrorKind::region_out_of_bounds, "region is not inside the model box");
  boundary.validate(region);
  Rng rng = make_stream(cfg.seed, {0x3c3c});
  const double intensity = model.z * model.intensity_mass(region);
  const bool wraps = model.space.boundary() == Boundary::periodic && region == model.space.box();
  std::vector<MarkedPoint> pts;
  if (start) pts.assign(start->begin(), start->end());
  double e = energy(std::span<const MarkedPoint>(pts), model) +
             interaction_unchecked(pts, boundary.exterior.span(), model);
  require(e != kInfinity, ErrorKind::invalid_argument, "chain start has infinite energy");

  ChainResult out;
  ChainStats& st = out.stats;
  st.intensity = intensity;
  if (cfg.histogram_bins > 0) {
    st.pair_histogram.assign(static_cast<std::size_t>(cfg.histogram_bins), 0.0);
    st.pair_r_max = cfg.histogram_r_max;
  }
  std::vector<double> n_series;
  n_series.reserve(cfg.sweeps);

  const double c_birth = cfg.p_birth, c_death = cfg.p_death;
  const double t1 = cfg.p_birth, t2 = t1 + cfg.p_death, t3 = t2 + cfg.p_move;
  auto step = [&] {
    const double u = uniform01(rng);
    const double n = static_cast<double>(pts.size());
    if (u < t1) {
      ++st.proposed[kBirth];
      const auto x = uniform_point(model, region, rng);
      const bool clash = std::any_of(pts.begin(), pts.end(), [&](const auto& q) { return q.position == x.position; });
      const double dE = clash ? kInfinity : detail::point_interaction(x, pts, pts.size(), boundary.exterior, model);
      const double a = dE == kInfinity ? 0.0
                                       : detail::accept_probability(std::log(intensity * c_death / (c_birth * (n + 1))) -
                                                                    model.beta * dE);
      if (uniform01(rng) < a) {
        pts.push_back(x);
        e += dE;
        ++st.accepted[kBirth];
      }
    } else if (u < t2) {
      ++st.proposed[kDeath];
      if (pts.empty()) return;
      const auto i = std::min(pts.size() - 1, static_cast<std::size_t>(uniform01(rng) * n));
      const double dE = -detail::point_interaction(pts[i], pts, i, boundary.exterior, model);
      const double a = detail::accept_probability(std::log(n * c_birth / (intensity * c_death)) - model.beta * dE);
      if (uniform01(rng) < a) {
        pts.erase(pts.begin() + static_cast<long>(i));
        e += dE;
        ++st.accepted[kDeath];
      }
    } else if (u < t3) {
      ++st.proposed[kMove];
      if (pts.empty()) return;
      const auto i = std::min(pts.size() - 1, static_cast<std::size_t>(uniform01(rng) * n));
      MarkedPoint y = pts[i];
      bool inside = true;
      for (int a = 0; a < region.dim; ++a) {
        const double side = region.upper[a] - region.lower[a];
        y.position[a] += cfg.step_fraction * side * (2.0 * uniform01(rng) - 1.0);
        if (wraps) {
          y.position[a] = region.lower[a] + std::fmod(y.position[a] - region.lower[a] + side, side);
          if (y.position[a] >= region.upper[a]) y.position[a] = region.lower[a];
        }
        inside = inside && y.position[a] >= region.lower[a] && y.position[a] < region.upper[a];
      }
      if (!inside) return;
      const bool clash = std::any_of(pts.begin(), pts.end(), [&](const auto& q) { return q.position == y.position; });
      if (clash) return;
      const double old_w = detail::point_interaction(pts[i], pts, i, boundary.exterior, model);
      const double new_w = detail::point_interaction(y, pts, i, boundary.exterior, model);
      if (new_w == kInfinity) return;
      const double dE = new_w - old_w;
      if (uniform01(rng) < detail::accept_probability(-model.beta * dE)) {
        pts[i] = y;
        e += dE;
        ++st.accepted[kMove];
      }
    } else {
      ++st.proposed[kMarkResample];
      if (pts.empty()) return;
      const auto i = std::min(pts.size() - 1, static_cast<std::size_t>(uniform01(rng) * n));
      MarkedPoint y = pts[i];
      y.mark = model.marks.sample(rng);
      const double old_w = detail::point_interaction(pts[i], pts, i, boundary.exterior, model);
      const double new_w = detail::point_interaction(y, pts, i, boundary.exterior, model);
      if (new_w == kInfinity) return;
      const double dE = new_w - old_w;
      if (uniform01(rng) < detail::accept_probability(-model.beta * dE)) {
        pts[i] = y;
        e += dE;
        ++st.accepted[kMarkResample];
      }
    }
  };

  for (std::size_t i = 0; i < cfg.burn_in; ++i) step();
  for (std::size_t s = 0; s < cfg.sweeps; ++s) {
    for (std::size_t t = 0; t < cfg.thinning; ++t) step();
    const auto omega = FiniteConfiguration::canonicalize(pts);
    const double exact_e = energy(omega, model) + interaction_unchecked(omega.span(), boundary.exterior.span(), model);
    e = exact_e;  // resynchronise the running energy
    st.record(omega, exact_e, model.space);
    n_series.push_back(static_cast<double>(omega.size()));
    if (cfg.keep_samples) out.samples.push_back(omega);
  }
  st.iat = integrated_autocorrelation(n_series);
  return out;
}

/// Independent chains with seeds (seed, chain) run in parallel and merged in chain order.
inline ChainResult mcmc_run_parallel(const ModelSpec& model, const Box& region, const BoundaryCondition& boundary,
                                     const SamplerConfig& cfg, std::size_t chains) {
  auto results = run_chunks<ChainResult>(chains, 0, [&](std::size_t c) {
    SamplerConfig local = cfg;
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(c)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    local.seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    return mcmc_run(model, region, boundary, local);
  });
  ChainResult out = std::move(results.front());
  for (std::size_t c = 1; c < results.size(); ++c) {
    out.stats.merge(results[c].stats);
    for (auto& s : results[c].samples) out.samples.push_back(std::move(s));
  }
  return out;
}

/// Statistics of independent exact draws.
inline ChainStats rejection_run(const ModelSpec& model, const Box& region, const BoundaryCondition& boundary,
                                std::size_t draws, std::uint64_t seed, int bins = 0, double r_max = 0.0,
                                const RejectionOptions& opt = {},
                                std::vector<FiniteConfiguration>* keep = nullptr) {
  const RejectionSampler sampler(model, region, boundary, opt);
  const std::size_t chunk = 4096;
  const std::size_t chunks = (draws + chunk - 1) / chunk;
  std::vector<std::vector<FiniteConfiguration>> kept(keep ? chunks : 0);
  auto parts = run_chunks<ChainStats>(chunks, 0, [&](std::size_t c) {
    ChainStats st;
    st.intensity = model.z * model.intensity_mass(region);
    if (bins > 0) {
      st.pair_histogram.assign(static_cast<std::size_t>(bins), 0.0);
      st.pair_r_max = r_max;
    }
    Rng rng = make_stream(seed, {0x7e7e, c});
    for (std::size_t i = c * chunk; i < std::min(draws, (c + 1) * chunk); ++i) {
      const auto omega = sampler.sample(rng);
      st.record(omega, energy(omega, model) + interaction_unchecked(omega.span(), boundary.exterior.span(), model),
                model.space);
      if (keep) kept[c].push_back(omega);
    }
    return st;
  });
  ChainStats out = parts.front();
  for (std::size_t c = 1; c < parts.size(); ++c) out.merge(parts[c]);
  out.iat = 1.0;
  if (keep) {
    for (auto& k : kept) {
      for (auto& omega : k) keep->push_back(std::move(omega));
    }
  }
  return out;
}

struct DlrReport {
  double direct_mean = 0.0;
  double resampled_mean = 0.0;
  double discrepancy = 0.0;
  double standard_error = 0.0;
  bool within_3_sigma = false;
  std::size_t locality_trials = 0;
  std::size_t locality_violations = 0;
  std::size_t samples = 0;
};

/// Draws a configuration on `outer` from the specification with empty boundary, resamples
/// its restriction to `inner` given the rest, and compares F = |omega_inner| before and
/// after (paired differences). Also checks that specification weights ignore boundary
/// points farther than R from `inner`, bit for bit.
inline DlrReport dlr_check(const ModelSpec& model, const Box& inner, const Box& outer, std::size_t samples,
                           std::size_t locality_trials, std::uint64_t seed) {
  model.validate();
  require(model.potential->range().has_value(), ErrorKind::requires_finite_range, "DLR check needs finite range");
  require(inner.inside(outer), ErrorKind::region_out_of_bounds, "inner region must lie in the outer region");
  const double R = *model.potential->range();
  const RejectionSampler outer_sampler(model, outer, BoundaryCondition::empty());
  RejectionOptions inner_opt;
  inner_opt.pilot_draws = 0;

  struct Moments {
    CompensatedSum a, b, d, d2;
  };
  const std::size_t chunk = 4096;
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  auto parts = run_chunks<Moments>(chunks, 0, [&](std::size_t c) {
    Moments m;
    Rng rng = make_stream(seed, {0xd1a, c});
    for (std::size_t i = c * chunk; i < std::min(samples, (c + 1) * chunk); ++i) {
      const auto omega = outer_sampler.sample(rng);
      const auto ext = exterior_of(omega, inner);
      const double before = static_cast<double>(omega.size() - ext.size());
      const RejectionSampler inner_sampler(model, inner, BoundaryCondition{ext}, inner_opt);
      const double after = static_cast<double>(inner_sampler.sample(rng).size());
      m.a += before;
      m.b += after;
      m.d += after - before;
      m.d2 += (after - before) * (after - before);
    }
    return m;
  });
  Moments total;
  for (const auto& p : parts) {
    total.a += p.a;
    total.b += p.b;
    total.d += p.d;
    total.d2 += p.d2;
  }
  DlrReport rep;
  const double n = static_cast<double>(samples);
  rep.samples = samples;
  rep.direct_mean = total.a.value() / n;
  rep.resampled_mean = total.b.value() / n;
  rep.discrepancy = total.d.value() / n;
  const double var = std::max(0.0, total.d2.value() / n - rep.discrepancy * rep.discrepancy) * n / (n - 1.0);
  rep.standard_error = std::sqrt(var / n);
  rep.within_3_sigma = std::abs(rep.discrepancy) <= 3.0 * rep.standard_error + 1e-15;

  // Locality: boundary points are moved, added or removed outside the R-collar of `inner`.
  Rng rng = make_stream(seed, {0x10ca1});
  auto far_point = [&]() -> std::optional<MarkedPoint> {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      auto p = uniform_point(model, outer, rng);
      if (distance_to_box(p.position, inner, model.space) > R) return p;
    }
    return std::nullopt;
  };
  auto near_point = [&]() {
    for (;;) {
      auto p = uniform_point(model, outer, rng);
      if (!inner.contains(p.position)) return p;
    }
  };
  rep.locality_trials = locality_trials;
  for (std::size_t t = 0; t < locality_trials; ++t) {
    const auto candidate = poisson_sample(model, inner, rng, std::max(model.z, 3.0 / model.intensity_mass(inner)));
    std::vector<MarkedPoint> base;
    const int nb = 1 + static_cast<int>(uniform01(rng) * 6);
    for (int i = 0; i < nb; ++i) base.push_back(near_point());
    std::vector<MarkedPoint> perturbed;
    for (const auto& p : base) {
      if (distance_to_box(p.position, inner, model.space) < R) {
        perturbed.push_back(p);
      } else if (uniform01(rng) < 0.5) {
        if (auto q = far_point()) perturbed.push_back(*q);
      }
    }
    const int extra = static_cast<int>(uniform01(rng) * 4);
    for (int i = 0; i < extra; ++i) {
      if (auto q = far_point()) perturbed.push_back(*q);
    }
    try {
      const BoundaryCondition b1{FiniteConfiguration::canonicalize(base)};
      const BoundaryCondition b2{FiniteConfiguration::canonicalize(perturbed)};
      const double w1 = specification_weight(candidate, b1, model, inner);
      const double w2 = specification_weight(candidate, b2, model, inner);
      if (std::memcmp(&w1, &w2, sizeof(double)) != 0) ++rep.locality_violations;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::duplicate_position) throw;
    }
  }
  return rep;
}

/// Line format: "# mgibbs-samples v1 dim=<d>" header, then per configuration
/// "<n> x_1 .. x_d mark_1 ..." with marks as "<label>:<value>".
inline void write_samples(std::ostream& os, const std::vector<FiniteConfiguration>& samples, int dim) {
  os << "# mgibbs-samples v1 dim=" << dim << "\n";
  char buf[64];
  for (const auto& omega : samples) {
    os << omega.size();
    for (const auto& p : omega) {
      for (int i = 0; i < dim; ++i) {
        std::snprintf(buf, sizeof buf, " %.17g", p.position[i]);
        os << buf;
      }
      std::snprintf(buf, sizeof buf, " %d:%.17g", p.mark.label, p.mark.value);
      os << buf;
    }
    os << "\n";
  }
}

inline std::vector<FiniteConfiguration> read_samples(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorKind::config_error, "empty sample file");
  int dim = 0;
  require(std::sscanf(line.c_str(), "# mgibbs-samples v1 dim=%d", &dim) == 1 && dim >= 1 && dim <= kMaxDimension,
          ErrorKind::config_error, "bad sample file header");
  std::vector<FiniteConfiguration> out;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::size_t n = 0;
    ls >> n;
    std::vector<MarkedPoint> pts(n);
    for (auto& p : pts) {
      for (int i = 0; i < dim; ++i) ls >> p.position[i];
      std::string mark;
      ls >> mark;
      const auto colon = mark.find(':');
      require(colon != std::string::npos, ErrorKind::config_error, "bad mark token in sample file");
      p.mark.label = std::stoi(mark.substr(0, colon));
      p.mark.value = std::stod(mark.substr(colon + 1));
    }
    require(!ls.fail(), ErrorKind::config_error, "truncated sample line");
    out.push_back(FiniteConfiguration::canonicalize(std::move(pts)));
  }
  return out;
}

}  // namespace mgibbs
