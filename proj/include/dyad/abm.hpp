#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "game.hpp"
#include "kin.hpp"
#include "rng.hpp"

namespace dyad {

/// Pairing process: with probability r the partner carries the focal allele,
/// otherwise the partner cooperates with the pool frequency f_c.
struct PairingModel {
  double relatedness = 0.0;
  double coop_freq = 0.0;

  PairingModel(double r, double f_c) : relatedness(r), coop_freq(f_c) {
    detail::require_unit(r, "relatedness");
    detail::require_unit(f_c, "cooperation-allele frequency");
  }
};

struct EstimateReport {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

struct EstimatePair {
  EstimateReport cooperate;
  EstimateReport defect;
  // Pooled empirical frequency of partner cooperation across both runs;
  // in the roles model this must track f_c regardless of r.
  double partner_coop_frequency = 0.0;
};

namespace detail {

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }

  EstimateReport report(std::uint64_t seed) const {
    EstimateReport r;
    r.samples = n;
    r.seed = seed;
    r.mean = sum / static_cast<double>(n);
    if (n > 1) {
      const double var =
          std::max(0.0, (sum_sq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1));
      r.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return r;
  }
};

}  // namespace detail

/// Monte Carlo estimate of the shared-locus allele fitnesses. Each sample
/// pairs a focal C (resp. D) carrier with a same-allele partner with
/// probability r, otherwise with a partner cooperating at frequency f_c, and
/// records the focal payoff. Means converge to the closed-form fitnesses.
inline EstimatePair estimate_single_locus(const PayoffMatrix& m, const PairingModel& pm,
                                          std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  EstimatePair out;
  std::size_t coop_partners = 0;
  const Action alleles[2] = {Action::Cooperate, Action::Defect};
  detail::Accumulator acc[2];
  for (int k = 0; k < 2; ++k) {
    Rng rng(seed, static_cast<std::uint64_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
      const Action focal = alleles[k];
      Action partner;
      if (rng.bernoulli(pm.relatedness))
        partner = focal;
      else
        partner = rng.bernoulli(pm.coop_freq) ? Action::Cooperate : Action::Defect;
      if (partner == Action::Cooperate) ++coop_partners;
      acc[k].add(m.payoff(focal, partner));
    }
  }
  out.cooperate = acc[0].report(seed);
  out.defect = acc[1].report(seed);
  out.partner_coop_frequency = static_cast<double>(coop_partners) / static_cast<double>(2 * n);
  return out;
}

/// Monte Carlo estimate of the role-separated inclusive fitnesses. The focal
/// player holds the altruist-role history and plays its allele; the partner
/// holds the opposite role and cooperates with frequency f_c_other,
/// independent of r. Each sample records own payoff + r * partner payoff.
inline EstimatePair estimate_roles(const PayoffMatrix& m, double relatedness,
                                   double coop_freq_other, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  detail::require_unit(relatedness, "relatedness");
  detail::require_unit(coop_freq_other, "cooperation-allele frequency");
  EstimatePair out;
  std::size_t coop_partners = 0;
  const Action alleles[2] = {Action::Cooperate, Action::Defect};
  detail::Accumulator acc[2];
  for (int k = 0; k < 2; ++k) {
    Rng rng(seed, 2 + static_cast<std::uint64_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
      const Action focal = alleles[k];
      const Action partner =
          rng.bernoulli(coop_freq_other) ? Action::Cooperate : Action::Defect;
      if (partner == Action::Cooperate) ++coop_partners;
      acc[k].add(m.payoff(focal, partner) + relatedness * m.payoff(partner, focal));
    }
  }
  out.cooperate = acc[0].report(seed);
  out.defect = acc[1].report(seed);
  out.partner_coop_frequency = static_cast<double>(coop_partners) / static_cast<double>(2 * n);
  return out;
}

struct PopulationConfig {
  std::size_t size = 10000;
  double init_f1 = 0.5;  // initial cooperation frequency (first locus)
  double init_f2 = 0.5;  // second locus, roles mode only
  double relatedness = 0.0;
  std::size_t generations = 400;
  std::uint64_t seed = 1;
  // Additive payoff shift making fitnesses strictly positive; chosen from the
  // payoff range when absent. Constant within a run.
  std::optional<double> fitness_shift;
};

struct EvolutionSeries {
  std::vector<double> f1;  // per generation, index 0 = initial state
  std::vector<double> f2;  // empty in single mode
  double fitness_shift = 0.0;
  std::uint64_t seed = 0;
  // The pairing parameter r is held constant across generations as an
  // idealisation; no pedigree process maintains it.
  double relatedness = 0.0;
};

namespace detail {

inline double min_single_payoff(const PayoffMatrix& m) {
  return std::min(std::min(m.t, m.r), std::min(m.p, m.s));
}

inline double min_roles_value(const PayoffMatrix& m, double r) {
  const Action acts[2] = {Action::Cooperate, Action::Defect};
  double lo = m.payoff(acts[0], acts[0]) * (1.0 + r);
  for (Action a : acts)
    for (Action b : acts) lo = std::min(lo, m.payoff(a, b) + r * m.payoff(b, a));
  return lo;
}

inline double resolve_shift(std::optional<double> requested, double min_value,
                            const PayoffMatrix& m) {
  if (requested) {
    if (!(min_value + *requested > 0.0))
      throw std::invalid_argument(
          "fitness shift leaves non-positive fitnesses; required shift > " +
          std::to_string(-min_value));
    return *requested;
  }
  if (min_value > 0.0) return 0.0;
  const double span = m.max_abs() > 0.0 ? m.max_abs() : 1.0;
  return -min_value + 0.01 * span;
}

// Fitness-proportional resampling: N draws against the cumulative fitness.
inline std::vector<Action> resample(const std::vector<Action>& alleles,
                                    const std::vector<double>& fitness, Rng& rng) {
  std::vector<double> cumulative(fitness.size());
  double total = 0.0;
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    total += fitness[i];
    cumulative[i] = total;
  }
  std::vector<Action> next(alleles.size());
  for (std::size_t i = 0; i < alleles.size(); ++i) {
    const double u = rng.uniform01() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto idx = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                 static_cast<std::ptrdiff_t>(alleles.size()) - 1));
    next[i] = alleles[idx];
  }
  return next;
}

inline std::vector<Action> init_alleles(std::size_t n, double freq) {
  std::vector<Action> alleles(n, Action::Defect);
  const auto n_coop = static_cast<std::size_t>(std::llround(freq * static_cast<double>(n)));
  std::fill(alleles.begin(), alleles.begin() + static_cast<std::ptrdiff_t>(n_coop),
            Action::Cooperate);
  return alleles;
}

inline double coop_frequency(const std::vector<Action>& alleles) {
  std::size_t k = 0;
  for (Action a : alleles) k += a == Action::Cooperate ? 1 : 0;
  return static_cast<double>(k) / static_cast<double>(alleles.size());
}

}  // namespace detail

/// Evolves a finite population under fitness-proportional resampling, with
/// per-individual fitnesses sampled from the matching estimate model each
/// generation. Returns the cooperation-allele frequency time series.
inline EvolutionSeries evolve_population(const PopulationConfig& cfg, const PayoffMatrix& m,
                                         SelectionMode mode) {
  if (cfg.size < 2) throw std::invalid_argument("population size must be >= 2");
  detail::require_unit(cfg.init_f1, "initial frequency f1");
  detail::require_unit(cfg.init_f2, "initial frequency f2");
  detail::require_unit(cfg.relatedness, "relatedness");

  const double r = cfg.relatedness;
  const double min_value = mode == SelectionMode::Single ? detail::min_single_payoff(m)
                                                         : detail::min_roles_value(m, r);
  const double shift = detail::resolve_shift(cfg.fitness_shift, min_value, m);

  EvolutionSeries series;
  series.fitness_shift = shift;
  series.seed = cfg.seed;
  series.relatedness = r;

  Rng rng(cfg.seed, 101);
  std::vector<double> fitness(cfg.size);

  auto locus_step = [&](std::vector<Action>& alleles, double other_freq, bool roles) {
    const double own_freq = detail::coop_frequency(alleles);
    for (std::size_t i = 0; i < alleles.size(); ++i) {
      const Action focal = alleles[i];
      Action partner;
      double value;
      if (roles) {
        partner = rng.bernoulli(other_freq) ? Action::Cooperate : Action::Defect;
        value = m.payoff(focal, partner) + r * m.payoff(partner, focal);
      } else {
        if (rng.bernoulli(r))
          partner = focal;
        else
          partner = rng.bernoulli(own_freq) ? Action::Cooperate : Action::Defect;
        value = m.payoff(focal, partner);
      }
      fitness[i] = value + shift;
    }
    alleles = detail::resample(alleles, fitness, rng);
  };

  if (mode == SelectionMode::Single) {
    auto alleles = detail::init_alleles(cfg.size, cfg.init_f1);
    series.f1.push_back(detail::coop_frequency(alleles));
    for (std::size_t g = 0; g < cfg.generations; ++g) {
      locus_step(alleles, 0.0, false);
      series.f1.push_back(detail::coop_frequency(alleles));
    }
  } else {
    auto locus1 = detail::init_alleles(cfg.size, cfg.init_f1);
    auto locus2 = detail::init_alleles(cfg.size, cfg.init_f2);
    series.f1.push_back(detail::coop_frequency(locus1));
    series.f2.push_back(detail::coop_frequency(locus2));
    for (std::size_t g = 0; g < cfg.generations; ++g) {
      const double f1 = detail::coop_frequency(locus1);
      const double f2 = detail::coop_frequency(locus2);
      locus_step(locus1, f2, true);
      locus_step(locus2, f1, true);
      series.f1.push_back(detail::coop_frequency(locus1));
      series.f2.push_back(detail::coop_frequency(locus2));
    }
  }
  return series;
}

}  // namespace dyad
