#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dyad/abm.hpp"
#include "test_support.hpp"

using namespace dyad;
using support::near;

namespace {

const PayoffMatrix kCanonical = PayoffMatrix::canonical_pd();

// |estimate - closed form| within 3 standard errors, with an absolute guard
// for the zero-variance (deterministic pairing) cells.
bool within_3se(const EstimateReport& rep, double closed_form) {
  return std::abs(rep.mean - closed_form) <= 3.0 * rep.std_error + 1e-12;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("identical seeds give bit-identical estimates") {
  const PairingModel pm(0.4, 0.3);
  const auto a = estimate_single_locus(kCanonical, pm, 20000, 77);
  const auto b = estimate_single_locus(kCanonical, pm, 20000, 77);
  REQUIRE(a.cooperate.mean == b.cooperate.mean);
  REQUIRE(a.defect.mean == b.defect.mean);
  REQUIRE(a.cooperate.std_error == b.cooperate.std_error);

  const auto c = estimate_single_locus(kCanonical, pm, 20000, 78);
  REQUIRE(a.cooperate.mean != c.cooperate.mean);

  const auto r1 = estimate_roles(kCanonical, 0.4, 0.3, 20000, 77);
  const auto r2 = estimate_roles(kCanonical, 0.4, 0.3, 20000, 77);
  REQUIRE(r1.cooperate.mean == r2.cooperate.mean);
  REQUIRE(r1.defect.mean == r2.defect.mean);
}

TEST_CASE("full relatedness pairs clones deterministically") {
  const auto est = estimate_single_locus(kCanonical, PairingModel(1.0, 0.2), 5000, 3);
  REQUIRE(est.cooperate.mean == 3.0);
  REQUIRE(est.defect.mean == 1.0);
  REQUIRE(est.cooperate.std_error == 0.0);
  REQUIRE(est.defect.std_error == 0.0);
}

TEST_CASE("random pairing in an all-cooperator pool is deterministic") {
  const auto est = estimate_single_locus(kCanonical, PairingModel(0.0, 1.0), 5000, 3);
  REQUIRE(est.cooperate.mean == 3.0);
  REQUIRE(est.defect.mean == 5.0);
}

TEST_CASE("shared-locus estimates straddle the closed form at the equilibrium") {
  const auto est = estimate_single_locus(kCanonical, PairingModel(5.0 / 12.0, 3.0 / 7.0),
                                         100000, 12345);
  const auto w = fitness_single(kCanonical, KinContext(5.0 / 12.0, 3.0 / 7.0));
  REQUIRE(within_3se(est.cooperate, w.cooperate));
  REQUIRE(within_3se(est.defect, w.defect));
  // The fitness gap estimate is within 3 joint standard errors of zero.
  const double se =
      std::hypot(est.cooperate.std_error, est.defect.std_error);
  REQUIRE(std::abs(est.cooperate.mean - est.defect.mean) <= 3.0 * se);
}

TEST_CASE("role-separated estimates at the reference points") {
  // Lone altruist, no relatedness: pure cost vs baseline, zero variance.
  const auto lone = estimate_roles(kCanonical, 0.0, 0.0, 5000, 9);
  REQUIRE(lone.cooperate.mean == 0.0);
  REQUIRE(lone.defect.mean == 1.0);

  // Threshold at f = 0: both alleles deterministic and equal.
  const auto at_threshold = estimate_roles(kCanonical, 0.25, 0.0, 5000, 9);
  REQUIRE(at_threshold.cooperate.mean == 1.25);
  REQUIRE(at_threshold.defect.mean == 1.25);

  // Interior equilibrium: the gap straddles zero.
  const auto eq = estimate_roles(kCanonical, 5.0 / 12.0, 8.0 / 17.0, 100000, 4242);
  const double se = std::hypot(eq.cooperate.std_error, eq.defect.std_error);
  REQUIRE(std::abs(eq.cooperate.mean - eq.defect.mean) <= 3.0 * se);

  REQUIRE_THROWS_AS(estimate_roles(kCanonical, 1.2, 0.5, 100, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(estimate_single_locus(kCanonical, PairingModel(0.5, 0.5), 0, 1),
                    std::invalid_argument);
}

TEST_CASE("partner behaviour in the roles model is independent of relatedness") {
  const double f = 0.37;
  const std::size_t n = 100000;
  const double se = std::sqrt(f * (1.0 - f) / static_cast<double>(2 * n));
  for (double r : {0.0, 0.3, 0.7, 1.0}) {
    const auto est = estimate_roles(kCanonical, r, f, n, 555);
    REQUIRE(std::abs(est.partner_coop_frequency - f) <= 3.0 * se);
  }
}

TEST_CASE("oracle agreement on a reduced grid") {
  const PayoffMatrix mats[] = {kCanonical, PayoffMatrix::additive_pd(),
                               PayoffMatrix::positive_synergy_pd()};
  int bad = 0;
  for (const auto& m : mats) {
    for (double r : {0.0, 0.5, 1.0}) {
      for (double f : {0.0, 0.5, 1.0}) {
        const auto single = estimate_single_locus(m, PairingModel(r, f), 20000, 99);
        const auto w = fitness_single(m, KinContext(r, f));
        if (!within_3se(single.cooperate, w.cooperate)) ++bad;
        if (!within_3se(single.defect, w.defect)) ++bad;

        const auto roles = estimate_roles(m, r, f, 20000, 99);
        const auto i = inclusive_fitness_roles(m, r, f);
        if (!within_3se(roles.cooperate, i.cooperate)) ++bad;
        if (!within_3se(roles.defect, i.defect)) ++bad;
      }
    }
  }
  REQUIRE(bad <= 1);  // 108 comparisons at 3 sigma
}

TEST_CASE("evolution reproduces the stable mixed equilibrium") {
  std::vector<double> terminals;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    PopulationConfig cfg;
    cfg.size = 10000;
    cfg.init_f1 = 0.2;
    cfg.relatedness = 5.0 / 12.0;
    cfg.generations = 400;
    cfg.seed = seed;
    const auto series = evolve_population(cfg, kCanonical, SelectionMode::Single);
    REQUIRE(series.f1.size() == 401);
    terminals.push_back(series.f1.back());
  }
  REQUIRE(near(median(terminals), 3.0 / 7.0, 0.05));
}

TEST_CASE("evolution under role separation fixes opposite alleles") {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    PopulationConfig cfg;
    cfg.size = 10000;
    cfg.init_f1 = 0.9;
    cfg.init_f2 = 0.1;
    cfg.relatedness = 5.0 / 12.0;
    cfg.generations = 300;
    cfg.seed = seed;
    const auto series = evolve_population(cfg, kCanonical, SelectionMode::Roles);
    if (near(series.f1.back(), 1.0, 0.05) && near(series.f2.back(), 0.0, 0.05)) ++hits;
  }
  REQUIRE(hits >= 18);
}

TEST_CASE("clonal pairing drives cooperation upward") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    PopulationConfig cfg;
    cfg.size = 2000;
    cfg.init_f1 = 0.5;
    cfg.relatedness = 1.0;
    cfg.generations = 150;
    cfg.seed = seed;
    const auto series = evolve_population(cfg, kCanonical, SelectionMode::Single);
    REQUIRE(series.f1.back() >= 0.5);
    REQUIRE(series.f1.back() > 0.9);
  }
}

TEST_CASE("fitness shift bookkeeping") {
  PopulationConfig cfg;
  cfg.size = 100;
  cfg.generations = 1;
  cfg.relatedness = 0.3;

  // Explicit shift that leaves the minimum payoff non-positive is rejected
  // with the required shift in the message.
  cfg.fitness_shift = 0.0;
  REQUIRE_THROWS_AS(evolve_population(cfg, kCanonical, SelectionMode::Single),
                    std::invalid_argument);
  try {
    evolve_population(cfg, kCanonical, SelectionMode::Single);
  } catch (const std::invalid_argument& e) {
    REQUIRE(std::string(e.what()).find("required shift") != std::string::npos);
  }

  // Auto shift keeps all fitnesses strictly positive and is recorded.
  cfg.fitness_shift.reset();
  const auto series = evolve_population(cfg, kCanonical, SelectionMode::Single);
  REQUIRE(series.fitness_shift > 0.0);

  // Strictly positive payoffs need no shift.
  const PayoffMatrix positive{5, 3, 2, 1};
  const auto none = evolve_population(cfg, positive, SelectionMode::Single);
  REQUIRE(none.fitness_shift == 0.0);

  // Identical seeds give identical series.
  cfg.generations = 50;
  cfg.seed = 7;
  const auto s1 = evolve_population(cfg, kCanonical, SelectionMode::Single);
  const auto s2 = evolve_population(cfg, kCanonical, SelectionMode::Single);
  REQUIRE(s1.f1 == s2.f1);
}
