// Acceptance suite: exercises each release criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dyad/dyad.hpp"
#include "test_support.hpp"

using namespace dyad;

namespace {

int g_failures = 0;

void criterion(int index, const std::string& label, bool ok) {
  std::printf("[%s] %d. %s\n", ok ? "PASS" : "FAIL", index, label.c_str());
  if (!ok) ++g_failures;
}

const PayoffMatrix kCanonical = PayoffMatrix::canonical_pd();
const PayoffMatrix kAdditive = PayoffMatrix::additive_pd();
const PayoffMatrix kPositive = PayoffMatrix::positive_synergy_pd();

// 1. Shared-locus mixed equilibrium at r = 5/12: f* = 3/7, stable.
bool c1_mixed_equilibrium() {
  const auto rep = equilibrium_single(kCanonical, 5.0 / 12.0);
  return rep.f_star && std::abs(*rep.f_star - 3.0 / 7.0) < 1e-12 && rep.stable;
}

// 2. Threshold interval endpoints for the canonical matrix.
bool c2_threshold_endpoints() {
  const auto single = threshold_bounds_single(kCanonical);
  const auto roles = threshold_bounds_roles(kCanonical);
  if (!single || !roles) return false;
  return std::abs(single->lo - 1.0 / 3.0) < 1e-12 && std::abs(single->hi - 0.5) < 1e-12 &&
         std::abs(roles->lo - 0.25) < 1e-12 && std::abs(roles->hi - 2.0 / 3.0) < 1e-12;
}

// 3. Donation-game realisability across 1000 random instances per taxon,
//    plus the exact Hawk-Dove synergy -C/2 on 1000 dyadic-rational draws.
bool c3_realisability_suite() {
  Rng rng(826);
  for (int i = 0; i < 1000; ++i) {
    const auto pd = support::random_taxon(GameClass::PrisonersDilemma, rng);
    const auto alt = strong_altruism_map(pd);
    if (!alt || alt->altruist != Action::Cooperate) return false;
    if (strong_altruism_map(support::random_taxon(GameClass::Chicken, rng))) return false;
    if (strong_altruism_map(support::random_taxon(GameClass::BattleOfSexes, rng))) return false;
    if (strong_altruism_map(support::random_taxon(GameClass::Apology, rng))) return false;
  }
  for (int i = 0; i < 1000; ++i) {
    const double v = static_cast<double>(rng.below(1024) + 1) / 64.0;
    const double c = static_cast<double>(rng.below(1025)) / 64.0;
    if (decompose(hawk_dove_matrix({v, c})).d != -c / 2.0) return false;
  }
  return true;
}

// 4. The decomposed inclusive-fitness identity on a 10x10x5 grid.
bool c4_identity_grid() {
  const PayoffMatrix mats[] = {kCanonical, kAdditive, kPositive,
                               {2, 1, -2, -1}, hawk_dove_matrix({4, 2})};
  for (const auto& m : mats) {
    const auto dec = decompose(m);
    for (int qi = 0; qi <= 9; ++qi) {
      for (int ri = 0; ri <= 9; ++ri) {
        const double q = qi / 9.0, r = ri / 9.0;
        const auto direct = inclusive_fitness_roles(m, r, q);
        const auto rewritten = inclusive_fitness_from_decomposition(dec.b, dec.c, dec.d, q, r);
        const double diff = (rewritten.cooperate - rewritten.defect) -
                            (direct.cooperate - direct.defect);
        if (std::abs(diff) >= 1e-12) return false;
      }
    }
  }
  return true;
}

// 5. Role-separated equilibrium contract: the inclusive-fitness gap vanishes
//    at f* and f* agrees with an independent bisection root; the sign-flipped
//    numerator variant fails this for the canonical matrix at r = 1/2.
bool c5_roles_equilibrium_contract() {
  Rng rng(517);
  int tested = 0;
  while (tested < 50) {
    const double b = rng.uniform(1.0, 6.0);
    const double c = b * rng.uniform(0.2, 0.8);
    const double d_lo = 0.6 * (c - b) / 2.0, d_hi = 0.6 * c;
    double d = rng.uniform(d_lo, d_hi);
    if (std::abs(d) < 0.05) continue;
    const double base = rng.uniform(-1.0, 3.0);
    const PayoffMatrix m{base + b, base + b - c + d, base, base - c};

    const auto bounds = threshold_bounds_roles(m);
    if (!bounds || bounds->hi - bounds->lo < 1e-3) continue;
    const double r = bounds->lo + rng.uniform(0.1, 0.9) * (bounds->hi - bounds->lo);
    if (r <= 0.0 || r >= 1.0) continue;

    const auto rep = equilibrium_roles(m, r);
    if (!rep.f_star) return false;
    auto gap = [&](double f) {
      const auto i = inclusive_fitness_roles(m, r, f);
      return i.cooperate - i.defect;
    };
    if (std::abs(gap(*rep.f_star)) >= 1e-10) return false;
    const double root = support::bisect(gap, 0.0, 1.0);
    if (std::abs(*rep.f_star - root) >= 1e-9) return false;
    ++tested;
  }

  // The as-printed numerator sign puts the canonical equilibrium at -2.
  const double d = decompose(kCanonical).d;
  const double flipped = (kCanonical.p - kCanonical.s - 0.5 * (kCanonical.p - kCanonical.t)) /
                         (1.5 * d);
  if (!(flipped < 0.0 || flipped > 1.0)) return false;
  const auto rep = equilibrium_roles(kCanonical, 0.5);
  if (!rep.f_star) return false;
  const auto i = inclusive_fitness_roles(kCanonical, 0.5, *rep.f_star);
  return std::abs(i.cooperate - i.defect) < 1e-10;
}

// 6. Two-locus phase structure and basins for both synergy signs.
bool c6_phase_structure() {
  struct Case {
    PayoffMatrix m;
    double r;
    double f_star;
    TwoLocusState attractor_a, attractor_b;
    bool exclude_main_diagonal;  // stable manifold orientation
  };
  const Case cases[] = {
      {kCanonical, 5.0 / 12.0, 8.0 / 17.0, {1, 0}, {0, 1}, true},
      {kPositive, 0.3, 8.0 / 13.0, {0, 0}, {1, 1}, false},
  };
  Rng rng(2718);
  for (const auto& cs : cases) {
    const auto fps = fixed_points(cs.m, cs.r);
    const FixedPointReport* interior = nullptr;
    int stable_at_attractors = 0;
    for (const auto& fp : fps) {
      const bool at_a = std::abs(fp.location.f1 - cs.attractor_a.f1) < 1e-9 &&
                        std::abs(fp.location.f2 - cs.attractor_a.f2) < 1e-9;
      const bool at_b = std::abs(fp.location.f1 - cs.attractor_b.f1) < 1e-9 &&
                        std::abs(fp.location.f2 - cs.attractor_b.f2) < 1e-9;
      if ((at_a || at_b) && fp.classification == StabilityClass::StableNode)
        ++stable_at_attractors;
      if (fp.location.f1 > 0.0 && fp.location.f1 < 1.0) interior = &fp;
    }
    if (stable_at_attractors != 2) return false;
    if (!interior || interior->classification != StabilityClass::Saddle) return false;
    if (std::abs(interior->location.f1 - cs.f_star) > 1e-9 ||
        std::abs(interior->location.f2 - cs.f_star) > 1e-9)
      return false;

    int reached = 0;
    for (int i = 0; i < 100; ++i) {
      TwoLocusState s0{};
      for (;;) {
        s0 = {rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)};
        const double band = cs.exclude_main_diagonal
                                ? std::abs(s0.f1 - s0.f2)
                                : std::abs(s0.f1 + s0.f2 - 2.0 * cs.f_star);
        if (band >= 1e-3) break;
      }
      const auto traj = integrate_two_locus(cs.m, cs.r, s0, 0.01, 200.0);
      const auto& end = traj.states.back();
      const bool at_a = std::abs(end.f1 - cs.attractor_a.f1) < 1e-3 &&
                        std::abs(end.f2 - cs.attractor_a.f2) < 1e-3;
      const bool at_b = std::abs(end.f1 - cs.attractor_b.f1) < 1e-3 &&
                        std::abs(end.f2 - cs.attractor_b.f2) < 1e-3;
      if (at_a || at_b) ++reached;
    }
    if (reached < 99) return false;
  }
  return true;
}

// 7. Shared-locus stability rule under the replicator flow.
bool c7_single_locus_stability() {
  const auto stable = equilibrium_single(kCanonical, 5.0 / 12.0);
  if (!stable.f_star) return false;
  for (double f0 : {0.1, 0.9}) {
    const auto traj = integrate_single(kCanonical, 5.0 / 12.0, f0, 0.01, 200.0);
    if (std::abs(traj.freq.back() - *stable.f_star) >= 1e-6) return false;
  }
  const auto unstable = equilibrium_single(kPositive, 0.35);
  if (!unstable.f_star || unstable.stable) return false;
  const auto down = integrate_single(kPositive, 0.35, *unstable.f_star - 0.05, 0.01, 200.0);
  if (!(down.freq.back() < 1e-6)) return false;
  const auto up = integrate_single(kPositive, 0.35, *unstable.f_star + 0.05, 0.01, 200.0);
  return up.freq.back() > 1.0 - 1e-6;
}

// 8. Monte Carlo oracle agreement: 150 comparison cells at n = 1e5, at most
//    two beyond three standard errors.
bool c8_monte_carlo_grid() {
  const PayoffMatrix mats[] = {kCanonical, kAdditive, kPositive};
  const double levels[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  const std::size_t n = 100000;
  auto ok3 = [](const EstimateReport& rep, double closed) {
    return std::abs(rep.mean - closed) <= 3.0 * rep.std_error + 1e-12;
  };
  int bad_cells = 0;
  std::uint64_t cell = 0;
  for (const auto& m : mats) {
    for (double r : levels) {
      for (double f : levels) {
        const std::uint64_t seed = 909090 + cell++;
        const auto single = estimate_single_locus(m, PairingModel(r, f), n, seed);
        const auto w = fitness_single(m, KinContext(r, f));
        if (!ok3(single.cooperate, w.cooperate) || !ok3(single.defect, w.defect)) ++bad_cells;

        const auto roles = estimate_roles(m, r, f, n, seed);
        const auto i = inclusive_fitness_roles(m, r, f);
        if (!ok3(roles.cooperate, i.cooperate) || !ok3(roles.defect, i.defect)) ++bad_cells;
      }
    }
  }
  return bad_cells <= 2;
}

// 9. Match-engine exactness over the named strategies.
bool c9_match_engine() {
  const char* names[] = {"AllC", "AllD", "TFT", "Pavlov"};
  for (const char* a : names) {
    for (const char* b : names) {
      const auto out = play_match(named_strategy(a), named_strategy(b), kCanonical);
      if (out.cycle_start + out.cycle_length > 5) return false;
    }
  }
  const auto tft = play_match(named_strategy("TFT"), named_strategy("TFT"), kCanonical);
  if (tft.mean_payoffs.first != 3.0 || tft.mean_payoffs.second != 3.0) return false;
  const auto pav = play_match(named_strategy("Pavlov"), named_strategy("AllD"), kCanonical);
  return pav.mean_payoffs.first == 0.5 && pav.mean_payoffs.second == 3.0;
}

}  // namespace

int main() {
  criterion(1, "shared-locus mixed equilibrium: f* = 3/7 at r = 5/12, stable (1e-12)",
            c1_mixed_equilibrium());
  criterion(2, "threshold endpoints: single (1/3, 1/2), roles (1/4, 2/3) (1e-12)",
            c2_threshold_endpoints());
  criterion(3, "donation-game realisability per taxon + exact Hawk-Dove synergy, 0 violations",
            c3_realisability_suite());
  criterion(4, "decomposed inclusive-fitness identity on 10x10x5 grid (1e-12)",
            c4_identity_grid());
  criterion(5, "role-separated equilibrium contract on 50 random systems (1e-10 gap, 1e-9 root)",
            c5_roles_equilibrium_contract());
  criterion(6, "two-locus phase structure: saddles, attractor pairs, 99/100 basins",
            c6_phase_structure());
  criterion(7, "shared-locus stability rule under replicator flow (1e-6 terminal)",
            c7_single_locus_stability());
  criterion(8, "Monte Carlo oracle agreement: 150 cells at n=1e5, at most 2 beyond 3 sigma",
            c8_monte_carlo_grid());
  criterion(9, "match engine exactness for the named strategies", c9_match_engine());

  if (g_failures == 0)
    std::printf("acceptance: all 9 criteria passed\n");
  else
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return g_failures;
}
