#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "game.hpp"

namespace dyad {

/// Deterministic two-dimensional strategy over five loci: one action for the
/// first encounter and one per joint previous-round outcome (own, opponent).
struct Genome {
  Action initial = Action::Cooperate;  // friendly / suspicious
  Action on_cc = Action::Cooperate;    // constructive / destructive
  Action on_cd = Action::Cooperate;    // forgiving / vengeful
  Action on_dc = Action::Cooperate;    // merciful / exploitative
  Action on_dd = Action::Cooperate;    // dovish / hawkish

  Action next_action(Action own_last, Action opp_last) const {
    if (own_last == Action::Cooperate)
      return opp_last == Action::Cooperate ? on_cc : on_cd;
    return opp_last == Action::Cooperate ? on_dc : on_dd;
  }

  /// Locus order: initial, cc, cd, dc, dd — e.g. TFT = "CCDCD".
  std::string str() const {
    return {to_char(initial), to_char(on_cc), to_char(on_cd), to_char(on_dc), to_char(on_dd)};
  }

  static Genome from_string(std::string_view text) {
    if (text.size() != 5)
      throw std::invalid_argument("genome must be a 5-character string over {C,D}, got '" +
                                  std::string(text) + "'");
    return {action_from_char(text[0]), action_from_char(text[1]), action_from_char(text[2]),
            action_from_char(text[3]), action_from_char(text[4])};
  }
};

inline bool operator==(const Genome& a, const Genome& b) {
  return a.initial == b.initial && a.on_cc == b.on_cc && a.on_cd == b.on_cd &&
         a.on_dc == b.on_dc && a.on_dd == b.on_dd;
}

inline Genome named_strategy(std::string_view name) {
  const Action C = Action::Cooperate, D = Action::Defect;
  if (name == "AllC") return {C, C, C, C, C};
  if (name == "AllD") return {D, D, D, D, D};
  if (name == "TFT") return {C, C, D, C, D};     // copy opponent's last action
  if (name == "Pavlov") return {C, C, D, D, C};  // win-stay, lose-shift
  throw std::invalid_argument("unknown strategy name '" + std::string(name) +
                              "' (expected AllC, AllD, TFT or Pavlov)");
}

/// Exact playout of a deterministic match. The joint action has four possible
/// values, so play enters a cycle within at most five rounds.
struct MatchOutcome {
  std::vector<std::pair<Action, Action>> transcript;  // pre-period plus two full cycles
  std::size_t cycle_start = 0;
  std::size_t cycle_length = 1;
  std::pair<double, double> mean_payoffs{0.0, 0.0};  // long-run per-round average
};

inline MatchOutcome play_match(const Genome& g1, const Genome& g2, const PayoffMatrix& m) {
  auto joint_index = [](Action a1, Action a2) {
    return (a1 == Action::Defect ? 2 : 0) + (a2 == Action::Defect ? 1 : 0);
  };

  MatchOutcome out;
  int first_seen[4] = {-1, -1, -1, -1};
  Action a1 = g1.initial, a2 = g2.initial;
  std::vector<std::pair<Action, Action>> rounds;
  for (;;) {
    const int idx = joint_index(a1, a2);
    if (first_seen[idx] >= 0) {
      out.cycle_start = static_cast<std::size_t>(first_seen[idx]);
      out.cycle_length = rounds.size() - out.cycle_start;
      break;
    }
    first_seen[idx] = static_cast<int>(rounds.size());
    rounds.emplace_back(a1, a2);
    const Action n1 = g1.next_action(a1, a2);
    const Action n2 = g2.next_action(a2, a1);
    a1 = n1;
    a2 = n2;
  }

  double sum1 = 0.0, sum2 = 0.0;
  for (std::size_t i = out.cycle_start; i < rounds.size(); ++i) {
    sum1 += m.payoff(rounds[i].first, rounds[i].second);
    sum2 += m.payoff(rounds[i].second, rounds[i].first);
  }
  const double len = static_cast<double>(out.cycle_length);
  out.mean_payoffs = {sum1 / len, sum2 / len};

  // Transcript carries the pre-period and two full cycles so the
  // periodicity is visible in the data itself.
  out.transcript = rounds;
  for (std::size_t i = 0; i < out.cycle_length; ++i)
    out.transcript.push_back(rounds[out.cycle_start + i]);
  return out;
}

}  // namespace dyad
