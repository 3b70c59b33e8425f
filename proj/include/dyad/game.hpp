#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dyad {

enum class Action : std::uint8_t { Cooperate, Defect };

inline constexpr Action opposite(Action a) {
  return a == Action::Cooperate ? Action::Defect : Action::Cooperate;
}

inline constexpr char to_char(Action a) {
  return a == Action::Cooperate ? 'C' : 'D';
}

inline Action action_from_char(char c) {
  if (c == 'C' || c == 'c') return Action::Cooperate;
  if (c == 'D' || c == 'd') return Action::Defect;
  throw std::invalid_argument(std::string("action must be 'C' or 'D', got '") + c + "'");
}

/// Symmetric 2x2 game in fitness units. Row player's payoffs:
///   t = Defect-vs-Cooperate, r = mutual cooperation,
///   p = mutual defection,    s = Cooperate-vs-Defect.
struct PayoffMatrix {
  double t = 0.0;
  double r = 0.0;
  double p = 0.0;
  double s = 0.0;

  constexpr double payoff(Action own, Action opp) const {
    if (own == Action::Cooperate) return opp == Action::Cooperate ? r : s;
    return opp == Action::Cooperate ? t : p;
  }

  bool finite() const {
    return std::isfinite(t) && std::isfinite(r) && std::isfinite(p) && std::isfinite(s);
  }

  double max_abs() const {
    return std::max(std::max(std::abs(t), std::abs(r)), std::max(std::abs(p), std::abs(s)));
  }

  std::array<double, 4> as_array() const { return {t, r, p, s}; }

  // T=5, R=3, P=1, S=0: the traditional cardinal Prisoner's Dilemma.
  static constexpr PayoffMatrix canonical_pd() { return {5.0, 3.0, 1.0, 0.0}; }
  // T=6, R=4, P=2, S=0: a Prisoner's Dilemma with additive payoffs (d = 0).
  static constexpr PayoffMatrix additive_pd() { return {6.0, 4.0, 2.0, 0.0}; }
  // T=6, R=5, P=2, S=0: a Prisoner's Dilemma with positive synergy (d = +1).
  static constexpr PayoffMatrix positive_synergy_pd() { return {6.0, 5.0, 2.0, 0.0}; }
};

inline bool operator==(const PayoffMatrix& a, const PayoffMatrix& b) {
  return a.t == b.t && a.r == b.r && a.p == b.p && a.s == b.s;
}

/// Parses "T,R,P,S" (comma-separated decimals).
inline PayoffMatrix parse_payoffs(std::string_view text) {
  std::array<double, 4> v{};
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    std::size_t comma = text.find(',', pos);
    std::string_view tok = (comma == std::string_view::npos)
                               ? text.substr(pos)
                               : text.substr(pos, comma - pos);
    if (i < 3 && comma == std::string_view::npos)
      throw std::invalid_argument("payoffs must be an ordered quadruple T,R,P,S");
    if (i == 3 && comma != std::string_view::npos)
      throw std::invalid_argument("payoffs must have exactly four components T,R,P,S");
    try {
      std::size_t used = 0;
      v[i] = std::stod(std::string(tok), &used);
      while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
      if (used != tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("payoff component '" + std::string(tok) + "' is not a decimal number");
    }
    pos = comma + 1;
  }
  PayoffMatrix m{v[0], v[1], v[2], v[3]};
  if (!m.finite()) throw std::invalid_argument("payoffs must be finite");
  return m;
}

/// Donation-game reading of a matrix: altruism gives benefit b at cost c,
/// with synergy d when two altruists meet (deviation from additivity).
struct DonationDecomposition {
  double b = 0.0;  // benefit, T - P
  double c = 0.0;  // cost,    P - S
  double d = 0.0;  // synergy, R - S - T + P
};

inline DonationDecomposition decompose(const PayoffMatrix& m) {
  return {m.t - m.p, m.p - m.s, m.r - m.s - m.t + m.p};
}

/// Rebuilds the payoff matrix implied by (b, c, d) with the
/// mutual-defection baseline at 0: (T,R,P,S) = (b, b-c+d, 0, -c).
inline PayoffMatrix donation_matrix(const DonationDecomposition& dec) {
  return {dec.b, dec.b - dec.c + dec.d, 0.0, -dec.c};
}

enum class GameClass {
  PrisonersDilemma,
  Chicken,
  BattleOfSexes,
  Apology,
  Degenerate,
  OtherOrTrivial,
};

inline std::string to_string(GameClass g) {
  switch (g) {
    case GameClass::PrisonersDilemma: return "PrisonersDilemma";
    case GameClass::Chicken: return "Chicken";
    case GameClass::BattleOfSexes: return "BattleOfSexes";
    case GameClass::Apology: return "Apology";
    case GameClass::Degenerate: return "Degenerate";
    case GameClass::OtherOrTrivial: return "OtherOrTrivial";
  }
  return "?";
}

/// Ordinal taxonomy over the non-trivial symmetric 2x2 games.
/// Any tie is Degenerate; strict orderings not matching a named game
/// (including games with a mutually preferred outcome) are OtherOrTrivial.
inline GameClass classify_ordinal(const PayoffMatrix& m) {
  const auto v = m.as_array();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (v[i] == v[j]) return GameClass::Degenerate;
  const double t = m.t, r = m.r, p = m.p, s = m.s;
  if (t > r && r > p && p > s) return GameClass::PrisonersDilemma;
  if (t > r && r > s && s > p) return GameClass::Chicken;
  if (t > s && s > r && r > p) return GameClass::BattleOfSexes;
  if (s > t && t > r && r > p) return GameClass::Apology;
  return GameClass::OtherOrTrivial;
}

struct PdCheck {
  bool ok = false;
  std::vector<std::string> violations;  // names of failed inequalities
};

/// Full cardinal Prisoner's Dilemma check: T>R>P>S and T+S<2R.
inline PdCheck check_pd(const PayoffMatrix& m) {
  PdCheck out;
  if (!(m.t > m.r)) out.violations.push_back("T>R");
  if (!(m.r > m.p)) out.violations.push_back("R>P");
  if (!(m.p > m.s)) out.violations.push_back("P>S");
  if (!(m.t + m.s < 2.0 * m.r)) out.violations.push_back("T+S<2R");
  out.ok = out.violations.empty();
  return out;
}

struct AltruismMapping {
  Action altruist = Action::Cooperate;
  DonationDecomposition decomposition;
};

namespace detail {
// Relabels the matrix so that `altruist` plays the donor role of the
// donation game; decomposition is then read off in that orientation.
inline DonationDecomposition decompose_with_altruist(const PayoffMatrix& m, Action altruist) {
  if (altruist == Action::Cooperate) return decompose(m);
  const PayoffMatrix swapped{m.s, m.p, m.r, m.t};
  return decompose(swapped);
}
}  // namespace detail

/// Finds the action assignment (if any) under which the matrix realises the
/// donation game with strong altruism: positive cost c, positive benefit b,
/// and a pair of altruists strictly better off than a pair of non-altruists
/// (b - c + d > 0; for additive matrices this is exactly b > c).
/// At most one assignment can qualify.
inline std::optional<AltruismMapping> strong_altruism_map(const PayoffMatrix& m) {
  for (Action a : {Action::Cooperate, Action::Defect}) {
    const DonationDecomposition dec = detail::decompose_with_altruist(m, a);
    if (dec.b > 0.0 && dec.c > 0.0 && dec.b - dec.c + dec.d > 0.0)
      return AltruismMapping{a, dec};
  }
  return std::nullopt;
}

struct HawkDoveParams {
  double v = 0.0;       // resource value, > 0
  double c_cost = 0.0;  // contest cost, >= 0
};

/// Hawk-Dove with averaged payoffs, Dove mapped to Cooperate:
/// R = V/2, S = 0, T = V, P = (V-C)/2.
inline PayoffMatrix hawk_dove_matrix(const HawkDoveParams& hd) {
  if (!(hd.v > 0.0)) throw std::invalid_argument("hawk-dove resource value V must be > 0");
  if (!(hd.c_cost >= 0.0)) throw std::invalid_argument("hawk-dove contest cost C must be >= 0");
  return {hd.v, 0.5 * hd.v, 0.5 * (hd.v - hd.c_cost), 0.0};
}

enum class AdditivityClass { Additive, PositiveNonAdditive, NegativeNonAdditive };

inline std::string to_string(AdditivityClass a) {
  switch (a) {
    case AdditivityClass::Additive: return "additive";
    case AdditivityClass::PositiveNonAdditive: return "positive";
    case AdditivityClass::NegativeNonAdditive: return "negative";
  }
  return "?";
}

/// Classifies the synergy d against an absolute tolerance.
inline AdditivityClass synergy_class(const PayoffMatrix& m, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("additivity tolerance must be >= 0");
  const double d = decompose(m).d;
  if (std::abs(d) <= tol) return AdditivityClass::Additive;
  return d > 0.0 ? AdditivityClass::PositiveNonAdditive : AdditivityClass::NegativeNonAdditive;
}

// 1e-9 relative to the matrix scale (equivalent to 1e-9 after
// normalising to max |payoff| = 1).
inline double default_synergy_tolerance(const PayoffMatrix& m) {
  const double scale = m.max_abs();
  return 1e-9 * (scale > 0.0 ? scale : 1.0);
}

}  // namespace dyad
