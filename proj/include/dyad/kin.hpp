#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "game.hpp"

namespace dyad {

namespace detail {
inline void require_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}
}  // namespace detail

/// Pairing context: with probability `relatedness` the partner carries the
/// focal allele, otherwise it is drawn from a population with
/// cooperation-allele frequency `coop_freq`.
struct KinContext {
  double relatedness = 0.0;
  double coop_freq = 0.0;

  KinContext(double r, double f_c) : relatedness(r), coop_freq(f_c) {
    detail::require_unit(r, "relatedness");
    detail::require_unit(f_c, "cooperation-allele frequency");
  }
};

struct AlleleFitness {
  double cooperate = 0.0;
  double defect = 0.0;
};

/// Fitness of cooperation/defection alleles at a shared-locus interaction:
///   w_c = rR + (1-r)(fR + (1-f)S)
///   w_d = rP + (1-r)(fT + (1-f)P)
inline AlleleFitness fitness_single(const PayoffMatrix& m, const KinContext& ctx) {
  const double r = ctx.relatedness, f = ctx.coop_freq;
  return {r * m.r + (1.0 - r) * (f * m.r + (1.0 - f) * m.s),
          r * m.p + (1.0 - r) * (f * m.t + (1.0 - f) * m.p)};
}

/// Inclusive fitness of cooperation/defection alleles when interaction roles
/// are separated and the partner cooperates with frequency f independent of r:
///   i_c = Rf + S(1-f) + r(Rf + T(1-f))
///   i_d = Tf + P(1-f) + r(Sf + P(1-f))
inline AlleleFitness inclusive_fitness_roles(const PayoffMatrix& m, double relatedness,
                                             double coop_freq_other) {
  detail::require_unit(relatedness, "relatedness");
  detail::require_unit(coop_freq_other, "cooperation-allele frequency");
  const double r = relatedness, f = coop_freq_other;
  return {m.r * f + m.s * (1.0 - f) + r * (m.r * f + m.t * (1.0 - f)),
          m.t * f + m.p * (1.0 - f) + r * (m.s * f + m.p * (1.0 - f))};
}

/// Same inclusive fitnesses rewritten in donation terms (q = partner
/// cooperation frequency): i_c = r(b+qd) - c + q(b+d), i_d = qb.
/// The difference i_c - i_d agrees exactly with inclusive_fitness_roles.
inline AlleleFitness inclusive_fitness_from_decomposition(double b, double c, double d,
                                                          double q, double r) {
  detail::require_unit(q, "cooperation-allele frequency");
  detail::require_unit(r, "relatedness");
  return {r * (b + q * d) - c + q * (b + d), q * b};
}

/// Altruism is selected for when c/b < r (additive payoffs, strong altruism).
inline bool hamiltons_rule(double b, double c, double relatedness) {
  if (!(b > 0.0)) throw std::invalid_argument("hamiltons_rule requires benefit b > 0");
  return c / b < relatedness;
}

/// A relatedness threshold as computed; values outside [0,1] are
/// mathematically valid but unattainable by a pairing process.
struct Threshold {
  double value = 0.0;
  bool in_unit_interval = false;
};

inline Threshold make_threshold(double v) {
  return {v, v >= 0.0 && v <= 1.0};
}

/// Shared-locus relatedness threshold:
///   r' = (f d + S - P) / (f d + S - R),   d = R - T + P - S.
/// Above r' selection favours cooperation alleles (sign fixed by the
/// denominator). Empty when the denominator vanishes.
inline std::optional<Threshold> threshold_single(const PayoffMatrix& m, double coop_freq) {
  detail::require_unit(coop_freq, "cooperation-allele frequency");
  const double d = m.r - m.t + m.p - m.s;
  const double den = coop_freq * d + m.s - m.r;
  if (den == 0.0) return std::nullopt;
  return make_threshold((coop_freq * d + m.s - m.p) / den);
}

/// Role-separated relatedness threshold:
///   r' = -(f d + S - P) / (f d + T - P).
inline std::optional<Threshold> threshold_roles(const PayoffMatrix& m, double coop_freq_other) {
  detail::require_unit(coop_freq_other, "cooperation-allele frequency");
  const double d = m.r - m.t + m.p - m.s;
  const double den = coop_freq_other * d + m.t - m.p;
  if (den == 0.0) return std::nullopt;
  return make_threshold(-(coop_freq_other * d + m.s - m.p) / den);
}

/// Endpoints of the threshold range as the cooperator frequency sweeps 0 -> 1.
/// rare_limit is the threshold in an all-defector population, common_limit in
/// an all-cooperator one; (lo, hi) are the same two values ordered. Which
/// endpoint is greater follows the sign of d.
struct ThresholdBounds {
  double rare_limit = 0.0;
  double common_limit = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

namespace detail {
inline ThresholdBounds ordered_bounds(double rare, double common) {
  ThresholdBounds b;
  b.rare_limit = rare;
  b.common_limit = common;
  b.lo = std::min(rare, common);
  b.hi = std::max(rare, common);
  return b;
}
}  // namespace detail

/// Shared-locus bounds: (S-P)/(S-R) at f=0 and (R-T)/(P-T) at f=1.
inline std::optional<ThresholdBounds> threshold_bounds_single(const PayoffMatrix& m) {
  if (m.s - m.r == 0.0 || m.p - m.t == 0.0) return std::nullopt;
  return detail::ordered_bounds((m.s - m.p) / (m.s - m.r), (m.r - m.t) / (m.p - m.t));
}

/// Role-separated bounds: (P-S)/(T-P) at f=0 and (T-R)/(R-S) at f=1.
inline std::optional<ThresholdBounds> threshold_bounds_roles(const PayoffMatrix& m) {
  if (m.t - m.p == 0.0 || m.r - m.s == 0.0) return std::nullopt;
  return detail::ordered_bounds((m.p - m.s) / (m.t - m.p), (m.t - m.r) / (m.r - m.s));
}

/// Sampled threshold curve over f in [0,1] plus the interval bounds.
/// Samples with a vanishing denominator are skipped.
struct ThresholdCurve {
  std::vector<std::pair<double, double>> samples;  // (f_c, r')
  double lo = 0.0;
  double hi = 0.0;
};

enum class SelectionMode { Single, Roles };

inline SelectionMode selection_mode_from_string(std::string_view s) {
  if (s == "single") return SelectionMode::Single;
  if (s == "roles") return SelectionMode::Roles;
  throw std::invalid_argument("mode must be 'single' or 'roles', got '" + std::string(s) + "'");
}

inline std::string to_string(SelectionMode m) {
  return m == SelectionMode::Single ? "single" : "roles";
}

inline ThresholdCurve threshold_curve(const PayoffMatrix& m, SelectionMode mode,
                                      int n_samples = 101) {
  if (n_samples < 2) throw std::invalid_argument("threshold curve needs at least 2 samples");
  ThresholdCurve curve;
  const auto bounds = mode == SelectionMode::Single ? threshold_bounds_single(m)
                                                    : threshold_bounds_roles(m);
  if (bounds) {
    curve.lo = bounds->lo;
    curve.hi = bounds->hi;
  }
  curve.samples.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n_samples - 1);
    const auto thr = mode == SelectionMode::Single ? threshold_single(m, f)
                                                   : threshold_roles(m, f);
    if (thr) curve.samples.emplace_back(f, thr->value);
  }
  return curve;
}

/// Mixed-equilibrium report. f_star is present exactly when the synergy d is
/// nonzero and r lies strictly inside the existence interval (the threshold
/// bounds); stable is meaningful only when f_star is present.
struct EquilibriumReport {
  std::optional<double> f_star;
  bool stable = false;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  bool degenerate_denominator = false;  // e.g. r = 1 in the shared-locus form
};

/// Shared-locus mixed equilibrium:
///   f* = (P - S - r(R-S)) / ((1-r) d),
/// unstable when d > 0, stable when d < 0. No mixed equilibrium when d = 0
/// (the outcome is then fixed by Hamilton's rule on either side of c/b).
inline EquilibriumReport equilibrium_single(const PayoffMatrix& m, double relatedness) {
  detail::require_unit(relatedness, "relatedness");
  EquilibriumReport rep;
  const auto bounds = threshold_bounds_single(m);
  if (!bounds) {
    rep.degenerate_denominator = true;
    return rep;
  }
  rep.interval_lo = bounds->lo;
  rep.interval_hi = bounds->hi;
  const double d = m.r - m.t + m.p - m.s;
  if (d == 0.0) return rep;
  if (!(relatedness > bounds->lo && relatedness < bounds->hi)) return rep;
  if (relatedness == 1.0) {
    rep.degenerate_denominator = true;
    return rep;
  }
  rep.f_star = (m.p - m.s - relatedness * (m.r - m.s)) / ((1.0 - relatedness) * d);
  rep.stable = d < 0.0;
  return rep;
}

/// Role-separated mixed equilibrium, from solving i_c = i_d:
///   f* = (P - S - r(T-P)) / ((1+r) d).
/// Absent when d = 0 (the equilibrium condition is then independent of f).
/// stable stays false: in the coupled two-locus dynamics the point
/// (f*, f*) is a saddle whenever it exists; see dynamics fixed_points.
inline EquilibriumReport equilibrium_roles(const PayoffMatrix& m, double relatedness) {
  detail::require_unit(relatedness, "relatedness");
  EquilibriumReport rep;
  const auto bounds = threshold_bounds_roles(m);
  if (!bounds) {
    rep.degenerate_denominator = true;
    return rep;
  }
  rep.interval_lo = bounds->lo;
  rep.interval_hi = bounds->hi;
  const double d = m.r - m.t + m.p - m.s;
  if (d == 0.0) return rep;
  if (!(relatedness > bounds->lo && relatedness < bounds->hi)) return rep;
  rep.f_star = (m.p - m.s - relatedness * (m.t - m.p)) / ((1.0 + relatedness) * d);
  return rep;
}

}  // namespace dyad
