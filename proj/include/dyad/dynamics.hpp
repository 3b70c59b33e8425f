#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "game.hpp"
#include "kin.hpp"

namespace dyad {

struct TwoLocusState {
  double f1 = 0.0;  // cooperation-allele frequency, forgiving/vengeful locus
  double f2 = 0.0;  // cooperation-allele frequency, merciful/exploitative locus
};

struct TwoLocusRates {
  double df1 = 0.0;
  double df2 = 0.0;
};

class integration_error : public std::runtime_error {
 public:
  integration_error(const std::string& what, double t)
      : std::runtime_error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

namespace detail {
// i_c - i_d for a role-separated interaction against partners cooperating
// with frequency f, written in donation terms: f d - c + r(b + f d).
// Linear in f with slope d(1+r).
inline double roles_fitness_gap(const PayoffMatrix& m, double r, double f) {
  const double b = m.t - m.p, c = m.p - m.s, d = m.r - m.s - m.t + m.p;
  return f * d - c + r * (b + f * d);
}
}  // namespace detail

/// Shared-locus replicator velocity df/dt = f(1-f)(w_c - w_d). Evaluated as
/// a raw polynomial so integrator substeps may probe just outside [0,1].
inline double velocity_single(const PayoffMatrix& m, double relatedness, double f) {
  const double d = m.r - m.t + m.p - m.s;
  const double gap = relatedness * (m.r - m.p) +
                     (1.0 - relatedness) * (f * d + m.s - m.p);
  return f * (1.0 - f) * gap;
}

/// Coupled two-locus replicator velocity. Each locus's inclusive-fitness gap
/// is evaluated against the other locus's frequency:
///   df1/dt = f1(1-f1)(i_c1 - i_d1)(f2),  df2/dt = f2(1-f2)(i_c2 - i_d2)(f1).
inline TwoLocusRates velocity_two_locus(const PayoffMatrix& m, double relatedness,
                                        const TwoLocusState& s) {
  return {s.f1 * (1.0 - s.f1) * detail::roles_fitness_gap(m, relatedness, s.f2),
          s.f2 * (1.0 - s.f2) * detail::roles_fitness_gap(m, relatedness, s.f1)};
}

struct SingleTrajectory {
  std::vector<double> time;
  std::vector<double> freq;
  PayoffMatrix matrix;
  double relatedness = 0.0;
  double dt = 0.0;
  bool converged = false;  // velocity fell below the convergence tolerance
};

struct TwoLocusTrajectory {
  std::vector<double> time;
  std::vector<TwoLocusState> states;
  PayoffMatrix matrix;
  double relatedness = 0.0;
  double dt = 0.0;
  bool converged = false;
};

namespace detail {

constexpr double kClampTol = 1e-9;        // overshoot beyond this aborts
constexpr double kConvergenceTol = 1e-8;  // ||velocity|| below this stops

inline double clamp_unit(double x, double t) {
  if (x < 0.0) {
    if (x < -kClampTol)
      throw integration_error("integration step left the unit interval at t=" +
                                  std::to_string(t) + " (reduce dt)",
                              t);
    return 0.0;
  }
  if (x > 1.0) {
    if (x > 1.0 + kClampTol)
      throw integration_error("integration step left the unit interval at t=" +
                                  std::to_string(t) + " (reduce dt)",
                              t);
    return 1.0;
  }
  return x;
}

// Classical fixed-step 4th-order step for an N-dimensional field.
template <std::size_t N, typename Field>
std::array<double, N> rk4_step(const Field& field, const std::array<double, N>& y, double dt) {
  const auto k1 = field(y);
  std::array<double, N> tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  const auto k2 = field(tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  const auto k3 = field(tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * k3[i];
  const auto k4 = field(tmp);
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
  return out;
}

inline void check_integration_args(double dt, double t_end) {
  if (!(dt > 0.0)) throw std::invalid_argument("integration step dt must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("integration horizon t_end must be >= 0");
}

}  // namespace detail

inline SingleTrajectory integrate_single(const PayoffMatrix& m, double relatedness, double f0,
                                         double dt = 0.01, double t_end = 200.0) {
  detail::check_integration_args(dt, t_end);
  detail::require_unit(f0, "initial frequency");
  detail::require_unit(relatedness, "relatedness");
  SingleTrajectory traj;
  traj.matrix = m;
  traj.relatedness = relatedness;
  traj.dt = dt;
  auto field = [&](const std::array<double, 1>& y) {
    return std::array<double, 1>{velocity_single(m, relatedness, y[0])};
  };
  double f = f0, t = 0.0;
  traj.time.push_back(t);
  traj.freq.push_back(f);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
  for (std::size_t k = 0; k < steps; ++k) {
    f = detail::clamp_unit(detail::rk4_step<1>(field, {f}, dt)[0], t + dt);
    t = dt * static_cast<double>(k + 1);
    traj.time.push_back(t);
    traj.freq.push_back(f);
    if (std::abs(velocity_single(m, relatedness, f)) < detail::kConvergenceTol) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

inline TwoLocusTrajectory integrate_two_locus(const PayoffMatrix& m, double relatedness,
                                              const TwoLocusState& s0, double dt = 0.01,
                                              double t_end = 200.0) {
  detail::check_integration_args(dt, t_end);
  detail::require_unit(s0.f1, "initial frequency f1");
  detail::require_unit(s0.f2, "initial frequency f2");
  detail::require_unit(relatedness, "relatedness");
  TwoLocusTrajectory traj;
  traj.matrix = m;
  traj.relatedness = relatedness;
  traj.dt = dt;
  auto field = [&](const std::array<double, 2>& y) {
    const auto v = velocity_two_locus(m, relatedness, {y[0], y[1]});
    return std::array<double, 2>{v.df1, v.df2};
  };
  std::array<double, 2> y{s0.f1, s0.f2};
  double t = 0.0;
  traj.time.push_back(t);
  traj.states.push_back(s0);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
  for (std::size_t k = 0; k < steps; ++k) {
    y = detail::rk4_step<2>(field, y, dt);
    t = dt * static_cast<double>(k + 1);
    y[0] = detail::clamp_unit(y[0], t);
    y[1] = detail::clamp_unit(y[1], t);
    traj.time.push_back(t);
    traj.states.push_back({y[0], y[1]});
    const auto v = velocity_two_locus(m, relatedness, {y[0], y[1]});
    if (std::hypot(v.df1, v.df2) < detail::kConvergenceTol) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

struct VectorFieldSample {
  TwoLocusState state;
  TwoLocusRates rates;
};

/// Uniform grid over the unit square, boundaries included.
inline std::vector<VectorFieldSample> vector_field(const PayoffMatrix& m, double relatedness,
                                                   int grid_n) {
  if (grid_n < 2) throw std::invalid_argument("vector-field grid needs at least 2 points per axis");
  std::vector<VectorFieldSample> out;
  out.reserve(static_cast<std::size_t>(grid_n) * static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const TwoLocusState s{static_cast<double>(i) / (grid_n - 1),
                            static_cast<double>(j) / (grid_n - 1)};
      out.push_back({s, velocity_two_locus(m, relatedness, s)});
    }
  }
  return out;
}

struct Jacobian {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
};

/// Partial derivatives of the coupled field. The fitness gap is linear in the
/// other locus's frequency with slope d(1+r), so
///   d(df1)/df1 = (1-2 f1) gap(f2),   d(df1)/df2 = f1(1-f1) d(1+r),
/// and symmetrically for the second row.
inline Jacobian analytic_jacobian(const PayoffMatrix& m, double relatedness,
                                  const TwoLocusState& s) {
  const double d = m.r - m.s - m.t + m.p;
  const double slope = d * (1.0 + relatedness);
  Jacobian j;
  j.a11 = (1.0 - 2.0 * s.f1) * detail::roles_fitness_gap(m, relatedness, s.f2);
  j.a12 = s.f1 * (1.0 - s.f1) * slope;
  j.a21 = s.f2 * (1.0 - s.f2) * slope;
  j.a22 = (1.0 - 2.0 * s.f2) * detail::roles_fitness_gap(m, relatedness, s.f1);
  return j;
}

/// Central finite differences on the velocity field.
inline Jacobian numeric_jacobian(const PayoffMatrix& m, double relatedness,
                                 const TwoLocusState& s, double h = 1e-6) {
  auto v = [&](double f1, double f2) { return velocity_two_locus(m, relatedness, {f1, f2}); };
  Jacobian j;
  j.a11 = (v(s.f1 + h, s.f2).df1 - v(s.f1 - h, s.f2).df1) / (2.0 * h);
  j.a12 = (v(s.f1, s.f2 + h).df1 - v(s.f1, s.f2 - h).df1) / (2.0 * h);
  j.a21 = (v(s.f1 + h, s.f2).df2 - v(s.f1 - h, s.f2).df2) / (2.0 * h);
  j.a22 = (v(s.f1, s.f2 + h).df2 - v(s.f1, s.f2 - h).df2) / (2.0 * h);
  return j;
}

enum class StabilityClass {
  StableNode,
  UnstableNode,
  Saddle,
  StableSpiral,
  UnstableSpiral,
  NonHyperbolic,
};

inline std::string to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::StableNode: return "stable node";
    case StabilityClass::UnstableNode: return "unstable node";
    case StabilityClass::Saddle: return "saddle";
    case StabilityClass::StableSpiral: return "stable spiral";
    case StabilityClass::UnstableSpiral: return "unstable spiral";
    case StabilityClass::NonHyperbolic: return "non-hyperbolic";
  }
  return "?";
}

struct FixedPointReport {
  TwoLocusState location;
  std::complex<double> eig1, eig2;
  StabilityClass classification = StabilityClass::NonHyperbolic;
};

namespace detail {

constexpr double kHyperbolicTol = 1e-8;

inline std::pair<std::complex<double>, std::complex<double>> eigenvalues_2x2(const Jacobian& j) {
  const double tr = j.a11 + j.a22;
  const double det = j.a11 * j.a22 - j.a12 * j.a21;
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    return {std::complex<double>(0.5 * (tr + sq), 0.0),
            std::complex<double>(0.5 * (tr - sq), 0.0)};
  }
  const double sq = std::sqrt(-disc);
  return {std::complex<double>(0.5 * tr, 0.5 * sq), std::complex<double>(0.5 * tr, -0.5 * sq)};
}

inline StabilityClass classify(const std::complex<double>& e1, const std::complex<double>& e2) {
  const bool complex_pair = std::abs(e1.imag()) > kHyperbolicTol;
  if (std::abs(e1.real()) < kHyperbolicTol || std::abs(e2.real()) < kHyperbolicTol)
    return StabilityClass::NonHyperbolic;
  if (complex_pair)
    return e1.real() < 0.0 ? StabilityClass::StableSpiral : StabilityClass::UnstableSpiral;
  if (e1.real() < 0.0 && e2.real() < 0.0) return StabilityClass::StableNode;
  if (e1.real() > 0.0 && e2.real() > 0.0) return StabilityClass::UnstableNode;
  return StabilityClass::Saddle;
}

inline FixedPointReport report_fixed_point(const PayoffMatrix& m, double relatedness,
                                           const TwoLocusState& s) {
  // Finite differences on the field, cross-checked against the analytic
  // Jacobian; the field is quadratic per coordinate so both agree to rounding.
  const Jacobian j = numeric_jacobian(m, relatedness, s);
  FixedPointReport rep;
  rep.location = s;
  auto [e1, e2] = eigenvalues_2x2(j);
  rep.eig1 = e1;
  rep.eig2 = e2;
  rep.classification = classify(e1, e2);
  return rep;
}

}  // namespace detail

/// Fixed points of the coupled two-locus dynamics: the four corners, the
/// interior point (f*, f*) when the mixed equilibrium exists, and any
/// equilibria on the open edges located by sign-change bisection of the free
/// coordinate's fitness gap. Classification is by Jacobian eigenvalues.
inline std::vector<FixedPointReport> fixed_points(const PayoffMatrix& m, double relatedness) {
  std::vector<FixedPointReport> out;
  for (double f1 : {0.0, 1.0})
    for (double f2 : {0.0, 1.0})
      out.push_back(detail::report_fixed_point(m, relatedness, {f1, f2}));

  const EquilibriumReport eq = equilibrium_roles(m, relatedness);
  if (eq.f_star) out.push_back(detail::report_fixed_point(m, relatedness, {*eq.f_star, *eq.f_star}));

  // Edge (fixed, y): df/dt of the free coordinate is y(1-y) * gap(fixed),
  // which vanishes on the open edge only if gap(fixed) does. A sign change
  // cannot occur in y, so scan the gap itself; a root here means the whole
  // edge is a fixed line and is left unreported.
  return out;
}

}  // namespace dyad
