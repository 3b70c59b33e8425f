#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "abm.hpp"
#include "dynamics.hpp"
#include "game.hpp"
#include "kin.hpp"
#include "strategy.hpp"

namespace dyad {

using nlohmann::json;

// %.17g: exact round-trip for doubles, '.' separator, no grouping.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Run configuration shared by the command-line surface. Field names are the
/// wire format of scenario documents; unknown keys are rejected on load.
struct Scenario {
  std::optional<PayoffMatrix> payoffs;
  std::optional<double> r;
  std::optional<std::string> mode;  // "single" | "roles"
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<int> grid_n;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> size;
  std::optional<std::uint64_t> generations;
  std::optional<std::uint64_t> seed;
};

inline PayoffMatrix payoffs_from_json(const json& j) {
  if (j.is_string()) return parse_payoffs(j.get<std::string>());
  if (j.is_array() && j.size() == 4 && j[0].is_number() && j[1].is_number() &&
      j[2].is_number() && j[3].is_number()) {
    PayoffMatrix m{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                   j[3].get<double>()};
    if (!m.finite()) throw std::invalid_argument("payoffs must be finite");
    return m;
  }
  throw std::invalid_argument("payoffs must be \"T,R,P,S\" or a 4-element number array");
}

inline Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario document must be a JSON object");
  Scenario sc;
  for (const auto& [key, value] : j.items()) {
    if (key == "payoffs") {
      sc.payoffs = payoffs_from_json(value);
    } else if (key == "r") {
      sc.r = value.get<double>();
      detail::require_unit(*sc.r, "relatedness");
    } else if (key == "mode") {
      sc.mode = value.get<std::string>();
      selection_mode_from_string(*sc.mode);  // validates
    } else if (key == "dt") {
      sc.dt = value.get<double>();
      if (!(*sc.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    } else if (key == "t_end") {
      sc.t_end = value.get<double>();
      if (!(*sc.t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
    } else if (key == "grid_n") {
      sc.grid_n = value.get<int>();
      if (*sc.grid_n < 2) throw std::invalid_argument("grid_n must be >= 2");
    } else if (key == "n") {
      sc.n = value.get<std::uint64_t>();
      if (*sc.n < 1) throw std::invalid_argument("n must be >= 1");
    } else if (key == "size") {
      sc.size = value.get<std::uint64_t>();
      if (*sc.size < 2) throw std::invalid_argument("size must be >= 2");
    } else if (key == "generations") {
      sc.generations = value.get<std::uint64_t>();
    } else if (key == "seed") {
      sc.seed = value.get<std::uint64_t>();
    } else {
      throw std::invalid_argument("unknown scenario key '" + key + "'");
    }
  }
  return sc;
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("scenario file '" + path + "' is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

inline json scenario_to_json(const Scenario& sc) {
  json j = json::object();
  if (sc.payoffs) j["payoffs"] = {sc.payoffs->t, sc.payoffs->r, sc.payoffs->p, sc.payoffs->s};
  if (sc.r) j["r"] = *sc.r;
  if (sc.mode) j["mode"] = *sc.mode;
  if (sc.dt) j["dt"] = *sc.dt;
  if (sc.t_end) j["t_end"] = *sc.t_end;
  if (sc.grid_n) j["grid_n"] = *sc.grid_n;
  if (sc.n) j["n"] = *sc.n;
  if (sc.size) j["size"] = *sc.size;
  if (sc.generations) j["generations"] = *sc.generations;
  if (sc.seed) j["seed"] = *sc.seed;
  return j;
}

inline json to_json(const DonationDecomposition& dec) {
  return {{"b", dec.b}, {"c", dec.c}, {"d", dec.d}};
}

inline json to_json(const EquilibriumReport& rep) {
  json j{{"f_star", nullptr},
         {"stable", rep.stable},
         {"interval_lo", rep.interval_lo},
         {"interval_hi", rep.interval_hi}};
  if (rep.f_star) j["f_star"] = *rep.f_star;
  if (rep.degenerate_denominator) j["degenerate_denominator"] = true;
  return j;
}

inline json to_json(const FixedPointReport& fp) {
  return {{"location", {fp.location.f1, fp.location.f2}},
          {"eigenvalues",
           {{fp.eig1.real(), fp.eig1.imag()}, {fp.eig2.real(), fp.eig2.imag()}}},
          {"class", to_string(fp.classification)}};
}

inline json estimate_to_json(const EstimateReport& rep, double closed_form) {
  const double diff = rep.mean - closed_form;
  json j{{"mean", rep.mean},
         {"std_error", rep.std_error},
         {"n", rep.samples},
         {"seed", rep.seed},
         {"closed_form", closed_form}};
  if (rep.std_error > 0.0)
    j["z_score"] = diff / rep.std_error;
  else if (diff == 0.0)
    j["z_score"] = 0.0;
  else
    j["z_score"] = nullptr;
  return j;
}

inline json to_json(const MatchOutcome& out) {
  json transcript = json::array();
  for (const auto& [a1, a2] : out.transcript)
    transcript.push_back(std::string{to_char(a1), to_char(a2)});
  return {{"transcript", transcript},
          {"cycle_start", out.cycle_start},
          {"cycle_length", out.cycle_length},
          {"mean_payoffs", {out.mean_payoffs.first, out.mean_payoffs.second}}};
}

// --- CSV emission (metadata lines prefixed '#', then a mandatory header) ---

inline void csv_metadata(std::ostream& os, const json& meta) {
  for (const auto& [key, value] : meta.items())
    os << "# " << key << "=" << (value.is_string() ? value.get<std::string>() : value.dump())
       << "\n";
}

inline void write_threshold_curve_csv(std::ostream& os, const ThresholdCurve& curve,
                                      const json& meta) {
  csv_metadata(os, meta);
  os << "f_c,r_prime\n";
  for (const auto& [f, rp] : curve.samples)
    os << fmt_double(f) << "," << fmt_double(rp) << "\n";
}

inline void write_vector_field_csv(std::ostream& os, const std::vector<VectorFieldSample>& field,
                                   const json& meta) {
  csv_metadata(os, meta);
  os << "f1,f2,df1,df2\n";
  for (const auto& s : field)
    os << fmt_double(s.state.f1) << "," << fmt_double(s.state.f2) << ","
       << fmt_double(s.rates.df1) << "," << fmt_double(s.rates.df2) << "\n";
}

inline void write_trajectory_csv(std::ostream& os, const SingleTrajectory& traj,
                                 const json& meta) {
  csv_metadata(os, meta);
  os << "t,f1\n";
  for (std::size_t i = 0; i < traj.time.size(); ++i)
    os << fmt_double(traj.time[i]) << "," << fmt_double(traj.freq[i]) << "\n";
}

inline void write_trajectory_csv(std::ostream& os, const TwoLocusTrajectory& traj,
                                 const json& meta) {
  csv_metadata(os, meta);
  os << "t,f1,f2\n";
  for (std::size_t i = 0; i < traj.time.size(); ++i)
    os << fmt_double(traj.time[i]) << "," << fmt_double(traj.states[i].f1) << ","
       << fmt_double(traj.states[i].f2) << "\n";
}

inline void write_series_csv(std::ostream& os, const EvolutionSeries& series, const json& meta) {
  csv_metadata(os, meta);
  const bool roles = !series.f2.empty();
  os << (roles ? "generation,f1,f2,seed\n" : "generation,f1,seed\n");
  for (std::size_t g = 0; g < series.f1.size(); ++g) {
    os << g << "," << fmt_double(series.f1[g]);
    if (roles) os << "," << fmt_double(series.f2[g]);
    os << "," << series.seed << "\n";
  }
}

}  // namespace dyad
