// Command-line surface for the dyad toolkit: classification, thresholds,
// equilibria, replicator dynamics, match playouts and Monte Carlo checks for
// symmetric 2x2 games.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dyad/dyad.hpp"

namespace {

using dyad::json;

struct CommonFlags {
  std::string payoffs;
  double r = -1.0;
  std::string fc;
  std::string mode;
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  int grid = 0;
  double dt = 0.0;
  double t_end = 0.0;
  std::uint64_t size = 0;
  std::uint64_t generations = 0;
  std::string format;
  std::string out;
  std::string scenario_path;
};

constexpr double kDefaultDt = 0.01;
constexpr double kDefaultTEnd = 200.0;
constexpr int kDefaultGrid = 21;
constexpr int kDefaultCurveSamples = 101;
constexpr std::uint64_t kDefaultSamples = 100000;
constexpr std::uint64_t kDefaultPopulation = 10000;
constexpr std::uint64_t kDefaultGenerations = 400;
constexpr std::uint64_t kDefaultSeed = 1;

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--payoffs", f.payoffs, "payoff matrix as T,R,P,S");
  cmd->add_option("--r", f.r, "relatedness in [0,1]");
  cmd->add_option("--fc", f.fc, "cooperation-allele frequency (scalar, or f1,f2 in roles mode)");
  cmd->add_option("--mode", f.mode, "selection model: single | roles");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--n", f.n, "Monte Carlo sample count");
  cmd->add_option("--grid", f.grid, "grid points per axis / curve samples");
  cmd->add_option("--dt", f.dt, "integration step");
  cmd->add_option("--t-end", f.t_end, "integration horizon");
  cmd->add_option("--size", f.size, "population size");
  cmd->add_option("--generations", f.generations, "generations to evolve");
  cmd->add_option("--format", f.format, "output format: json | csv");
  cmd->add_option("--out", f.out, "write output to PATH instead of stdout");
  cmd->add_option("--scenario", f.scenario_path, "scenario document (JSON); flags override");
}

// Effective run parameters: defaults, overridden by the scenario document,
// overridden by explicit flags.
struct Resolved {
  dyad::Scenario sc;
  std::optional<double> fc1;
  std::optional<double> fc2;
  std::string format = "json";
  std::string out;
};

void parse_fc(const std::string& text, Resolved& rv) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) {
      rv.fc1 = std::stod(text);
    } else {
      rv.fc1 = std::stod(text.substr(0, comma));
      rv.fc2 = std::stod(text.substr(comma + 1));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("--fc must be a decimal or a pair f1,f2");
  }
  if (rv.fc1) dyad::detail::require_unit(*rv.fc1, "--fc");
  if (rv.fc2) dyad::detail::require_unit(*rv.fc2, "--fc");
}

Resolved resolve(const CLI::App* cmd, const CommonFlags& f) {
  Resolved rv;
  if (cmd->count("--scenario") > 0) rv.sc = dyad::load_scenario_file(f.scenario_path);

  if (cmd->count("--payoffs") > 0) rv.sc.payoffs = dyad::parse_payoffs(f.payoffs);
  if (cmd->count("--r") > 0) {
    dyad::detail::require_unit(f.r, "relatedness");
    rv.sc.r = f.r;
  }
  if (cmd->count("--mode") > 0) {
    dyad::selection_mode_from_string(f.mode);
    rv.sc.mode = f.mode;
  }
  if (cmd->count("--dt") > 0) {
    if (!(f.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    rv.sc.dt = f.dt;
  }
  if (cmd->count("--t-end") > 0) {
    if (!(f.t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
    rv.sc.t_end = f.t_end;
  }
  if (cmd->count("--grid") > 0) {
    if (f.grid < 2) throw std::invalid_argument("grid_n must be >= 2");
    rv.sc.grid_n = f.grid;
  }
  if (cmd->count("--n") > 0) {
    if (f.n < 1) throw std::invalid_argument("n must be >= 1");
    rv.sc.n = f.n;
  }
  if (cmd->count("--size") > 0) {
    if (f.size < 2) throw std::invalid_argument("size must be >= 2");
    rv.sc.size = f.size;
  }
  if (cmd->count("--generations") > 0) rv.sc.generations = f.generations;
  if (cmd->count("--seed") > 0) rv.sc.seed = f.seed;

  if (cmd->count("--fc") > 0) parse_fc(f.fc, rv);
  if (cmd->count("--format") > 0) {
    if (f.format != "json" && f.format != "csv")
      throw std::invalid_argument("--format must be json or csv");
    rv.format = f.format;
  }
  rv.out = f.out;
  return rv;
}

dyad::PayoffMatrix require_payoffs(const Resolved& rv) {
  if (!rv.sc.payoffs)
    throw std::invalid_argument("a payoff matrix is required (--payoffs T,R,P,S or --scenario)");
  return *rv.sc.payoffs;
}

double require_relatedness(const Resolved& rv) {
  if (!rv.sc.r) throw std::invalid_argument("relatedness is required (--r or --scenario)");
  return *rv.sc.r;
}

dyad::SelectionMode mode_or_single(const Resolved& rv) {
  return dyad::selection_mode_from_string(rv.sc.mode.value_or("single"));
}

void emit_text(const Resolved& rv, const std::string& text) {
  if (rv.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(rv.out);
  if (!file) throw std::invalid_argument("cannot open output file '" + rv.out + "'");
  file << text;
}

void emit_json(const Resolved& rv, json payload) {
  payload["scenario"] = dyad::scenario_to_json(rv.sc);
  emit_text(rv, payload.dump(2) + "\n");
}

json scenario_meta(const Resolved& rv) {
  json meta = json::object();
  meta["scenario"] = dyad::scenario_to_json(rv.sc).dump();
  return meta;
}

// ---- subcommand implementations ----

int run_classify(const Resolved& rv) {
  const auto m = require_payoffs(rv);
  const auto dec = dyad::decompose(m);
  const double tol = dyad::default_synergy_tolerance(m);
  const auto pd = dyad::check_pd(m);
  json out{{"command", "classify"},
           {"class", dyad::to_string(dyad::classify_ordinal(m))},
           {"synergy", dyad::to_string(dyad::synergy_class(m, tol))},
           {"synergy_tolerance", tol},
           {"decomposition", dyad::to_json(dec)},
           {"pd_check", {{"ok", pd.ok}, {"violations", pd.violations}}}};
  if (const auto alt = dyad::strong_altruism_map(m)) {
    out["strong_altruism"] = {{"altruist", std::string(1, dyad::to_char(alt->altruist))},
                              {"decomposition", dyad::to_json(alt->decomposition)}};
  } else {
    out["strong_altruism"] = nullptr;
  }
  emit_json(rv, std::move(out));
  return 0;
}

int run_decompose(const Resolved& rv) {
  const auto dec = dyad::decompose(require_payoffs(rv));
  emit_json(rv, json{{"command", "decompose"},
                     {"b", dec.b},
                     {"c", dec.c},
                     {"d", dec.d}});
  return 0;
}

int run_threshold(const Resolved& rv, bool curve) {
  const auto m = require_payoffs(rv);
  const auto mode = mode_or_single(rv);
  if (curve) {
    const int samples = rv.sc.grid_n.value_or(kDefaultCurveSamples);
    const auto c = dyad::threshold_curve(m, mode, samples);
    if (rv.format == "csv") {
      json meta = scenario_meta(rv);
      meta["interval_lo"] = c.lo;
      meta["interval_hi"] = c.hi;
      std::ostringstream os;
      dyad::write_threshold_curve_csv(os, c, meta);
      emit_text(rv, os.str());
    } else {
      json samples_json = json::array();
      for (const auto& [f, rp] : c.samples) samples_json.push_back({f, rp});
      emit_json(rv, json{{"command", "threshold"},
                         {"curve", samples_json},
                         {"interval_lo", c.lo},
                         {"interval_hi", c.hi}});
    }
    return 0;
  }
  if (!rv.fc1) throw std::invalid_argument("point threshold requires --fc (or use --curve)");
  const auto thr = mode == dyad::SelectionMode::Single ? dyad::threshold_single(m, *rv.fc1)
                                                       : dyad::threshold_roles(m, *rv.fc1);
  const auto bounds = mode == dyad::SelectionMode::Single ? dyad::threshold_bounds_single(m)
                                                          : dyad::threshold_bounds_roles(m);
  json out{{"command", "threshold"}, {"f_c", *rv.fc1}};
  if (thr) {
    out["r_prime"] = thr->value;
    out["in_unit_interval"] = thr->in_unit_interval;
  } else {
    out["r_prime"] = nullptr;
    out["note"] = "threshold undefined: degenerate denominator";
  }
  if (bounds) {
    out["interval_lo"] = bounds->lo;
    out["interval_hi"] = bounds->hi;
  }
  emit_json(rv, std::move(out));
  return 0;
}

int run_equilibrium(const Resolved& rv) {
  const auto m = require_payoffs(rv);
  const double r = require_relatedness(rv);
  const auto mode = mode_or_single(rv);
  const auto rep = mode == dyad::SelectionMode::Single ? dyad::equilibrium_single(m, r)
                                                       : dyad::equilibrium_roles(m, r);
  json out = dyad::to_json(rep);
  out["command"] = "equilibrium";
  out["mode"] = dyad::to_string(mode);
  emit_json(rv, std::move(out));
  return 0;
}

int run_phase(const Resolved& rv) {
  const auto m = require_payoffs(rv);
  const double r = require_relatedness(rv);
  const int grid = rv.sc.grid_n.value_or(kDefaultGrid);
  const auto field = dyad::vector_field(m, r, grid);
  if (rv.format == "json") {
    json rows = json::array();
    for (const auto& s : field)
      rows.push_back({s.state.f1, s.state.f2, s.rates.df1, s.rates.df2});
    emit_json(rv, json{{"command", "phase"}, {"columns", {"f1", "f2", "df1", "df2"}},
                       {"field", rows}});
  } else {
    std::ostringstream os;
    dyad::write_vector_field_csv(os, field, scenario_meta(rv));
    emit_text(rv, os.str());
  }
  return 0;
}

int run_simulate(const Resolved& rv) {
  const auto m = require_payoffs(rv);
  const double r = require_relatedness(rv);
  const double dt = rv.sc.dt.value_or(kDefaultDt);
  const double t_end = rv.sc.t_end.value_or(kDefaultTEnd);
  const auto mode = mode_or_single(rv);
  std::ostringstream os;
  if (mode == dyad::SelectionMode::Single) {
    if (!rv.fc1) throw std::invalid_argument("simulate requires an initial frequency (--fc)");
    const auto traj = dyad::integrate_single(m, r, *rv.fc1, dt, t_end);
    json meta = scenario_meta(rv);
    meta["converged"] = traj.converged;
    dyad::write_trajectory_csv(os, traj, meta);
  } else {
    if (!rv.fc1 || !rv.fc2)
      throw std::invalid_argument("simulate in roles mode requires --fc f1,f2");
    const auto traj = dyad::integrate_two_locus(m, r, {*rv.fc1, *rv.fc2}, dt, t_end);
    json meta = scenario_meta(rv);
    meta["converged"] = traj.converged;
    dyad::write_trajectory_csv(os, traj, meta);
  }
  emit_text(rv, os.str());
  return 0;
}

int run_abm_estimate(const Resolved& rv) {
  const auto m = require_payoffs(rv);
  const double r = require_relatedness(rv);
  if (!rv.fc1) throw std::invalid_argument("abm estimate requires --fc");
  const auto n = static_cast<std::size_t>(rv.sc.n.value_or(kDefaultSamples));
  const auto seed = rv.sc.seed.value_or(kDefaultSeed);
  const auto mode = mode_or_single(rv);
  dyad::EstimatePair est;
  dyad::AlleleFitness closed;
  if (mode == dyad::SelectionMode::Single) {
    est = dyad::estimate_single_locus(m, dyad::PairingModel(r, *rv.fc1), n, seed);
    closed = dyad::fitness_single(m, dyad::KinContext(r, *rv.fc1));
  } else {
    est = dyad::estimate_roles(m, r, *rv.fc1, n, seed);
    closed = dyad::inclusive_fitness_roles(m, r, *rv.fc1);
  }
  emit_json(rv, json{{"command", "abm-estimate"},
                     {"mode", dyad::to_string(mode)},
                     {"f_c", *rv.fc1},
                     {"cooperate", dyad::estimate_to_json(est.cooperate, closed.cooperate)},
                     {"defect", dyad::estimate_to_json(est.defect, closed.defect)},
                     {"partner_coop_frequency", est.partner_coop_frequency}});
  return 0;
}

int run_abm_evolve(const Resolved& rv) {
  const auto m = require_payoffs(rv);
  dyad::PopulationConfig cfg;
  cfg.relatedness = require_relatedness(rv);
  cfg.size = static_cast<std::size_t>(rv.sc.size.value_or(kDefaultPopulation));
  cfg.generations = static_cast<std::size_t>(rv.sc.generations.value_or(kDefaultGenerations));
  cfg.seed = rv.sc.seed.value_or(kDefaultSeed);
  if (rv.fc1) cfg.init_f1 = *rv.fc1;
  if (rv.fc2) cfg.init_f2 = *rv.fc2;
  const auto mode = mode_or_single(rv);
  if (mode == dyad::SelectionMode::Roles && !rv.fc2 && rv.fc1)
    throw std::invalid_argument("abm evolve in roles mode requires --fc f1,f2");
  const auto series = dyad::evolve_population(cfg, m, mode);
  json meta = scenario_meta(rv);
  meta["fitness_shift"] = series.fitness_shift;
  meta["relatedness_model"] = "pairing parameter r held constant across generations";
  std::ostringstream os;
  dyad::write_series_csv(os, series, meta);
  emit_text(rv, os.str());
  return 0;
}

dyad::Genome genome_from_arg(const std::string& text) {
  try {
    return dyad::named_strategy(text);
  } catch (const std::invalid_argument&) {
    return dyad::Genome::from_string(text);
  }
}

int run_match(const Resolved& rv, const std::string& g1_text, const std::string& g2_text) {
  const auto m = rv.sc.payoffs.value_or(dyad::PayoffMatrix::canonical_pd());
  const auto g1 = genome_from_arg(g1_text);
  const auto g2 = genome_from_arg(g2_text);
  json out = dyad::to_json(dyad::play_match(g1, g2, m));
  out["command"] = "match";
  out["genomes"] = {g1.str(), g2.str()};
  Resolved rv2 = rv;
  rv2.sc.payoffs = m;
  emit_json(rv2, std::move(out));
  return 0;
}

// figure N: emits <prefix>.csv (curve or vector field) and <prefix>.json
// (parameters with provenance plus derived reports).
int run_figure(const Resolved& rv, int number) {
  dyad::Scenario sc;
  json provenance;
  std::string prefix = rv.out.empty() ? ("figure" + std::to_string(number)) : rv.out;

  const auto canonical = dyad::PayoffMatrix::canonical_pd();
  const auto positive = dyad::PayoffMatrix::positive_synergy_pd();

  json report;
  std::ostringstream csv;
  switch (number) {
    case 1: {
      sc.payoffs = canonical;
      sc.r = 5.0 / 12.0;
      provenance = {{"payoffs", "paper"}, {"r", "paper"}};
      const auto curve = dyad::threshold_curve(canonical, dyad::SelectionMode::Single,
                                               rv.sc.grid_n.value_or(kDefaultCurveSamples));
      json meta{{"figure", "1"}, {"mode", "single"}};
      meta["provenance"] = provenance.dump();
      dyad::write_threshold_curve_csv(csv, curve, meta);
      report["equilibrium"] = dyad::to_json(dyad::equilibrium_single(canonical, *sc.r));
      report["interval"] = {curve.lo, curve.hi};
      break;
    }
    case 3: {
      sc.payoffs = canonical;
      provenance = {{"payoffs", "paper"}};
      const auto curve = dyad::threshold_curve(canonical, dyad::SelectionMode::Roles,
                                               rv.sc.grid_n.value_or(kDefaultCurveSamples));
      json meta{{"figure", "3"}, {"mode", "roles"}};
      meta["provenance"] = provenance.dump();
      dyad::write_threshold_curve_csv(csv, curve, meta);
      report["interval"] = {curve.lo, curve.hi};
      break;
    }
    case 4:
    case 5: {
      sc.payoffs = number == 4 ? canonical : positive;
      sc.r = number == 4 ? 5.0 / 12.0 : 0.3;
      sc.grid_n = rv.sc.grid_n.value_or(kDefaultGrid);
      provenance = {{"payoffs", "paper"}, {"r", "tool-default"}};
      const auto field = dyad::vector_field(*sc.payoffs, *sc.r, *sc.grid_n);
      json meta{{"figure", std::to_string(number)}, {"mode", "roles"}};
      meta["provenance"] = provenance.dump();
      meta["r"] = *sc.r;
      dyad::write_vector_field_csv(csv, field, meta);
      json fps = json::array();
      for (const auto& fp : dyad::fixed_points(*sc.payoffs, *sc.r))
        fps.push_back(dyad::to_json(fp));
      report["fixed_points"] = fps;
      report["equilibrium"] = dyad::to_json(dyad::equilibrium_roles(*sc.payoffs, *sc.r));
      break;
    }
    default:
      throw std::invalid_argument("figure number must be 1, 3, 4 or 5");
  }

  {
    std::ofstream f(prefix + ".csv");
    if (!f) throw std::invalid_argument("cannot open output file '" + prefix + ".csv'");
    f << csv.str();
  }
  report["command"] = "figure";
  report["figure"] = number;
  report["provenance"] = provenance;
  report["scenario"] = dyad::scenario_to_json(sc);
  {
    std::ofstream f(prefix + ".json");
    if (!f) throw std::invalid_argument("cannot open output file '" + prefix + ".json'");
    f << report.dump(2) << "\n";
  }
  std::cout << "wrote " << prefix << ".csv and " << prefix << ".json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyad: cost/benefit/synergy analysis of symmetric 2x2 games, kin-selection "
               "thresholds and equilibria, coupled replicator dynamics, and Monte Carlo checks"};
  app.require_subcommand(1);

  CommonFlags f_classify, f_decompose, f_threshold, f_equilibrium, f_phase, f_simulate,
      f_estimate, f_evolve, f_match, f_figure;

  auto* c_classify = app.add_subcommand("classify", "taxonomy, synergy class and strong-altruism map");
  add_common_flags(c_classify, f_classify);

  auto* c_decompose = app.add_subcommand("decompose", "cost, benefit and synergy of a matrix");
  add_common_flags(c_decompose, f_decompose);

  auto* c_threshold = app.add_subcommand("threshold", "relatedness threshold (point or curve)");
  add_common_flags(c_threshold, f_threshold);
  bool curve_flag = false;
  c_threshold->add_flag("--curve", curve_flag, "emit the sampled threshold curve");

  auto* c_equilibrium = app.add_subcommand("equilibrium", "mixed-equilibrium report");
  add_common_flags(c_equilibrium, f_equilibrium);

  auto* c_phase = app.add_subcommand("phase", "two-locus replicator vector field");
  add_common_flags(c_phase, f_phase);

  auto* c_simulate = app.add_subcommand("simulate", "replicator trajectory from an initial state");
  add_common_flags(c_simulate, f_simulate);

  auto* c_abm = app.add_subcommand("abm", "agent-based Monte Carlo");
  c_abm->require_subcommand(1);
  auto* c_estimate = c_abm->add_subcommand("estimate", "fitness estimates vs closed forms");
  add_common_flags(c_estimate, f_estimate);
  auto* c_evolve = c_abm->add_subcommand("evolve", "finite-population evolution time series");
  add_common_flags(c_evolve, f_evolve);

  auto* c_match = app.add_subcommand("match", "iterated deterministic match report");
  std::string g1_text, g2_text;
  c_match->add_option("G1", g1_text, "first genome (name or 5-char CD string)")->required();
  c_match->add_option("G2", g2_text, "second genome")->required();
  add_common_flags(c_match, f_match);

  auto* c_figure = app.add_subcommand("figure", "emit the data behind a standard figure");
  int figure_number = 0;
  c_figure->add_option("N", figure_number, "figure number: 1, 3, 4 or 5")->required();
  add_common_flags(c_figure, f_figure);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (c_classify->parsed()) return run_classify(resolve(c_classify, f_classify));
    if (c_decompose->parsed()) return run_decompose(resolve(c_decompose, f_decompose));
    if (c_threshold->parsed()) return run_threshold(resolve(c_threshold, f_threshold), curve_flag);
    if (c_equilibrium->parsed()) return run_equilibrium(resolve(c_equilibrium, f_equilibrium));
    if (c_phase->parsed()) return run_phase(resolve(c_phase, f_phase));
    if (c_simulate->parsed()) return run_simulate(resolve(c_simulate, f_simulate));
    if (c_estimate->parsed()) return run_abm_estimate(resolve(c_estimate, f_estimate));
    if (c_evolve->parsed()) return run_abm_evolve(resolve(c_evolve, f_evolve));
    if (c_match->parsed()) return run_match(resolve(c_match, f_match), g1_text, g2_text);
    if (c_figure->parsed()) return run_figure(resolve(c_figure, f_figure), figure_number);
  } catch (const dyad::integration_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
