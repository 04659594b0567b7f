#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <ios>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cascadefund/cascade.hpp"
#include "cascadefund/config.hpp"
#include "cascadefund/equilibrium.hpp"
#include "cascadefund/monte_carlo.hpp"
#include "cascadefund/output.hpp"
#include "cascadefund/parallel.hpp"
#include "cascadefund/rng.hpp"
#include "cascadefund/unanimity.hpp"

namespace cascadefund {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3 };

// Column-oriented result set written either as CSV or as JSON records.
struct DataTable {
  std::vector<std::string> columns;
  std::vector<bool> integer;
  std::vector<std::vector<double>> rows;

  void add_column(std::string name, bool is_integer = false) {
    columns.push_back(std::move(name));
    integer.push_back(is_integer);
  }
};

inline void write_csv(std::ostream& os, const DataTable& t,
                      const nlohmann::json& config, const std::string& command,
                      const std::vector<std::string>& comments = {}) {
  CsvWriter w(os, config, command);
  for (const auto& c : comments) w.comment(c);
  w.header(t.columns);
  for (const auto& r : t.rows) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (t.integer[k]) {
        w.cell(static_cast<long long>(std::llround(r[k])));
      } else {
        w.cell(r[k]);
      }
    }
    w.end_row();
  }
}

inline nlohmann::json table_json(const DataTable& t) {
  auto rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json o;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (t.integer[k]) {
        o[t.columns[k]] = static_cast<long long>(std::llround(r[k]));
      } else {
        o[t.columns[k]] = r[k];
      }
    }
    rows.push_back(std::move(o));
  }
  return rows;
}

inline nlohmann::json envelope(const RunConfig& cfg, const std::string& command) {
  return {{"tool", "cascadefund"},
          {"version", kVersion},
          {"command", command},
          {"config", cfg.to_json()}};
}

// Writes the data file (or stdout) and the summary (next to the data file, or
// stderr when writing to stdout).
inline void emit(const RunConfig& cfg, const std::string& command,
                 const DataTable& table, nlohmann::json summary) {
  std::string data;
  if (cfg.format == OutputFormat::csv) {
    std::ostringstream os;
    write_csv(os, table, cfg.to_json(), command);
    data = os.str();
  } else {
    nlohmann::json j = envelope(cfg, command);
    j["columns"] = table.columns;
    j["rows"] = table_json(table);
    data = dump_json(j);
  }
  nlohmann::json s = envelope(cfg, command);
  for (auto& [k, v] : summary.items()) s[k] = v;
  const std::string text = dump_json(s);
  if (cfg.out.empty()) {
    std::cout << data;
    if (cfg.summary.empty()) {
      std::cerr << text;
    } else {
      write_text(cfg.summary, text);
    }
    return;
  }
  write_text(cfg.out, data);
  write_text(cfg.summary.empty() ? summary_path_for(cfg.out) : cfg.summary, text);
}

inline std::vector<double> log_spaced(double lo, double hi, int points) {
  std::vector<double> out;
  if (points == 1) return {lo};
  const double a = std::log(lo), b = std::log(hi);
  for (int k = 0; k < points; ++k) {
    out.push_back(std::exp(a + (b - a) * k / (points - 1.0)));
  }
  return out;
}

inline nlohmann::json intervals_json(const std::vector<Interval>& w) {
  auto a = nlohmann::json::array();
  for (const auto& i : w) a.push_back({i.lo, i.hi});
  return a;
}

// solve: the whole policy table.
inline int cmd_solve(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.B < 1) throw ConfigError("config: solve needs B >= 1");
  const TypeDistribution dist(cfg.spec());
  const PolicyTable table = backward_induction(dist, cfg.B, cfg.n, cfg.solver);
  const auto& grid = table.grid();

  DataTable t;
  t.add_column("B", true);
  t.add_column("n", true);
  t.add_column("L");
  t.add_column("sigma");
  t.add_column("pi0");
  t.add_column("pi1");
  t.add_column("irregular", true);
  auto rows = nlohmann::json::array();
  for (const PolicyRow* r : table.rows()) {
    std::size_t irregular = 0, max_cand = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!std::isfinite(r->sigma[i]) || !std::isfinite(r->pi0[i]) ||
          !std::isfinite(r->pi1[i])) {
        throw ModelError("non-finite value in policy row B=" +
                         std::to_string(r->B) + ", n=" + std::to_string(r->n));
      }
      t.rows.push_back({double(r->B), double(r->n), grid.odds(i), r->sigma[i],
                        r->pi0[i], r->pi1[i], double(r->irregular[i])});
      irregular += r->irregular[i];
      max_cand = std::max<std::size_t>(max_cand, r->candidates[i]);
    }
    rows.push_back({{"B", r->B},
                    {"n", r->n},
                    {"irregular_states", irregular},
                    {"irregular_fraction", double(irregular) / grid.size()},
                    {"max_candidates", max_cand}});
  }

  const StateSolution start = solve_state(std::log(cfg.L0), cfg.B, cfg.n, table);
  const auto conj = conjecture_scan(table);
  nlohmann::json s;
  s["grid"] = {{"size", grid.size()}, {"L_min", grid.lo()}, {"L_max", grid.hi()}};
  s["rows"] = rows;
  s["start"] = {{"L", cfg.L0},
                {"sigma", start.sigma},
                {"sigma_canonical", table.canonical(start.sigma)},
                {"pi0", start.pi0},
                {"pi1", start.pi1},
                {"irregular", start.irregular}};
  s["cascade_bounds"] = {{"up", up_cascade_bound(dist.Q())},
                         {"down", down_cascade_bound(cfg.B, dist.Q())}};
  s["conjecture"] = {{"states", conj.states},
                     {"violations", conj.violations.size()}};
  emit(cfg, "solve", t, std::move(s));
  return kExitOk;
}

// sweep: unanimity profiles (B = n) over a log-spaced range of priors.
// Thresholds are written clamped to [1-Q, Q].
inline int cmd_sweep(const RunConfig& cfg) {
  cfg.validate();
  const TypeDistribution dist(cfg.spec());
  const int n = cfg.n;
  const auto Ls = log_spaced(cfg.L_min, cfg.L_max, cfg.points);
  std::vector<UnanimitySolution> sols(Ls.size());
  parallel_for(Ls.size(), [&](std::size_t k) {
    sols[k] = solve_unanimity(Ls[k], dist, n, cfg.solver.tie_tolerance);
  });

  DataTable t;
  t.add_column("L");
  for (int i = 1; i <= n; ++i) t.add_column("x_" + std::to_string(i));
  t.add_column("pi0");
  t.add_column("pi1");
  t.add_column("U");
  for (int i = 1; i <= n; ++i) t.add_column("delegate_" + std::to_string(i), true);
  t.add_column("irregular", true);

  std::size_t equal_points = 0, delegation_points = 0, insurance_failures = 0,
              ordering_violations = 0, irregular_points = 0;
  for (std::size_t k = 0; k < Ls.size(); ++k) {
    const auto& u = sols[k];
    std::vector<double> row{Ls[k]};
    for (double x : u.x) {
      if (!std::isfinite(x)) throw ModelError("non-finite threshold in sweep");
      row.push_back(std::clamp(x, dist.support_low(), dist.support_high()));
    }
    row.push_back(u.pi0);
    row.push_back(u.pi1);
    row.push_back(u.utility);
    bool any = false;
    for (double x : u.x) {
      const bool d = is_delegating(dist, Ls[k], n, x);
      any = any || d;
      row.push_back(d ? 1.0 : 0.0);
    }
    row.push_back(u.irregular ? 1.0 : 0.0);

    bool equal = true, ordered = true;
    for (int i = 1; i < n; ++i) {
      const double a = row[static_cast<std::size_t>(i)];
      const double b = row[static_cast<std::size_t>(i) + 1];
      if (std::abs(a - b) > 1e-9) equal = false;
      if (a > b + 1e-9) ordered = false;
    }
    equal_points += equal;
    ordering_violations += !ordered;
    delegation_points += any;
    irregular_points += u.irregular;
    insurance_failures += !social_insurance_check(u.profile(dist));
    t.rows.push_back(std::move(row));
  }

  const auto segs = J_monotone_segments(dist);
  const auto w = cascade_witness_set(dist);
  bool earliest = false, latest = false;
  if (!w.empty()) {
    const auto rep = delegation_analysis(dist, n, {Ls.front()});
    earliest = rep.earliest_only;
    latest = rep.latest_only;
  }
  nlohmann::json s;
  s["points"] = Ls.size();
  s["equal_threshold_points"] = equal_points;
  s["delegation_points"] = delegation_points;
  s["ordering_violations"] = ordering_violations;
  s["social_insurance_failures"] = insurance_failures;
  s["irregular_points"] = irregular_points;
  s["J_segments"] = segs.size();
  s["cascade_startable"] = !w.empty();
  s["earliest_only"] = earliest;
  s["latest_only"] = latest;
  s["witness"] = intervals_json(w);
  emit(cfg, "sweep", t, std::move(s));
  return kExitOk;
}

// simulate: Monte Carlo runs from (L0, B, n) under the solved policy.
inline int cmd_simulate(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.runs == 0) throw ConfigError("config: runs must be >= 1");
  const TypeDistribution dist(cfg.spec());
  const PolicyTable table =
      backward_induction(dist, std::max(cfg.B, 1), cfg.n, cfg.solver);
  const GameState start{Likelihood::from_odds(cfg.L0), cfg.B, cfg.n};
  const StateSolution model = solve_state(start, table);
  const auto batch = simulate_batch(table, start, cfg.runs, cfg.seed, true);
  const auto& e = batch.estimate;

  DataTable t;
  t.add_column("run", true);
  t.add_column("omega", true);
  t.add_column("completed", true);
  t.add_column("L_end");
  for (int i = 1; i <= cfg.n; ++i) t.add_column("t_" + std::to_string(i));
  for (int i = 1; i <= cfg.n; ++i) t.add_column("a_" + std::to_string(i), true);
  for (const auto& r : batch.records) {
    std::vector<double> row{double(r.run), double(r.omega),
                            r.completed ? 1.0 : 0.0, r.L_end};
    for (double v : r.types) row.push_back(v);
    for (int a : r.actions) row.push_back(a);
    t.rows.push_back(std::move(row));
  }
  if (e.off_grid_runs > 0) {
    std::cerr << "warning: " << e.off_grid_runs
              << " runs visited likelihoods outside the policy grid; values were "
                 "clamped\n";
  }

  auto world = [](const WorldEstimate& w, double p) {
    nlohmann::json j = {{"runs", w.runs},
                        {"completed", w.completed},
                        {"available", w.available},
                        {"model", p}};
    if (w.available) {
      j["estimate"] = w.estimate;
      j["se"] = w.se;
      j["within_3se"] = agrees_with_model(w, p);
    }
    return j;
  };
  const auto ends = end_likelihood_stats(batch.completed_L_end, dist.Q());
  nlohmann::json s;
  s["generator"] = kGeneratorName;
  s["seed"] = cfg.seed;
  s["runs"] = cfg.runs;
  s["omega0"] = world(e.w0, model.pi0);
  s["omega1"] = world(e.w1, model.pi1);
  s["martingale"] = {{"prior", e.prior_probability},
                     {"posterior_mean", e.posterior_mean},
                     {"se", e.posterior_se},
                     {"holds", martingale_holds(e)}};
  s["L_end"] = {{"completed_runs", ends.count},
                {"max", ends.max},
                {"mean", ends.mean},
                {"q50", ends.q50},
                {"q90", ends.q90},
                {"q99", ends.q99},
                {"bound", ends.bound},
                {"within_bound", ends.within_bound}};
  s["off_grid_runs"] = e.off_grid_runs;
  emit(cfg, "simulate", t, std::move(s));
  return kExitOk;
}

// analyze: cascade and delegation reports as JSON.
inline int cmd_analyze(const RunConfig& cfg) {
  cfg.validate();
  const TypeDistribution dist(cfg.spec());
  const int B = std::max(cfg.B, 1);
  const auto c = analyze_cascades(dist, B);
  const auto Ls = log_spaced(cfg.L_min, cfg.L_max, cfg.points);
  const auto d = delegation_analysis(dist, cfg.n, Ls);
  const auto segs = J_monotone_segments(dist);

  nlohmann::json j = envelope(cfg, "analyze");
  j["cascade"] = {{"up_cascade_bound", c.up_cascade_bound},
                  {"down_cascade_bound", c.down_cascade_bound},
                  {"learning_bound", c.learning_bound},
                  {"startable", c.startable},
                  {"min_R_for_cascades", min_R_for_cascades(dist.Q())}};
  if (c.witness_x) j["cascade"]["witness_x"] = *c.witness_x;
  auto pattern = nlohmann::json::array();
  for (const auto& p : d.pattern) {
    std::vector<int> flags;
    for (bool b : p.delegating) flags.push_back(b ? 1 : 0);
    pattern.push_back({{"L", p.L}, {"x", p.x}, {"delegating", flags}});
  }
  j["delegation"] = {{"startable", d.startable},
                     {"earliest_only", d.earliest_only},
                     {"latest_only", d.latest_only},
                     {"witness", intervals_json(d.witness)},
                     {"n", d.n},
                     {"item2_holds", d.item2_holds},
                     {"pattern", pattern}};
  auto sj = nlohmann::json::array();
  for (const auto& sg : segs) {
    sj.push_back({{"lo", sg.lo}, {"hi", sg.hi}, {"increasing", sg.increasing}});
  }
  j["J_segments"] = sj;
  const std::string text = dump_json(j);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    write_text(cfg.out, text);
  }
  return kExitOk;
}

// Runs a command and maps failures to exit codes.
template <class Fn>
int run_guarded(Fn&& fn, std::ostream& err = std::cerr) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace cascadefund
