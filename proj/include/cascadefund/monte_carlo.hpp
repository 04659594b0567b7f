#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cascadefund/belief.hpp"
#include "cascadefund/cascade_bounds.hpp"
#include "cascadefund/equilibrium.hpp"
#include "cascadefund/parallel.hpp"
#include "cascadefund/policy_table.hpp"
#include "cascadefund/rng.hpp"

namespace cascadefund {

struct RunRecord {
  std::uint64_t run = 0;
  int omega = 0;
  std::vector<double> types;
  std::vector<int> actions;
  std::vector<double> thresholds;
  std::vector<double> likelihood_path;  // L_0 .. L_n
  double L_end = 0.0;
  bool completed = false;
  bool off_grid = false;
};

// Thresholds along action histories from one start state.  A history of k
// actions determines (L, B, n), so the k actions packed as bits key the
// node.  Safe to share between threads.
class PolicyWalker {
 public:
  PolicyWalker(const PolicyTable& table, GameState start)
      : table_(table), start_(start) {
    if (start.n < 0 || start.n > PolicyTable::kMaxPlayers) {
      throw std::invalid_argument("number of players out of range");
    }
  }

  const PolicyTable& table() const { return table_; }
  const GameState& start() const { return start_; }

  double threshold(int depth, std::uint64_t history, double log_odds, int B,
                   int n) const {
    const std::pair<int, std::uint64_t> key{depth, history};
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    const double sigma = solve_state(log_odds, B, n, table_).sigma;
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.emplace(key, sigma);
    return sigma;
  }

  bool on_grid(double log_odds) const {
    const auto& g = table_.grid();
    return log_odds >= g.log_lo() - 1e-12 && log_odds <= g.log_hi() + 1e-12;
  }

 private:
  const PolicyTable& table_;
  GameState start_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, std::uint64_t>, double> memo_;
};

// One fundraising run.  Players invest iff t >= sigma; with fewer players
// left than investments needed everyone declines.
inline RunRecord simulate_run(const PolicyWalker& walker, std::uint64_t seed,
                              std::uint64_t run) {
  const auto& dist = walker.table().dist();
  const auto& spec = dist.spec();
  const GameState s0 = walker.start();
  Splitmix64Stream rng(seed, run);

  RunRecord r;
  r.run = run;
  r.omega = rng.uniform() < s0.L.probability() ? 1 : 0;
  Likelihood L = s0.L;
  int B = s0.B;
  int n = s0.n;
  std::uint64_t history = 0;
  r.likelihood_path.push_back(L.odds());
  for (int k = 0; k < s0.n; ++k) {
    const double uq = rng.uniform();
    const double us = rng.uniform();
    const double q = spec.sample(uq);
    const int signal = us < q ? r.omega : 1 - r.omega;
    const double t = type_from_signal(spec, q, signal);
    if (!walker.on_grid(L.log_odds())) r.off_grid = true;
    const double sigma = walker.threshold(k, history, L.log_odds(), B, n);
    const int a = t >= sigma ? 1 : 0;
    r.types.push_back(t);
    r.thresholds.push_back(sigma);
    r.actions.push_back(a);
    L = a ? update_on_invest(L, dist, sigma) : update_on_decline(L, dist, sigma);
    r.likelihood_path.push_back(L.odds());
    history |= static_cast<std::uint64_t>(a) << k;
    B -= a;
    --n;
  }
  r.L_end = L.odds();
  r.completed = B <= 0;
  return r;
}

inline RunRecord simulate_run(const PolicyTable& table, const GameState& start,
                              std::uint64_t seed, std::uint64_t run = 0) {
  return simulate_run(PolicyWalker(table, start), seed, run);
}

struct WorldEstimate {
  std::uint64_t runs = 0;
  std::uint64_t completed = 0;
  bool available = false;
  double estimate = 0.0;
  double se = 0.0;  // binomial, from the estimate
};

struct CompletionEstimate {
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
  WorldEstimate w0;
  WorldEstimate w1;
  // Mean of L_end / (1 + L_end) against the prior probability.
  double prior_probability = 0.0;
  double posterior_mean = 0.0;
  double posterior_se = 0.0;
  std::uint64_t off_grid_runs = 0;
};

inline WorldEstimate make_world_estimate(std::uint64_t runs,
                                         std::uint64_t completed) {
  WorldEstimate w;
  w.runs = runs;
  w.completed = completed;
  w.available = runs > 0;
  if (w.available) {
    const double p = static_cast<double>(completed) / static_cast<double>(runs);
    w.estimate = p;
    w.se = std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
  }
  return w;
}

// Standard error a binomial estimate of p from m draws would have.
inline double binomial_se(double p, std::uint64_t m) {
  if (m == 0) return std::numeric_limits<double>::infinity();
  p = std::clamp(p, 0.0, 1.0);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(m));
}

// |p_hat - p| within k standard errors of a binomial with the model p.  A
// degenerate model p (0 or 1) must be matched exactly.
inline bool agrees_with_model(const WorldEstimate& w, double p, double k = 3.0) {
  if (!w.available) return false;
  const double se = binomial_se(p, w.runs);
  return std::abs(w.estimate - p) <= k * se + 1e-15;
}

struct SimulationBatch {
  CompletionEstimate estimate;
  std::vector<RunRecord> records;  // empty unless kept
  std::vector<double> completed_L_end;
};

// Runs 0 .. N-1 of the stream family `seed`.  Results do not depend on the
// number of worker threads.
inline SimulationBatch simulate_batch(const PolicyTable& table,
                                      const GameState& start, std::uint64_t N,
                                      std::uint64_t seed,
                                      bool keep_records = false) {
  if (N == 0) throw std::invalid_argument("number of runs must be positive");
  SimulationBatch out;
  const PolicyWalker walker(table, start);

  const std::uint64_t chunk = 4096;
  const std::uint64_t chunks = (N + chunk - 1) / chunk;
  struct Partial {
    std::uint64_t n0 = 0, c0 = 0, n1 = 0, c1 = 0, off = 0;
    double sum_post = 0.0, sum_post2 = 0.0;
    std::vector<RunRecord> records;
    std::vector<double> ends;
  };
  std::vector<Partial> parts(chunks);
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    Partial& p = parts[c];
    const std::uint64_t lo = c * chunk;
    const std::uint64_t hi = std::min(N, lo + chunk);
    for (std::uint64_t run = lo; run < hi; ++run) {
      RunRecord r = simulate_run(walker, seed, run);
      if (r.omega == 1) {
        ++p.n1;
        p.c1 += r.completed;
      } else {
        ++p.n0;
        p.c0 += r.completed;
      }
      p.off += r.off_grid;
      const double post = r.L_end / (1.0 + r.L_end);
      p.sum_post += post;
      p.sum_post2 += post * post;
      if (r.completed) p.ends.push_back(r.L_end);
      if (keep_records) p.records.push_back(std::move(r));
    }
  });

  std::uint64_t n0 = 0, c0 = 0, n1 = 0, c1 = 0, off = 0;
  double sp = 0.0, sp2 = 0.0;
  for (auto& p : parts) {
    n0 += p.n0;
    c0 += p.c0;
    n1 += p.n1;
    c1 += p.c1;
    off += p.off;
    sp += p.sum_post;
    sp2 += p.sum_post2;
    out.completed_L_end.insert(out.completed_L_end.end(), p.ends.begin(),
                               p.ends.end());
    if (keep_records) {
      for (auto& r : p.records) out.records.push_back(std::move(r));
    }
  }
  auto& e = out.estimate;
  e.runs = N;
  e.seed = seed;
  e.w0 = make_world_estimate(n0, c0);
  e.w1 = make_world_estimate(n1, c1);
  e.off_grid_runs = off;
  e.prior_probability = start.L.probability();
  const double Nd = static_cast<double>(N);
  e.posterior_mean = sp / Nd;
  const double var = std::max(0.0, sp2 / Nd - e.posterior_mean * e.posterior_mean);
  e.posterior_se = N > 1 ? std::sqrt(var / (Nd - 1.0)) : 0.0;
  return out;
}

inline CompletionEstimate estimate_completion(const PolicyTable& table,
                                              const GameState& start,
                                              std::uint64_t N,
                                              std::uint64_t seed) {
  return simulate_batch(table, start, N, seed).estimate;
}

// Public beliefs are a martingale: the mean posterior equals the prior.
inline bool martingale_holds(const CompletionEstimate& e, double k = 3.0) {
  return std::abs(e.posterior_mean - e.prior_probability) <=
         k * e.posterior_se + 1e-12;
}

struct EndLikelihoodStats {
  std::size_t count = 0;
  double max = 0.0;
  double mean = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
  double bound = 0.0;  // (Q / (1 - Q))^2
  bool within_bound = true;
};

// Empirical quantile by linear interpolation between order statistics.
inline double quantile_sorted(const std::vector<double>& v, double p) {
  if (v.empty()) return 0.0;
  const double pos = p * static_cast<double>(v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v.size()) return v.back();
  const double t = pos - static_cast<double>(i);
  return v[i] + t * (v[i + 1] - v[i]);
}

inline EndLikelihoodStats end_likelihood_stats(std::vector<double> L_end,
                                               double Q) {
  EndLikelihoodStats s;
  s.bound = learning_bound(Q);
  s.count = L_end.size();
  if (L_end.empty()) return s;
  std::sort(L_end.begin(), L_end.end());
  double sum = 0.0;
  for (double v : L_end) sum += v;
  s.mean = sum / static_cast<double>(L_end.size());
  s.max = L_end.back();
  s.q50 = quantile_sorted(L_end, 0.5);
  s.q90 = quantile_sorted(L_end, 0.9);
  s.q99 = quantile_sorted(L_end, 0.99);
  s.within_bound = s.max < s.bound;
  return s;
}

inline EndLikelihoodStats end_likelihood_stats(
    const std::vector<RunRecord>& records, double Q) {
  std::vector<double> ends;
  for (const auto& r : records) {
    if (r.completed) ends.push_back(r.L_end);
  }
  return end_likelihood_stats(std::move(ends), Q);
}

struct ConjectureViolation {
  int B = 0;
  int n = 0;
  double L = 0.0;
  double pi0 = 0.0;
  double pi1 = 0.0;
};

struct ConjectureReport {
  std::size_t rows = 0;
  std::size_t states = 0;
  std::size_t unanimity_states = 0;
  std::vector<ConjectureViolation> violations;
};

// Grid states where pi1 < pi0 - tol.
inline ConjectureReport conjecture_scan(const PolicyTable& table,
                                        double tol = 1e-9) {
  ConjectureReport rep;
  const auto& grid = table.grid();
  for (const PolicyRow* r : table.rows()) {
    if (!r->filled) continue;
    ++rep.rows;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ++rep.states;
      if (r->B == r->n) ++rep.unanimity_states;
      if (r->pi1[i] < r->pi0[i] - tol) {
        rep.violations.push_back({r->B, r->n, grid.odds(i), r->pi0[i], r->pi1[i]});
      }
    }
  }
  return rep;
}

}  // namespace cascadefund
