#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cascadefund/cascade_bounds.hpp"
#include "cascadefund/likelihood.hpp"
#include "cascadefund/parallel.hpp"
#include "cascadefund/policy_table.hpp"
#include "cascadefund/quality.hpp"
#include "cascadefund/type_distribution.hpp"

namespace cascadefund {

struct GameState {
  Likelihood L;
  int B = 1;
  int n = 1;
};

inline double last_mover_threshold(double L) {
  if (!(L > 0.0)) throw std::domain_error("likelihood must be positive");
  return 1.0 / (1.0 + L);
}

enum class CandidateKind { interior, herd_invest, herd_decline };

inline const char* to_string(CandidateKind k) {
  switch (k) {
    case CandidateKind::interior: return "interior";
    case CandidateKind::herd_invest: return "herd_invest";
    case CandidateKind::herd_decline: return "herd_decline";
  }
  return "?";
}

struct Candidate {
  CandidateKind kind = CandidateKind::interior;
  double x = 0.0;          // indifference value, may lie outside [1-Q, Q]
  double canonical = 0.0;  // x clamped to the type support
  double utility = 0.0;
  double discriminator = -std::numeric_limits<double>::infinity();
  double residual = 0.0;
};

struct RootSet {
  std::vector<Candidate> candidates;
  std::size_t size() const { return candidates.size(); }
  bool empty() const { return candidates.empty(); }
};

struct Selection {
  Candidate chosen;
  bool irregular = false;
  std::size_t tied = 1;  // candidates sharing the maximal utility
  bool refined = false;  // near tie re-evaluated with solved children
};

struct StateSolution {
  double sigma = 0.0;  // raw indifference threshold
  double pi0 = 0.0;
  double pi1 = 0.0;
  bool irregular = false;
  std::size_t candidates = 0;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool close_rel(double a, double b, double tol) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= tol * scale + 1e-15;
}

// Child value after an investment: pi(L+, B - 1, n - 1).
inline Completion invest_child(const PolicyTable& t, double log_odds_plus, int B,
                               int n) {
  return t.completion_log(log_odds_plus, B - 1, n - 1);
}

inline double child_ratio(const Completion& c) {
  return c.pi1 > 0.0 ? c.pi0 / c.pi1 : kInf;
}

}  // namespace detail

// G(x) = L x/(1-x) - pi0(L+)/pi1(L+), +inf when investing cannot lead to
// completion.
inline double indifference_residual(double x, double log_odds, int B, int n,
                                    const PolicyTable& table) {
  const auto& dist = table.dist();
  const double xc = table.canonical(x);
  const double up = log_odds + std::log(dist.lr_upper_tail(xc));
  const Completion c = detail::invest_child(table, up, B, n);
  if (!(c.pi1 > 0.0)) return detail::kInf;
  return std::exp(log_odds) * x / (1.0 - x) - c.pi0 / c.pi1;
}

inline double indifference_residual(double x, const GameState& s,
                                    const PolicyTable& table) {
  return indifference_residual(x, s.L.log_odds(), s.B, s.n, table);
}

inline double expected_utility(double x, double log_odds, int B, int n,
                               const PolicyTable& table) {
  const auto& dist = table.dist();
  const double xc = table.canonical(x);
  const double s1 = dist.survival(World::good, xc);
  const double s0 = dist.survival(World::bad, xc);
  if (s1 == 0.0 && s0 == 0.0) return 0.0;
  const double up = log_odds + std::log(dist.lr_upper_tail(xc));
  const Completion c = detail::invest_child(table, up, B, n);
  const double L = std::exp(log_odds);
  const double lambda = L / (1.0 + L);
  return lambda * s1 * c.pi1 - (1.0 - lambda) * s0 * c.pi0;
}

inline double expected_utility(double x, const GameState& s,
                               const PolicyTable& table) {
  return expected_utility(x, s.L.log_odds(), s.B, s.n, table);
}

// Two thresholds induce the same action partition of the types.
inline bool equivalent_thresholds(const TypeDistribution& dist, double a,
                                  double b, double tol = 1e-9) {
  const double lo = dist.support_low(), hi = dist.support_high();
  if (a <= lo && b <= lo) return true;
  if (a >= hi && b >= hi) return true;
  if (a >= dist.gap_low() && a <= dist.gap_high() && b >= dist.gap_low() &&
      b <= dist.gap_high()) {
    return true;
  }
  return std::abs(a - b) <= tol;
}

// Playable thresholds at a state: interior roots of G plus the herding
// boundary strategies whose conditions hold.
inline RootSet find_roots(double log_odds, int B, int n,
                          const PolicyTable& table) {
  const auto& dist = table.dist();
  const auto& scan = table.scan();
  const auto& opts = table.options();
  const double L = std::exp(log_odds);
  const double Q = dist.Q();
  const double lambda = L / (1.0 + L);
  const double residual_tol = opts.root_tolerance * std::max(1.0, L);
  RootSet out;

  auto push = [&](Candidate c) {
    for (const auto& e : out.candidates) {
      if (equivalent_thresholds(dist, e.x, c.x)) return;
    }
    c.canonical = table.canonical(c.x);
    out.candidates.push_back(c);
  };

  // Herd invest: the lowest type weakly prefers investing.
  const Completion at_L = detail::invest_child(table, log_odds, B, n);
  if (at_L.pi1 > 0.0) {
    const double c = at_L.pi0 / at_L.pi1;
    const double g = L * (1.0 - Q) / Q - c;
    if (g >= -residual_tol) {
      Candidate cand;
      cand.kind = CandidateKind::herd_invest;
      cand.x = c / (L + c);
      cand.utility = lambda * at_L.pi1 - (1.0 - lambda) * at_L.pi0;
      cand.residual = g;
      push(cand);
    }
  }

  // Interior roots: sign changes of G on the scan grid, refined by bisection.
  const std::size_t m = scan.x.size();
  std::vector<double> g(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Completion c =
        detail::invest_child(table, log_odds + scan.log_lr_upper[k], B, n);
    g[k] = c.pi1 > 0.0 ? L * scan.odds[k] - c.pi0 / c.pi1 : detail::kInf;
  }
  auto residual = [&](double x) {
    return indifference_residual(x, log_odds, B, n, table);
  };
  auto add_root = [&](double x) {
    const double r = residual(x);
    if (!(std::abs(r) <= residual_tol)) return;
    Candidate cand;
    cand.kind = CandidateKind::interior;
    cand.x = x;
    cand.utility = expected_utility(x, log_odds, B, n, table);
    cand.residual = r;
    push(cand);
  };
  // Root of G in [a, b] given a sign change, fa = G(a).
  auto bisect = [&](double a, double b, double fa) {
    while (b - a > opts.bisection_tolerance) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const double fm = residual(mid);
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if (!std::isfinite(fm) || (fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    const double ra = std::abs(residual(a)), rb = std::abs(residual(b));
    add_root(ra <= rb ? a : b);
  };
  for (std::size_t k = 0; k < m; ++k) {
    if (g[k] == 0.0) {
      add_root(scan.x[k]);
      continue;
    }
    if (k + 1 == m) break;
    const double ga = g[k], gb = g[k + 1];
    if (std::isfinite(ga) != std::isfinite(gb)) {
      // The invest child leaves its down-cascade inside this cell.  Find the
      // edge and look for a root between it and the finite end.
      const bool left_finite = std::isfinite(ga);
      double fin = left_finite ? scan.x[k] : scan.x[k + 1];
      double inf = left_finite ? scan.x[k + 1] : scan.x[k];
      const double g_end = left_finite ? ga : gb;
      while (std::abs(fin - inf) > opts.bisection_tolerance) {
        const double mid = 0.5 * (fin + inf);
        if (mid == fin || mid == inf) break;
        if (std::isfinite(residual(mid))) {
          fin = mid;
        } else {
          inf = mid;
        }
      }
      const double g_edge = residual(fin);
      const double end = left_finite ? scan.x[k] : scan.x[k + 1];
      if (g_edge == 0.0) {
        add_root(fin);
      } else if ((g_edge < 0.0) != (g_end < 0.0)) {
        if (fin < end) {
          bisect(fin, end, g_edge);
        } else {
          bisect(end, fin, g_end);
        }
      }
      continue;
    }
    if (!std::isfinite(ga)) continue;
    if (gb == 0.0 || (ga < 0.0) == (gb < 0.0)) continue;
    bisect(scan.x[k], scan.x[k + 1], ga);
  }

  // Herd decline: the highest type weakly prefers declining.
  const double log_top = log_odds + std::log(dist.lr_upper_tail(Q));
  const Completion at_top = detail::invest_child(table, log_top, B, n);
  const double c_top = detail::child_ratio(at_top);
  const double L_top = std::exp(log_top);
  if (!std::isfinite(c_top) || L_top - c_top <= residual_tol) {
    Candidate cand;
    cand.kind = CandidateKind::herd_decline;
    cand.x = std::isfinite(c_top) ? c_top / (L + c_top) : 1.0;
    cand.utility = 0.0;
    cand.residual = std::isfinite(c_top) ? L_top - c_top : -detail::kInf;
    push(cand);
  }
  return out;
}

inline RootSet find_roots(const GameState& s, const PolicyTable& table) {
  return find_roots(s.L.log_odds(), s.B, s.n, table);
}

// D(x_i) over the candidates indexed by `among`, given the invest child of
// candidate i.
inline double discriminator(std::size_t i, const RootSet& roots,
                            const std::vector<std::size_t>& among,
                            const Completion& c, double log_odds,
                            const TypeDistribution& dist) {
  const double L = std::exp(log_odds);
  double best = -detail::kInf;
  for (std::size_t j : among) {
    if (j == i) continue;
    const double xj = roots.candidates[j].canonical;
    const double v = L * c.pi1 * dist.survival(World::good, xj) -
                     c.pi0 * dist.survival(World::bad, xj);
    best = std::max(best, v);
  }
  return best;
}

inline double discriminator(std::size_t i, const RootSet& roots,
                            const std::vector<std::size_t>& among,
                            double log_odds, int B, int n,
                            const PolicyTable& table) {
  const auto& dist = table.dist();
  const auto& ci = roots.candidates.at(i);
  const double up = log_odds + std::log(dist.lr_upper_tail(ci.canonical));
  const Completion c = detail::invest_child(table, up, B, n);
  return discriminator(i, roots, among, c, log_odds, dist);
}

inline double discriminator(std::size_t i, const RootSet& roots,
                            const GameState& s, const PolicyTable& table) {
  std::vector<std::size_t> all(roots.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return discriminator(i, roots, all, s.L.log_odds(), s.B, s.n, table);
}

inline StateSolution solve_state(double log_odds, int B, int n,
                                 const PolicyTable& table, int refine);

namespace detail {

inline constexpr double kRefineWindow = 1e-6;

// Invest child of a candidate solved at its own state rather than read off
// the table.
inline Completion exact_invest_child(const PolicyTable& t, double x,
                                     double log_odds, int B, int n,
                                     int refine) {
  const double up = log_odds + std::log(t.dist().lr_upper_tail(t.canonical(x)));
  const StateSolution s = solve_state(up, B - 1, n - 1, t, refine);
  return {s.pi0, s.pi1, s.irregular};
}

// Moves an interior root onto the zero of the residual with exactly solved
// children.  A few secant steps; the table root is already close.
inline double polish_root(const PolicyTable& t, double x, double log_odds,
                          int B, int n, int refine) {
  const double L = std::exp(log_odds);
  auto g = [&](double v) {
    const Completion c = exact_invest_child(t, v, log_odds, B, n, refine);
    if (!(c.pi1 > 0.0)) return kInf;
    return L * v / (1.0 - v) - c.pi0 / c.pi1;
  };
  double x0 = x, g0 = g(x0);
  double x1 = x + 1e-7, g1 = g(x1);
  for (int it = 0; it < 6; ++it) {
    if (!std::isfinite(g0) || !std::isfinite(g1) || g1 == g0) return x;
    const double x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
    if (!(std::abs(x2 - x) < 1e-4)) return x;
    x0 = x1, g0 = g1;
    x1 = x2, g1 = g(x1);
    if (std::abs(x1 - x0) < t.options().bisection_tolerance) break;
  }
  return x1;
}

}  // namespace detail

// Highest utility wins; ties go to the highest discriminator, and a tie there
// too leaves the state irregular.  Candidates close to the best are first
// re-evaluated with exactly solved children.
inline Selection select_equilibrium(RootSet& roots, double log_odds, int B,
                                    int n, const PolicyTable& table,
                                    int refine = 2) {
  if (roots.empty()) {
    throw ModelError("no playable threshold at L=" +
                     std::to_string(std::exp(log_odds)) +
                     ", B=" + std::to_string(B) + ", n=" + std::to_string(n));
  }
  const auto& dist = table.dist();
  const double tol = table.options().tie_tolerance;
  auto best_index = [&]() {
    std::size_t best = 0;
    for (std::size_t k = 1; k < roots.size(); ++k) {
      if (roots.candidates[k].utility > roots.candidates[best].utility) best = k;
    }
    return best;
  };
  std::size_t best = best_index();

  std::vector<std::optional<Completion>> child(roots.size());
  std::vector<std::size_t> near;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (detail::close_rel(roots.candidates[k].utility,
                          roots.candidates[best].utility, detail::kRefineWindow)) {
      near.push_back(k);
    }
  }
  if (refine > 0 && near.size() > 1 && B >= 3) {
    const double L = std::exp(log_odds);
    const double lambda = L / (1.0 + L);
    for (std::size_t k : near) {
      auto& c = roots.candidates[k];
      if (refine > 1 && c.kind == CandidateKind::interior) {
        c.x = detail::polish_root(table, c.x, log_odds, B, n, refine - 1);
        c.canonical = table.canonical(c.x);
      }
      const double s1 = dist.survival(World::good, c.canonical);
      const double s0 = dist.survival(World::bad, c.canonical);
      if (s1 == 0.0 && s0 == 0.0) continue;
      child[k] = detail::exact_invest_child(table, c.x, log_odds, B, n, refine - 1);
      c.utility = lambda * s1 * child[k]->pi1 - (1.0 - lambda) * s0 * child[k]->pi0;
    }
    best = best_index();
  }
  const bool refined = refine > 0 && near.size() > 1 && B >= 3;

  std::vector<std::size_t> tied;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (detail::close_rel(roots.candidates[k].utility,
                          roots.candidates[best].utility, tol)) {
      tied.push_back(k);
    }
  }
  Selection sel;
  sel.tied = tied.size();
  sel.refined = refined;
  if (tied.size() == 1) {
    sel.chosen = roots.candidates[best];
    return sel;
  }
  for (std::size_t k : tied) {
    roots.candidates[k].discriminator =
        child[k] ? discriminator(k, roots, tied, *child[k], log_odds, dist)
                 : discriminator(k, roots, tied, log_odds, B, n, table);
  }
  std::size_t top = tied.front();
  for (std::size_t k : tied) {
    if (roots.candidates[k].discriminator > roots.candidates[top].discriminator) {
      top = k;
    }
  }
  sel.chosen = roots.candidates[top];
  for (std::size_t k : tied) {
    if (k == top) continue;
    if (detail::close_rel(roots.candidates[k].discriminator,
                          roots.candidates[top].discriminator, tol)) {
      sel.irregular = true;
    }
  }
  return sel;
}

inline Selection select_equilibrium(RootSet& roots, const GameState& s,
                                    const PolicyTable& table) {
  return select_equilibrium(roots, s.L.log_odds(), s.B, s.n, table);
}

// pi_w(L, B, n) from the recurrence under threshold x.
// Children come from the table, or with exact_depth >= 0 are solved at their
// own states.
inline Completion recurrence(double x, double log_odds, int B, int n,
                             const PolicyTable& table, int exact_depth = -1) {
  const auto& dist = table.dist();
  auto child = [&](double l, int b, int m) -> Completion {
    if (exact_depth < 0) return table.completion_log(l, b, m);
    const StateSolution s = solve_state(l, b, m, table, exact_depth);
    return {s.pi0, s.pi1, s.irregular};
  };
  const double xc = table.canonical(x);
  const double s0 = dist.survival(World::bad, xc);
  const double s1 = dist.survival(World::good, xc);
  Completion out;
  if (s0 > 0.0 || s1 > 0.0) {
    const Completion inv =
        child(log_odds + std::log(dist.lr_upper_tail(xc)), B - 1, n - 1);
    out.pi0 += s0 * inv.pi0;
    out.pi1 += s1 * inv.pi1;
    out.irregular = out.irregular || inv.irregular;
  }
  if (s0 < 1.0 || s1 < 1.0) {
    const Completion dec =
        child(log_odds + std::log(dist.lr_lower_tail(xc)), B, n - 1);
    out.pi0 += (1.0 - s0) * dec.pi0;
    out.pi1 += (1.0 - s1) * dec.pi1;
    out.irregular = out.irregular || dec.irregular;
  }
  out.pi0 = std::clamp(out.pi0, 0.0, 1.0);
  out.pi1 = std::clamp(out.pi1, 0.0, 1.0);
  return out;
}

// Equilibrium threshold and completion probabilities at one state, using the
// table for all child states.
inline StateSolution solve_state(double log_odds, int B, int n,
                                 const PolicyTable& table, int refine = 2) {
  const auto& dist = table.dist();
  const double Q = dist.Q();
  const double L = std::exp(log_odds);
  StateSolution s;
  if (B <= 0) {
    s.sigma = 0.0;
    s.pi0 = s.pi1 = 1.0;
    s.candidates = 1;
    return s;
  }
  if (B > n) {
    s.sigma = 1.0;
    s.candidates = 1;
    return s;
  }
  if (B == 1) {
    const Completion c = last_mover_completion(dist, log_odds, n);
    s.sigma = 1.0 / (1.0 + L);
    s.pi0 = c.pi0;
    s.pi1 = c.pi1;
    s.candidates = 1;
    return s;
  }
  if (in_up_cascade(L, Q)) {
    s.sigma = 1.0 / (1.0 + L);
    s.pi0 = s.pi1 = 1.0;
    s.candidates = 1;
    return s;
  }
  if (in_down_cascade(L, B, Q)) {
    s.sigma = 1.0;
    s.candidates = 1;
    return s;
  }
  RootSet roots = find_roots(log_odds, B, n, table);
  const Selection sel = select_equilibrium(roots, log_odds, B, n, table, refine);
  const Completion c = recurrence(sel.chosen.x, log_odds, B, n, table,
                                  sel.refined ? refine - 1 : -1);
  s.sigma = sel.chosen.x;
  s.pi0 = c.pi0;
  s.pi1 = c.pi1;
  s.irregular = sel.irregular || c.irregular;
  s.candidates = roots.size();
  return s;
}

inline StateSolution solve_state(const GameState& g, const PolicyTable& table) {
  return solve_state(g.L.log_odds(), g.B, g.n, table);
}

inline Completion completion_prob(const GameState& g, const PolicyTable& table) {
  const StateSolution s = solve_state(g, table);
  return {s.pi0, s.pi1, s.irregular};
}

namespace detail {

// Cubic through f at nodes j0..j0+3, evaluated at grid position u (relative
// to j0).
inline double cubic_at(const std::vector<double>& f, std::size_t j0, double u) {
  return -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0 * f[j0] +
         u * (u - 2.0) * (u - 3.0) / 2.0 * f[j0 + 1] -
         u * (u - 1.0) * (u - 3.0) / 2.0 * f[j0 + 2] +
         u * (u - 1.0) * (u - 2.0) / 6.0 * f[j0 + 3];
}

inline constexpr double kBreakThreshold = 1e-7;
inline constexpr double kBreakDominance = 10.0;

}  // namespace detail

// Finds cells of a solved row where pi jumps or kinks (the selected
// equilibrium switches) and pins each break down by bisection on exact state
// solves.  A cell is flagged when the cubic extrapolations from both sides
// miss the node on the far side, and by far more than in the neighbouring
// cells.
inline void locate_breaks(PolicyTable& table, int B, int n) {
  PolicyRow& r = table.mutable_row(B, n);
  r.breaks.clear();
  if (B <= 1) return;
  const auto& grid = table.grid();
  const auto [first, last] = table.interior_nodes(B);
  if (last < first + 7) return;
  const auto& f1 = r.pi1;
  const auto& f2 = r.log_ratio;
  auto miss = [&](std::size_t j0, double u, std::size_t at) {
    const double e1 = std::abs(detail::cubic_at(f1, j0, u) - f1[at]);
    const double e2 = std::abs(detail::cubic_at(f2, j0, u) - f2[at]);
    return std::isnan(e2) ? e1 : std::max(e1, e2);
  };
  std::vector<double> score(last + 1, 0.0);
  for (std::size_t i = first + 3; i + 4 <= last; ++i) {
    score[i] = std::min(miss(i - 3, 4.0, i + 1), miss(i + 1, -1.0, i));
  }
  std::vector<std::size_t> flagged;
  for (std::size_t i = first + 3; i + 4 <= last; ++i) {
    const double around = std::max(score[i - 1], score[i + 1]);
    if (score[i] > detail::kBreakThreshold &&
        score[i] > detail::kBreakDominance * around) {
      flagged.push_back(i);
    }
  }
  if (flagged.empty()) return;
  std::vector<double> found(flagged.size());
  parallel_for(flagged.size(), [&](std::size_t k) {
    const std::size_t i = flagged[k];
    double lo = grid.log_odds(i), hi = grid.log_odds(i + 1);
    const double h = grid.step();
    for (int it = 0; it < 40; ++it) {
      const double m = 0.5 * (lo + hi);
      const StateSolution s = solve_state(m, B, n, table);
      const double rho = s.pi0 > 0.0 && s.pi1 > 0.0 ? std::log(s.pi0 / s.pi1)
                                                    : std::nan("");
      const double u = (m - grid.log_odds(i - 3)) / h;
      const double v = (m - grid.log_odds(i + 1)) / h;
      auto dist_to = [&](std::size_t j0, double w) {
        double d = std::abs(detail::cubic_at(f1, j0, w) - s.pi1);
        const double e = std::abs(detail::cubic_at(f2, j0, w) - rho);
        if (!std::isnan(e)) d += e;
        return d;
      };
      if (dist_to(i - 3, u) <= dist_to(i + 1, v)) {
        lo = m;
      } else {
        hi = m;
      }
    }
    found[k] = 0.5 * (lo + hi);
  });
  r.breaks = std::move(found);
  std::sort(r.breaks.begin(), r.breaks.end());
}

// Fills every reachable row, stage by stage in n; the grid points within a
// stage are independent.
inline PolicyTable backward_induction(const TypeDistribution& dist, int B0,
                                      int n0, const SolverOptions& opts = {}) {
  PolicyTable table(dist, B0, n0, opts);
  const auto& grid = table.grid();
  for (int n = 1; n <= n0; ++n) {
    for (int B = 1; B <= std::min(B0, n); ++B) {
      if (!table.reachable(B, n)) continue;
      PolicyRow& row = table.mutable_row(B, n);
      parallel_for(grid.size(), [&](std::size_t i) {
        const StateSolution s = solve_state(grid.log_odds(i), B, n, table);
        row.sigma[i] = s.sigma;
        row.pi0[i] = s.pi0;
        row.pi1[i] = s.pi1;
        row.irregular[i] = s.irregular ? 1 : 0;
        row.candidates[i] = static_cast<std::uint8_t>(
            std::min<std::size_t>(s.candidates, 255));
      });
    }
    for (int B = 1; B <= std::min(B0, n); ++B) {
      if (!table.reachable(B, n)) continue;
      table.mutable_row(B, n).finalize();
      locate_breaks(table, B, n);
    }
  }
  return table;
}

inline PolicyTable backward_induction(const QualitySpec& spec, int B0, int n0,
                                      const SolverOptions& opts = {}) {
  return backward_induction(TypeDistribution(spec), B0, n0, opts);
}

// Selected threshold at an arbitrary state of a solved table.
inline double policy_threshold(const PolicyTable& table, double L, int B,
                               int n) {
  return solve_state(std::log(L), B, n, table).sigma;
}

}  // namespace cascadefund
