#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "cascadefund/cascade.hpp"
#include "cascadefund/cascade_bounds.hpp"
#include "cascadefund/policy_table.hpp"
#include "cascadefund/type_distribution.hpp"

namespace cascadefund {

// r(x) = (1-F0(x))/(1-F1(x)), the factor a screening investor contributes to
// everyone else's indifference condition.  Defined for raw thresholds in (0, 1).
inline double screening_ratio(const TypeDistribution& dist, double x) {
  return 1.0 / dist.lr_upper_tail(
                   std::clamp(x, dist.support_low(), dist.support_high()));
}

// J(x) = (x/(1-x)) (1-F0(x))/(1-F1(x))
inline double hazard_J(const TypeDistribution& dist, double x) {
  return x / (1.0 - x) * screening_ratio(dist, x);
}

struct MonotoneSegment {
  double lo;
  double hi;
  bool increasing;
};

// Pieces of [1-Q, Q] on which J is strictly monotone.
inline std::vector<MonotoneSegment> J_monotone_segments(
    const TypeDistribution& dist, std::size_t points = 4001) {
  const double a = dist.support_low(), b = dist.support_high();
  std::vector<double> xs;
  xs.reserve(points + 2);
  for (std::size_t k = 0; k < points; ++k) {
    xs.push_back(a + (b - a) * static_cast<double>(k) /
                         static_cast<double>(points - 1));
  }
  xs.back() = b;
  for (double e : {dist.gap_low(), dist.gap_high()}) {
    if (e > a && e < b) xs.push_back(e);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> logj(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    logj[k] = std::log(hazard_J(dist, xs[k]));
  }
  std::vector<MonotoneSegment> out;
  int dir = 0;
  double start = xs.front();
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double d = logj[k + 1] - logj[k];
    if (std::abs(d) <= 1e-13) continue;
    const int s = d > 0.0 ? 1 : -1;
    if (dir == 0) {
      dir = s;
    } else if (s != dir) {
      out.push_back({start, xs[k], dir > 0});
      start = xs[k];
      dir = s;
    }
  }
  out.push_back({start, xs.back(), dir >= 0});
  return out;
}

// A simultaneous-move threshold profile.  Thresholds are raw indifference
// values; anything at or below 1-Q means investing for every type.
struct ThresholdProfile {
  TypeDistribution dist;
  double L = 1.0;
  std::vector<double> x;

  std::size_t size() const { return x.size(); }
};

inline Completion completion_prob_unanimity(const ThresholdProfile& p) {
  Completion c{1.0, 1.0, false};
  for (double xi : p.x) {
    const double xc =
        std::clamp(xi, p.dist.support_low(), p.dist.support_high());
    c.pi0 *= p.dist.survival(World::bad, xc);
    c.pi1 *= p.dist.survival(World::good, xc);
  }
  return c;
}

inline double profile_utility(const ThresholdProfile& p) {
  const Completion c = completion_prob_unanimity(p);
  const double lambda = p.L / (1.0 + p.L);
  return lambda * c.pi1 - (1.0 - lambda) * c.pi0;
}

// Largest |L x_i/(1-x_i) - prod_{k != i} r(x_k)| over the players.
inline double profile_residual(const ThresholdProfile& p) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double prod = 1.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k != i) prod *= screening_ratio(p.dist, p.x[k]);
    }
    worst = std::max(worst, std::abs(p.L * p.x[i] / (1.0 - p.x[i]) - prod));
  }
  return worst;
}

inline double profile_discriminator(const ThresholdProfile& p, std::size_t i) {
  const auto& d = p.dist;
  auto clamp = [&](double x) {
    return std::clamp(x, d.support_low(), d.support_high());
  };
  double rest1 = 1.0, rest0 = 1.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k == i) continue;
    rest1 *= d.survival(World::good, clamp(p.x[k]));
    rest0 *= d.survival(World::bad, clamp(p.x[k]));
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j == i) continue;
    const double xj = clamp(p.x[j]);
    best = std::max(best, p.L * d.survival(World::good, xj) * rest1 -
                              d.survival(World::bad, xj) * rest0);
  }
  return best;
}

// Reorders the profile by descending discriminator.
inline void order_by_discriminator(ThresholdProfile& p) {
  if (p.size() < 2) return;
  std::vector<std::pair<double, double>> keyed;
  for (std::size_t i = 0; i < p.size(); ++i) {
    keyed.emplace_back(profile_discriminator(p, i), p.x[i]);
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; i < p.size(); ++i) p.x[i] = keyed[i].second;
}

// Raw root of L x/(1-x) = r(x)^(n-1).  The left side increases and the right
// side does not, so the root is unique.
inline double symmetric_threshold_raw(double L, const TypeDistribution& dist,
                                      int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(L > 0.0)) throw std::domain_error("likelihood must be positive");
  if (n == 1) return 1.0 / (1.0 + L);
  const double logL = std::log(L);
  auto f = [&](double z) {
    const double x = 1.0 / (1.0 + std::exp(-z));
    return logL + z - (n - 1) * std::log(screening_ratio(dist, x));
  };
  double lo = -logL - 1.0 + (n - 1) * std::log((1.0 - dist.Q()) / dist.Q());
  double hi = -logL + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double z = 0.5 * (lo + hi);
  return 1.0 / (1.0 + std::exp(-z));
}

inline double symmetric_threshold(double L, const TypeDistribution& dist,
                                  int n) {
  return std::clamp(symmetric_threshold_raw(L, dist, n), dist.support_low(),
                    dist.support_high());
}

namespace detail {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double log_J_at(const TypeDistribution& dist, double z) {
  return z + std::log(screening_ratio(dist, logistic(z)));
}

// A strictly monotone branch of log J in logit coordinates, tabulated for
// fast bracketing of its inverse.
struct JBranch {
  std::vector<double> z;
  std::vector<double> logj;
  bool increasing = true;
  double c_lo = 0.0;  // range of log J on the branch
  double c_hi = 0.0;

  // z with log J(z) = c, or NaN outside the range.
  double inverse(const TypeDistribution& dist, double c) const {
    if (c < c_lo || c > c_hi) return std::numeric_limits<double>::quiet_NaN();
    std::size_t k;
    if (increasing) {
      auto it = std::lower_bound(logj.begin(), logj.end(), c);
      k = static_cast<std::size_t>(it - logj.begin());
    } else {
      auto it = std::lower_bound(logj.begin(), logj.end(), c,
                                 [](double a, double b) { return a > b; });
      k = static_cast<std::size_t>(it - logj.begin());
    }
    if (k == 0) return z.front();
    if (k >= z.size()) return z.back();
    double a = z[k - 1], b = z[k];
    double fa = logj[k - 1] - c, fb = logj[k] - c;
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    // Illinois variant of regula falsi.
    int side = 0;
    for (int it = 0; it < 100; ++it) {
      const double m = (a * fb - b * fa) / (fb - fa);
      const double fm = log_J_at(dist, m) - c;
      if (fm == 0.0 || std::abs(b - a) < 1e-15 * std::max(1.0, std::abs(m))) {
        return m;
      }
      if ((fm < 0.0) == (fb < 0.0)) {
        b = m;
        fb = fm;
        if (side == -1) fa *= 0.5;
        side = -1;
      } else {
        a = m;
        fa = fm;
        if (side == 1) fb *= 0.5;
        side = 1;
      }
    }
    return (a * fb - b * fa) / (fb - fa);
  }
};

inline double logit(double x) { return std::log(x / (1.0 - x)); }

inline JBranch make_branch(const TypeDistribution& dist, double z_lo,
                           double z_hi, bool increasing,
                           std::size_t points = 256) {
  JBranch br;
  br.increasing = increasing;
  br.z.resize(points);
  br.logj.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double z = z_lo + (z_hi - z_lo) * static_cast<double>(k) /
                                static_cast<double>(points - 1);
    br.z[k] = z;
    br.logj[k] = log_J_at(dist, z);
  }
  // Enforce monotone table values against rounding at flat ends.
  for (std::size_t k = 1; k < points; ++k) {
    if (increasing) {
      br.logj[k] = std::max(br.logj[k], br.logj[k - 1]);
    } else {
      br.logj[k] = std::min(br.logj[k], br.logj[k - 1]);
    }
  }
  br.c_lo = std::min(br.logj.front(), br.logj.back());
  br.c_hi = std::max(br.logj.front(), br.logj.back());
  return br;
}

// Branches of log J over raw logits [z_min, z_max].  Outside the support J is
// increasing, so the outer pieces extend the neighbouring support segment when
// it also increases.
inline std::vector<JBranch> J_branches(
    const TypeDistribution& dist, const std::vector<MonotoneSegment>& segs,
    double z_min, double z_max) {
  struct Piece {
    double lo, hi;
    bool inc;
  };
  std::vector<Piece> pieces;
  const double zl = logit(dist.support_low()), zh = logit(dist.support_high());
  for (const auto& s : segs) pieces.push_back({logit(s.lo), logit(s.hi), s.increasing});
  if (z_min < zl) {
    if (pieces.front().inc) {
      pieces.front().lo = z_min;
    } else {
      pieces.insert(pieces.begin(), {z_min, zl, true});
    }
  }
  if (z_max > zh) {
    if (pieces.back().inc) {
      pieces.back().hi = z_max;
    } else {
      pieces.push_back({zh, z_max, true});
    }
  }
  std::vector<JBranch> out;
  for (const auto& p : pieces) {
    if (p.hi > p.lo) out.push_back(make_branch(dist, p.lo, p.hi, p.inc));
  }
  return out;
}

inline void compositions(int n, std::size_t parts, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(n);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int m = n; m >= 0; --m) {
    cur.push_back(m);
    compositions(n - m, parts, cur, out);
    cur.pop_back();
  }
}

inline bool same_profile(const std::vector<double>& a,
                         const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

}  // namespace detail

struct ProfileSearchOptions {
  std::size_t level_points = 1024;  // scan points in log J per composition
  double residual_tolerance = 1e-9;
  std::size_t max_compositions = 5000;
};

// All threshold profiles solving the simultaneous indifference system at L.
// Every solution puts all players on one level set J(x_i) = c, so the search
// runs over c for each way of distributing the players among the monotone
// branches of J.  The symmetric profile is always included.
inline std::vector<ThresholdProfile> asymmetric_profiles(
    double L, const TypeDistribution& dist, int n,
    const ProfileSearchOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::vector<ThresholdProfile> out;
  const double tol = opts.residual_tolerance * std::max(1.0, L);
  auto add = [&](std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    for (const auto& p : out) {
      auto sorted = p.x;
      std::sort(sorted.begin(), sorted.end());
      if (detail::same_profile(sorted, xs, 1e-9)) return;
    }
    ThresholdProfile p{dist, L, std::move(xs)};
    if (profile_residual(p) > tol) return;
    order_by_discriminator(p);
    out.push_back(std::move(p));
  };

  const double xs = symmetric_threshold_raw(L, dist, n);
  add(std::vector<double>(static_cast<std::size_t>(n), xs));
  if (n == 1) return out;

  const double Q = dist.Q();
  const double logL = std::log(L);
  const double z_min = -logL + (n - 1) * std::log((1.0 - Q) / Q) - 2.0;
  const double z_max = -logL + 2.0;
  const auto segs = J_monotone_segments(dist, 2001);
  const auto branches = detail::J_branches(dist, segs, z_min, z_max);
  if (branches.size() < 2) return out;

  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  detail::compositions(n, branches.size(), cur, comps);
  if (comps.size() > opts.max_compositions) {
    std::vector<std::vector<int>> kept;
    for (auto& c : comps) {
      int used = 0;
      for (int m : c) used += m > 0;
      if (used <= 2) kept.push_back(std::move(c));
    }
    comps = std::move(kept);
  }

  for (const auto& m : comps) {
    int used = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < m.size(); ++s) {
      if (m[s] == 0) continue;
      ++used;
      lo = std::max(lo, branches[s].c_lo);
      hi = std::min(hi, branches[s].c_hi);
    }
    if (used < 2 || !(hi > lo)) continue;

    auto zs_at = [&](double c, std::vector<double>& zs) {
      zs.assign(m.size(), 0.0);
      for (std::size_t s = 0; s < m.size(); ++s) {
        if (m[s] > 0) zs[s] = branches[s].inverse(dist, c);
      }
    };
    std::vector<double> zs;
    auto phi = [&](double c) {
      zs_at(c, zs);
      double v = -c - logL;
      for (std::size_t s = 0; s < m.size(); ++s) {
        if (m[s] > 0) {
          v += m[s] * std::log(screening_ratio(dist, detail::logistic(zs[s])));
        }
      }
      return v;
    };
    auto emit = [&](double c) {
      zs_at(c, zs);
      std::vector<double> prof;
      for (std::size_t s = 0; s < m.size(); ++s) {
        for (int k = 0; k < m[s]; ++k) prof.push_back(detail::logistic(zs[s]));
      }
      add(std::move(prof));
    };

    const std::size_t K = opts.level_points;
    double c_prev = lo, f_prev = phi(lo);
    if (f_prev == 0.0) emit(lo);
    for (std::size_t k = 1; k < K; ++k) {
      const double c = k + 1 == K ? hi
                                  : lo + (hi - lo) * static_cast<double>(k) /
                                             static_cast<double>(K - 1);
      const double f = phi(c);
      if (f == 0.0) {
        emit(c);
      } else if (f_prev != 0.0 && (f < 0.0) != (f_prev < 0.0)) {
        double a = c_prev, b = c, fa = f_prev;
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a));
             ++it) {
          const double mid = 0.5 * (a + b);
          const double fm = phi(mid);
          if (fm == 0.0) {
            a = b = mid;
            break;
          }
          if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        }
        emit(0.5 * (a + b));
      }
      c_prev = c;
      f_prev = f;
    }
  }
  return out;
}

// Sequential equilibrium of the unanimity game: thresholds in play order.
struct UnanimitySolution {
  double L = 1.0;
  std::vector<double> x;
  double pi0 = 0.0;
  double pi1 = 0.0;
  double utility = 0.0;
  bool irregular = false;
  std::size_t candidates = 0;  // first-mover thresholds that were playable

  ThresholdProfile profile(const TypeDistribution& dist) const {
    return {dist, L, x};
  }
};

namespace detail {

struct UnanimityCache {
  std::map<std::pair<int, double>, UnanimitySolution> memo;
};

inline UnanimitySolution solve_unanimity_impl(double L,
                                              const TypeDistribution& dist,
                                              int n, double tie_tol,
                                              const ProfileSearchOptions& opts,
                                              UnanimityCache& cache) {
  const auto key = std::make_pair(n, L);
  if (auto it = cache.memo.find(key); it != cache.memo.end()) return it->second;

  UnanimitySolution sol;
  sol.L = L;
  if (n == 1) {
    sol.x = {1.0 / (1.0 + L)};
    sol.candidates = 1;
  } else {
    const auto profiles = asymmetric_profiles(L, dist, n, opts);
    struct Cand {
      double v;
      UnanimitySolution sub;
      double U;
      double p0, p1;  // completion of the players after the first
    };
    std::vector<Cand> cands;
    const double tol = opts.residual_tolerance * std::max(1.0, L);
    const double lo = dist.support_low(), hi = dist.support_high();
    for (const auto& p : profiles) {
      for (double v : p.x) {
        bool seen = false;
        for (const auto& c : cands) {
          const bool both_low = c.v <= lo && v <= lo;
          const bool both_high = c.v >= hi && v >= hi;
          if (both_low || both_high || std::abs(c.v - v) <= 1e-9) seen = true;
        }
        if (seen) continue;
        const double vc = std::clamp(v, lo, hi);
        const double Lp = L * dist.lr_upper_tail(vc);
        UnanimitySolution sub =
            solve_unanimity_impl(Lp, dist, n - 1, tie_tol, opts, cache);
        double prod = 1.0, p0 = 1.0, p1 = 1.0;
        for (double xk : sub.x) {
          prod *= screening_ratio(dist, xk);
          const double xc = std::clamp(xk, lo, hi);
          p0 *= dist.survival(World::bad, xc);
          p1 *= dist.survival(World::good, xc);
        }
        if (std::abs(L * v / (1.0 - v) - prod) > tol) continue;
        const double lambda = L / (1.0 + L);
        const double U = lambda * dist.survival(World::good, vc) * p1 -
                         (1.0 - lambda) * dist.survival(World::bad, vc) * p0;
        cands.push_back({v, std::move(sub), U, p0, p1});
      }
    }
    if (cands.empty()) {
      throw ModelError("no playable unanimity profile at L=" +
                       std::to_string(L) + ", n=" + std::to_string(n));
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < cands.size(); ++k) {
      if (cands[k].U > cands[best].U) best = k;
    }
    std::vector<std::size_t> tied;
    auto close = [&](double a, double b) {
      const double s = std::max({std::abs(a), std::abs(b), 1e-300});
      return std::abs(a - b) <= tie_tol * s + 1e-15;
    };
    for (std::size_t k = 0; k < cands.size(); ++k) {
      if (close(cands[k].U, cands[best].U)) tied.push_back(k);
    }
    std::size_t chosen = best;
    bool irregular = false;
    if (tied.size() > 1) {
      std::vector<double> D(cands.size(), -std::numeric_limits<double>::infinity());
      for (std::size_t i : tied) {
        for (std::size_t j : tied) {
          if (i == j) continue;
          const double xj = std::clamp(cands[j].v, lo, hi);
          D[i] = std::max(D[i], L * cands[i].p1 * dist.survival(World::good, xj) -
                                    cands[i].p0 * dist.survival(World::bad, xj));
        }
      }
      chosen = tied.front();
      for (std::size_t i : tied) {
        if (D[i] > D[chosen]) chosen = i;
      }
      for (std::size_t i : tied) {
        if (i != chosen && close(D[i], D[chosen])) irregular = true;
      }
    }
    const auto& c = cands[chosen];
    sol.x.push_back(c.v);
    sol.x.insert(sol.x.end(), c.sub.x.begin(), c.sub.x.end());
    sol.irregular = irregular || c.sub.irregular;
    sol.candidates = cands.size();
  }
  const Completion pc = completion_prob_unanimity({dist, L, sol.x});
  sol.pi0 = pc.pi0;
  sol.pi1 = pc.pi1;
  sol.utility = profile_utility({dist, L, sol.x});
  cache.memo.emplace(key, sol);
  return sol;
}

}  // namespace detail

// Thresholds played along the all-invest path of the B = n game at prior L.
// Player 1 chooses among the first-mover thresholds of all simultaneous
// profiles that are consistent with the solved subgame after her investment.
inline UnanimitySolution solve_unanimity(double L, const TypeDistribution& dist,
                                         int n, double tie_tolerance = 1e-9,
                                         const ProfileSearchOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw std::domain_error("likelihood must be positive and finite");
  }
  detail::UnanimityCache cache;
  return detail::solve_unanimity_impl(L, dist, n, tie_tolerance, opts, cache);
}

// Delegating: herding on investment while not in a cascade.
inline bool is_delegating(const TypeDistribution& dist, double L, int n,
                          double x) {
  const double Q = dist.Q();
  if (in_up_cascade(L, Q) || in_down_cascade(L, n, Q)) return false;
  return x <= dist.support_low();
}

// Every threshold lies weakly below the single-player optimum 1/(1+L).  Except
// for the last player, the inequality is strict unless every other player
// herds on investment or the prior is a cascade.
inline bool social_insurance_check(const ThresholdProfile& p) {
  const auto& d = p.dist;
  const double single = 1.0 / (1.0 + p.L);
  const int n = static_cast<int>(p.size());
  const bool cascade = in_up_cascade(p.L, d.Q()) || in_down_cascade(p.L, n, d.Q());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.x[i] > single + 1e-9) return false;
    if (cascade || i + 1 == p.size()) continue;
    bool others_herd = true;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k != i && p.x[k] > d.support_low()) others_herd = false;
    }
    if (!others_herd && !(p.x[i] < single)) return false;
  }
  return true;
}

// (1-x)[1-F1(x)]^2 - x[1-F0(x)]^2 - (1-2x): positive where an earlier player
// out-discriminates a later one when delegating.
inline double delegation_order_margin(const TypeDistribution& dist, double x) {
  const double s1 = dist.survival(World::good, x);
  const double s0 = dist.survival(World::bad, x);
  return (1.0 - x) * s1 * s1 - x * s0 * s0 - (1.0 - 2.0 * x);
}

struct DelegationPoint {
  double L = 0.0;
  std::vector<double> x;
  std::vector<bool> delegating;
};

struct DelegationReport {
  bool startable = false;
  bool earliest_only = false;
  bool latest_only = false;
  std::vector<Interval> witness;
  int n = 2;
  std::vector<DelegationPoint> pattern;
  bool item2_holds = true;  // any delegator forces all thresholds <= 1/2
};

inline DelegationReport delegation_analysis(const TypeDistribution& dist,
                                            int n = 2,
                                            std::vector<double> L_points = {}) {
  DelegationReport rep;
  rep.n = n;
  rep.witness = cascade_witness_set(dist);
  rep.startable = !rep.witness.empty();
  if (rep.startable) {
    bool all_pos = true, all_neg = true;
    for (const auto& w : rep.witness) {
      const std::size_t K = 400;
      for (std::size_t k = 0; k <= K; ++k) {
        const double x = w.lo + (w.hi - w.lo) * static_cast<double>(k) /
                                    static_cast<double>(K);
        const double m = delegation_order_margin(dist, x);
        if (!(m > 0.0)) all_pos = false;
        if (!(m < 0.0)) all_neg = false;
      }
    }
    rep.earliest_only = all_pos;
    rep.latest_only = all_neg;
  }
  if (L_points.empty()) {
    const std::size_t K = 60;
    for (std::size_t k = 0; k < K; ++k) {
      L_points.push_back(std::exp(std::log(0.05) + (std::log(5.0) - std::log(0.05)) *
                                                       static_cast<double>(k) /
                                                       static_cast<double>(K - 1)));
    }
  }
  for (double L : L_points) {
    const auto sol = solve_unanimity(L, dist, n);
    DelegationPoint pt;
    pt.L = L;
    pt.x = sol.x;
    bool any = false;
    for (double x : sol.x) {
      const bool d = is_delegating(dist, L, n, x);
      pt.delegating.push_back(d);
      any = any || d;
    }
    if (any) {
      for (double x : sol.x) {
        if (x > 0.5 + 1e-9) rep.item2_holds = false;
      }
    }
    rep.pattern.push_back(std::move(pt));
  }
  return rep;
}

}  // namespace cascadefund
