#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "cascadefund/cascade_bounds.hpp"
#include "cascadefund/policy_table.hpp"
#include "cascadefund/type_distribution.hpp"

namespace cascadefund {

// True iff even the highest type prefers declining.
inline bool herd_decline_holds(double L, int B, int n, const PolicyTable& table) {
  const double Q = table.dist().Q();
  const double top = L * Q / (1.0 - Q);
  const Completion c = table.completion(top, B - 1, n - 1);
  if (!(c.pi1 > 0.0)) return true;
  return top <= c.pi0 / c.pi1 + kCascadeSlack;
}

// Necessary condition for every type to invest.
inline bool herd_invest_necessary(double L, int B, int n,
                                  const PolicyTable& table) {
  const double Q = table.dist().Q();
  const Completion c = table.completion(L, B - 1, n - 1);
  if (!(c.pi1 > 0.0)) return false;
  return L * (1.0 - Q) / Q >= c.pi0 / c.pi1 - kCascadeSlack;
}

// H(x) = ((1-x)/x) (1-F1(x))/(1-F0(x)).  A last mover at the likelihood that
// makes x her threshold starts an up-cascade by investing iff H(x) >= Q/(1-Q).
inline double cascade_trigger(const TypeDistribution& dist, double x) {
  return (1.0 - x) / x * dist.lr_upper_tail(x);
}

struct Interval {
  double lo;
  double hi;
};

namespace detail {

// Scan points over (1-Q, 1/2], including the lower-support edge 1-R.
inline std::vector<double> trigger_scan(const TypeDistribution& dist,
                                        std::size_t points) {
  const double a = dist.support_low(), b = 0.5;
  std::vector<double> xs;
  xs.reserve(points + 2);
  for (std::size_t k = 1; k <= points; ++k) {
    xs.push_back(a + (b - a) * static_cast<double>(k) /
                         static_cast<double>(points));
  }
  const double edge = dist.gap_low();
  if (edge > a && edge < b) xs.push_back(edge);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

// Boundary of {H >= bound} between a point outside (lo) and inside (hi).
inline double refine_trigger(const TypeDistribution& dist, double lo, double hi,
                             double bound) {
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cascade_trigger(dist, mid) >= bound) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace detail

// Witness intervals W = {x in (1-Q, 1/2): H(x) >= Q/(1-Q)}, endpoints refined
// by bisection.
inline std::vector<Interval> cascade_witness_set(const TypeDistribution& dist,
                                                 std::size_t points = 2000) {
  const double bound = up_cascade_bound(dist.Q());
  const auto xs = detail::trigger_scan(dist, points);
  std::vector<Interval> out;
  bool inside = false;
  double prev = dist.support_low();
  for (double x : xs) {
    const bool ok = cascade_trigger(dist, x) >= bound;
    if (ok && !inside) {
      const double lo = prev <= dist.support_low()
                            ? prev
                            : detail::refine_trigger(dist, prev, x, bound);
      out.push_back({lo, x});
      inside = true;
    } else if (ok) {
      out.back().hi = x;
    } else if (inside) {
      // The interval ends between prev (inside) and x (outside).
      double lo = prev, hi = x;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cascade_trigger(dist, mid) >= bound) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.back().hi = lo;
      inside = false;
    }
    prev = x;
  }
  return out;
}

struct StartResult {
  bool startable = false;
  std::optional<double> witness;
};

inline StartResult cascade_startable(const TypeDistribution& dist,
                                     std::size_t points = 2000) {
  const auto w = cascade_witness_set(dist, points);
  if (w.empty()) return {};
  return {true, w.front().lo};
}

// Smallest R for which uniform qualities on [R, Q] let cascades start.
inline double min_R_for_cascades(double Q) {
  check_top_quality(Q);
  return 1.0 / (1.0 + std::sqrt((1.0 - Q) * (1.0 + Q) / (Q * (2.0 - Q))));
}

struct CascadeReport {
  double up_cascade_bound = 0.0;
  double down_cascade_bound = 0.0;
  double learning_bound = 0.0;
  bool startable = false;
  std::optional<double> witness_x;
};

inline CascadeReport analyze_cascades(const TypeDistribution& dist, int B) {
  CascadeReport r;
  const double Q = dist.Q();
  r.up_cascade_bound = up_cascade_bound(Q);
  r.down_cascade_bound = down_cascade_bound(B, Q);
  r.learning_bound = learning_bound(Q);
  const auto s = cascade_startable(dist);
  r.startable = s.startable;
  r.witness_x = s.witness;
  return r;
}

}  // namespace cascadefund
