#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cascadefund/cascade_bounds.hpp"
#include "cascadefund/grid.hpp"
#include "cascadefund/type_distribution.hpp"

namespace cascadefund {

// Raised when the solver reaches a state the model rules out.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Interpolation { linear, cubic };

inline const char* to_string(Interpolation i) {
  return i == Interpolation::linear ? "linear" : "cubic";
}

struct SolverOptions {
  std::size_t grid_size = 2001;
  std::size_t scan_points = 4001;
  // Indifference residual accepted for a root, scaled by max(1, L).
  double root_tolerance = 1e-9;
  // Relative tolerance for utility and discriminator ties.
  double tie_tolerance = 1e-9;
  double bisection_tolerance = 1e-12;
  Interpolation interpolation = Interpolation::cubic;

  void validate() const {
    if (grid_size < 4) throw std::invalid_argument("grid_size must be >= 4");
    if (scan_points < 3) throw std::invalid_argument("scan_points must be >= 3");
    if (!(root_tolerance > 0.0) || !(tie_tolerance > 0.0) ||
        !(bisection_tolerance > 0.0)) {
      throw std::invalid_argument("tolerances must be positive");
    }
  }
};

struct Completion {
  double pi0 = 0.0;
  double pi1 = 0.0;
  bool irregular = false;
};

// Completion probability of a B = 1 state with m players left.  Each player
// plays 1/(1+L); an investment completes the raise, a decline passes the
// updated likelihood on.  Exact, no grid involved.
inline Completion last_mover_completion(const TypeDistribution& dist,
                                        double log_odds, int m) {
  Completion c;
  double weight0 = 1.0, weight1 = 1.0;
  double u = log_odds;
  for (int k = 0; k < m; ++k) {
    const double x = 1.0 / (1.0 + std::exp(u));
    const double s0 = dist.survival(World::bad, x);
    const double s1 = dist.survival(World::good, x);
    c.pi0 += weight0 * s0;
    c.pi1 += weight1 * s1;
    weight0 *= 1.0 - s0;
    weight1 *= 1.0 - s1;
    if (weight0 == 0.0 && weight1 == 0.0) break;
    u += std::log(dist.lr_lower_tail(x));
  }
  c.pi0 = std::clamp(c.pi0, 0.0, 1.0);
  c.pi1 = std::clamp(c.pi1, 0.0, 1.0);
  return c;
}

// Thresholds scanned when looking for indifference roots, with the tail
// quantities that do not depend on the state.
struct ScanCache {
  std::vector<double> x;
  std::vector<double> log_lr_upper;  // log of (1-F1)/(1-F0)
  std::vector<double> odds;          // x / (1 - x)
  std::vector<double> s0;
  std::vector<double> s1;

  ScanCache(const TypeDistribution& dist, std::size_t points) {
    x.resize(points);
    log_lr_upper.resize(points);
    odds.resize(points);
    s0.resize(points);
    s1.resize(points);
    const double lo = dist.support_low(), hi = dist.support_high();
    for (std::size_t k = 0; k < points; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(points - 1);
      const double xk = k + 1 == points ? hi : lo + t * (hi - lo);
      x[k] = xk;
      log_lr_upper[k] = std::log(dist.lr_upper_tail(xk));
      odds[k] = xk / (1.0 - xk);
      s0[k] = dist.survival(World::bad, xk);
      s1[k] = dist.survival(World::good, xk);
    }
  }
};

struct PolicyRow {
  int B = 0;
  int n = 0;
  std::vector<double> sigma;  // indifference threshold, not clamped
  std::vector<double> pi0;
  std::vector<double> pi1;
  std::vector<std::uint8_t> irregular;
  std::vector<std::uint8_t> candidates;  // playable roots found
  std::vector<double> log_ratio;         // log(pi0 / pi1), set by finalize()
  std::vector<double> breaks;            // log-odds where pi jumps or kinks
  bool filled = false;

  void finalize() {
    log_ratio.resize(pi0.size());
    for (std::size_t i = 0; i < pi0.size(); ++i) {
      log_ratio[i] = pi0[i] > 0.0 && pi1[i] > 0.0
                         ? std::log(pi0[i] / pi1[i])
                         : std::numeric_limits<double>::quiet_NaN();
    }
    filled = true;
  }
};

// Equilibrium thresholds and completion probabilities on a likelihood grid,
// one row per (B, n) reachable from (B0, n0).
class PolicyTable {
 public:
  PolicyTable(TypeDistribution dist, int B0, int n0, SolverOptions opts = {})
      : dist_(std::move(dist)),
        B0_(B0),
        n0_(n0),
        opts_(opts),
        grid_(LikelihoodGrid::for_game(dist_.Q(), std::max(B0, 1),
                                       opts.grid_size)),
        scan_(dist_, opts.scan_points) {
    opts_.validate();
    if (!(B0 >= 1 && B0 <= n0 && n0 <= kMaxPlayers)) {
      throw std::invalid_argument(
          "policy table needs 1 <= B0 <= n0 <= 50 (got B0=" +
          std::to_string(B0) + ", n0=" + std::to_string(n0) + ")");
    }
    rows_.resize(static_cast<std::size_t>(B0_) * (n0_ + 1));
    for (int B = 1; B <= B0_; ++B) {
      for (int n = B; n <= n0_; ++n) {
        if (!reachable(B, n)) continue;
        auto& r = slot(B, n);
        r.B = B;
        r.n = n;
        r.sigma.assign(grid_.size(), 0.0);
        r.pi0.assign(grid_.size(), 0.0);
        r.pi1.assign(grid_.size(), 0.0);
        r.irregular.assign(grid_.size(), 0);
        r.candidates.assign(grid_.size(), 0);
      }
    }
  }

  static constexpr int kMaxPlayers = 50;

  const TypeDistribution& dist() const { return dist_; }
  const LikelihoodGrid& grid() const { return grid_; }
  const SolverOptions& options() const { return opts_; }
  const ScanCache& scan() const { return scan_; }
  int B0() const { return B0_; }
  int n0() const { return n0_; }

  // Rows that play can reach from (B0, n0): investments still needed never
  // exceed B0, and declines never exceed n0 - B0.
  bool reachable(int B, int n) const {
    return B >= 1 && B <= B0_ && n >= B && n <= n0_ && n - B <= n0_ - B0_;
  }

  bool has_row(int B, int n) const {
    return reachable(B, n) && slot(B, n).filled;
  }

  const PolicyRow& row(int B, int n) const {
    if (!reachable(B, n)) {
      throw ModelError("no policy row for B=" + std::to_string(B) +
                       ", n=" + std::to_string(n));
    }
    return slot(B, n);
  }

  PolicyRow& mutable_row(int B, int n) {
    if (!reachable(B, n)) {
      throw ModelError("no policy row for B=" + std::to_string(B) +
                       ", n=" + std::to_string(n));
    }
    return slot(B, n);
  }

  // Rows in solve order: n ascending, then B ascending.
  std::vector<const PolicyRow*> rows() const {
    std::vector<const PolicyRow*> out;
    for (int n = 1; n <= n0_; ++n) {
      for (int B = 1; B <= std::min(B0_, n); ++B) {
        if (reachable(B, n)) out.push_back(&slot(B, n));
      }
    }
    return out;
  }

  // Threshold clamped to the type support: everything below 1 - Q is herd
  // investment, everything above Q herd decline.
  double canonical(double x) const {
    return std::clamp(x, dist_.support_low(), dist_.support_high());
  }

  Completion completion(double L, int B, int n) const {
    return completion_log(std::log(L), B, n);
  }

  // pi_w(L, B, n).  Base cases, B = 1 and the cascade regions are exact; other
  // states interpolate the stored row in log-odds.
  Completion completion_log(double log_odds, int B, int n) const {
    if (B <= 0) return {1.0, 1.0, false};
    if (B > n) return {0.0, 0.0, false};
    if (B == 1) return last_mover_completion(dist_, log_odds, n);
    if (log_odds >= log_up_ - kCascadeSlack) return {1.0, 1.0, false};
    if (log_odds <= B * log_down_unit_ + kCascadeSlack) return {0.0, 0.0, false};
    const auto& r = row(B, n);
    if (!r.filled) {
      throw ModelError("policy row B=" + std::to_string(B) +
                       ", n=" + std::to_string(n) + " not solved yet");
    }
    return interpolate(r, log_odds);
  }

  // Nodes strictly between the cascade edges of a row with B investments
  // needed.  Stencils stay inside this range, so the kinks at the cascade
  // edges are never interpolated across.
  std::pair<std::size_t, std::size_t> interior_nodes(int B) const {
    const double lo = B * log_down_unit_ + kCascadeSlack;
    const double hi = log_up_ - kCascadeSlack;
    const double size = static_cast<double>(grid_.size() - 1);
    const double a = std::clamp(std::floor(grid_.position(lo)) + 1.0, 0.0, size);
    const double b = std::clamp(std::ceil(grid_.position(hi)) - 1.0, 0.0, size);
    std::size_t first = static_cast<std::size_t>(a);
    std::size_t last = static_cast<std::size_t>(b);
    while (first < last && !(grid_.log_odds(first) > lo)) ++first;
    while (last > first && !(grid_.log_odds(last) < hi)) --last;
    return {first, last};
  }

 private:
  // pi1 and log(pi0/pi1) interpolated in log-odds; pi0 follows from the
  // ratio, which stays smooth where both probabilities vanish together.
  // Stencils do not cross the row's breakpoints.
  Completion interpolate(const PolicyRow& r, double log_odds) const {
    auto [first, last] = interior_nodes(r.B);
    if (!r.breaks.empty()) {
      const auto it = std::upper_bound(r.breaks.begin(), r.breaks.end(), log_odds);
      const double size = static_cast<double>(grid_.size() - 1);
      if (it != r.breaks.begin()) {
        const double b = *(it - 1);
        std::size_t a = static_cast<std::size_t>(
            std::clamp(std::floor(grid_.position(b)), 0.0, size));
        while (a <= last && !(grid_.log_odds(a) > b)) ++a;
        first = std::max(first, a);
      }
      if (it != r.breaks.end()) {
        const double b = *it;
        std::size_t a = static_cast<std::size_t>(
            std::clamp(std::ceil(grid_.position(b)), 0.0, size));
        while (a > 0 && !(grid_.log_odds(a) < b)) --a;
        last = std::min(last, a);
      }
      if (last < first) {
        // No node on this side of the break: take the nearest one.
        const std::size_t near = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::llround(std::clamp(
                grid_.position(log_odds), 0.0, size))),
            std::min(first, last), std::max(first, last));
        first = last = near;
      }
    }
    const std::size_t want = opts_.interpolation == Interpolation::cubic ? 4 : 2;
    const std::size_t avail = last >= first ? last - first + 1 : 0;
    const std::size_t k = avail >= want ? want : std::min<std::size_t>(avail, 2);
    const double p = grid_.position(log_odds);
    Completion c;
    if (k == 0) return c;
    // Stencil start: nodes around p, shifted to stay within [first, last].
    const double centre = k == 4 ? std::floor(p) - 1.0 : std::floor(p);
    const double max_start = static_cast<double>(last + 1 - k);
    const std::size_t s = static_cast<std::size_t>(
        std::clamp(centre, static_cast<double>(first), max_start));
    const double u = p - static_cast<double>(s);
    double w[4] = {1.0, 0.0, 0.0, 0.0};
    if (k == 4) {
      w[0] = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
      w[1] = u * (u - 2.0) * (u - 3.0) / 2.0;
      w[2] = -u * (u - 1.0) * (u - 3.0) / 2.0;
      w[3] = u * (u - 1.0) * (u - 2.0) / 6.0;
    } else if (k >= 2) {
      w[0] = 1.0 - u;
      w[1] = u;
    }
    const std::size_t used = k;
    double pi1 = 0.0, rho = 0.0;
    bool ratio_ok = true;
    for (std::size_t j = 0; j < used; ++j) {
      pi1 += w[j] * r.pi1[s + j];
      const double lr = r.log_ratio[s + j];
      if (!std::isfinite(lr)) ratio_ok = false;
      rho += w[j] * lr;
      if (r.irregular[s + j]) c.irregular = true;
    }
    c.pi1 = std::clamp(pi1, 0.0, 1.0);
    if (ratio_ok) {
      c.pi0 = std::clamp(c.pi1 * std::exp(rho), 0.0, 1.0);
    } else {
      double pi0 = 0.0;
      for (std::size_t j = 0; j < used; ++j) pi0 += w[j] * r.pi0[s + j];
      c.pi0 = std::clamp(pi0, 0.0, 1.0);
    }
    return c;
  }

  PolicyRow& slot(int B, int n) {
    return rows_[static_cast<std::size_t>(B - 1) * (n0_ + 1) + n];
  }
  const PolicyRow& slot(int B, int n) const {
    return rows_[static_cast<std::size_t>(B - 1) * (n0_ + 1) + n];
  }

  TypeDistribution dist_;
  int B0_;
  int n0_;
  SolverOptions opts_;
  LikelihoodGrid grid_;
  ScanCache scan_;
  double log_up_ = std::log(dist_.Q() / (1.0 - dist_.Q()));
  double log_down_unit_ = std::log((1.0 - dist_.Q()) / dist_.Q());
  std::vector<PolicyRow> rows_;
};

}  // namespace cascadefund
