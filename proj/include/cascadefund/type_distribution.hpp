#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "cascadefund/quadrature.hpp"
#include "cascadefund/quality.hpp"

namespace cascadefund {

enum class World : int { bad = 0, good = 1 };

inline World world_from_bit(int omega) {
  if (omega != 0 && omega != 1) {
    throw std::domain_error("world state must be 0 or 1");
  }
  return omega == 1 ? World::good : World::bad;
}

struct CdfValue {
  double value;
  bool clamped;  // the argument lay outside [1 - Q, Q]
};

// Conditional type distributions f_w, F_w induced by a quality distribution.
//
// A player with quality q and signal s has type t = q when s = 1 and 1 - q
// otherwise, so Pr[w = 1 | t] = t and the support of t is
// [1 - Q, 1 - R] u [R, Q].  The CDFs are flat across the gap (1 - R, R).
//
// Copies share the precomputed tables.
class TypeDistribution {
 public:
  // Band around the support edges inside which the tail ratios take their
  // limiting values.
  static constexpr double kEdgeBand = 1e-12;

  explicit TypeDistribution(QualitySpec spec)
      : impl_(std::make_shared<Impl>(std::move(spec))) {}

  const QualitySpec& spec() const { return impl_->spec; }
  double R() const { return impl_->spec.R(); }
  double Q() const { return impl_->spec.Q(); }
  double support_low() const { return 1.0 - Q(); }
  double support_high() const { return Q(); }
  double gap_low() const { return 1.0 - R(); }
  double gap_high() const { return R(); }
  bool in_gap(double y) const { return y > gap_low() && y < gap_high(); }

  // Type density f_w(y).
  double density(World w, double y) const {
    if (y < support_low() || y > support_high()) return 0.0;
    const double fq = impl_->spec.density(y >= 0.5 ? y : 1.0 - y);
    return w == World::good ? y * fq : (1.0 - y) * fq;
  }

  double cdf(World w, double y) const { return cdf_checked(w, y).value; }

  double cdf(int omega, double y) const { return cdf(world_from_bit(omega), y); }

  CdfValue cdf_checked(World w, double y) const {
    if (y <= support_low()) return {0.0, y < support_low()};
    if (y >= support_high()) return {1.0, y > support_high()};
    return {impl_->lower(w, y), false};
  }

  // 1 - F_w(y), evaluated directly rather than by subtraction.
  double survival(World w, double y) const {
    if (y <= support_low()) return 1.0;
    if (y >= support_high()) return 0.0;
    return impl_->upper(w, y);
  }

  // (1 - F_1(x)) / (1 - F_0(x)): the factor applied to the public odds when a
  // player with threshold x invests.
  double lr_upper_tail(double x) const {
    if (x <= support_low()) return 1.0;
    const double q = Q();
    if (x >= q - kEdgeBand) return q / (1.0 - q);
    return impl_->upper(World::good, x) / impl_->upper(World::bad, x);
  }

  // F_1(x) / F_0(x): the factor applied when a player with threshold x
  // declines.
  double lr_lower_tail(double x) const {
    if (x >= support_high()) return 1.0;
    const double q = Q();
    if (x <= 1.0 - q + kEdgeBand) return (1.0 - q) / q;
    return impl_->lower(World::good, x) / impl_->lower(World::bad, x);
  }

 private:
  struct Impl {
    explicit Impl(QualitySpec s) : spec(std::move(s)) {
      if (spec.kind() == QualityKind::tabulated) build_tables();
    }

    double raw_density(World w, double y) const {
      const double fq = spec.density(y >= 0.5 ? y : 1.0 - y);
      return w == World::good ? y * fq : (1.0 - y) * fq;
    }

    // F_w(y) for y strictly inside the support.
    double lower(World w, double y) const {
      if (spec.kind() == QualityKind::uniform) return uniform_lower(w, y);
      const std::size_t k = segment_of(y);
      const int wi = static_cast<int>(w);
      const double part = integrate_segment(w, k, breaks[k], y);
      return (lower_cum[wi][k] + part) / total[wi];
    }

    // 1 - F_w(y) for y strictly inside the support.
    double upper(World w, double y) const {
      if (spec.kind() == QualityKind::uniform) return uniform_upper(w, y);
      const std::size_t k = segment_of(y);
      const int wi = static_cast<int>(w);
      const double part = integrate_segment(w, k, y, breaks[k + 1]);
      return (part + upper_cum[wi][k + 1]) / total[wi];
    }

    double uniform_lower(World w, double y) const {
      const double R = spec.R(), Q = spec.Q(), width = 2.0 * (Q - R);
      if (w == World::good) {
        if (y <= 1.0 - R) return (y - (1.0 - Q)) * (y + (1.0 - Q)) / width;
        if (y <= R) return 1.0 - 0.5 * (Q + R);
        return 1.0 - (Q - y) * (Q + y) / width;
      }
      if (y <= 1.0 - R) return (Q - (1.0 - y)) * (Q + (1.0 - y)) / width;
      if (y <= R) return 0.5 * (Q + R);
      return 1.0 - (Q - y) * (2.0 - Q - y) / width;
    }

    double uniform_upper(World w, double y) const {
      const double R = spec.R(), Q = spec.Q(), width = 2.0 * (Q - R);
      if (w == World::good) {
        if (y <= 1.0 - R) return 1.0 - (y - (1.0 - Q)) * (y + (1.0 - Q)) / width;
        if (y <= R) return 0.5 * (Q + R);
        return (Q - y) * (Q + y) / width;
      }
      if (y <= 1.0 - R) return 1.0 - (Q - (1.0 - y)) * (Q + (1.0 - y)) / width;
      if (y <= R) return 1.0 - 0.5 * (Q + R);
      return (Q - y) * (2.0 - Q - y) / width;
    }

    double integrate(World w, double a, double b) const {
      if (b <= a) return 0.0;
      return adaptive_simpson([&](double y) { return raw_density(w, y); }, a, b,
                              QuadratureOptions{});
    }

    // Same integral restricted to segment k, where the quality density is
    // linear in y and the integrand quadratic, so one Simpson panel is exact.
    double integrate_segment(World w, std::size_t k, double a, double b) const {
      if (b <= a) return 0.0;
      const double alpha = seg_alpha[k], beta = seg_beta[k];
      auto g = [&](double y) {
        const double fq = alpha + beta * y;
        return w == World::good ? y * fq : (1.0 - y) * fq;
      };
      return (b - a) / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b));
    }

    std::size_t segment_of(double y) const {
      auto it = std::upper_bound(breaks.begin(), breaks.end(), y);
      std::size_t k = static_cast<std::size_t>(it - breaks.begin());
      k = k == 0 ? 0 : k - 1;
      return std::min(k, breaks.size() - 2);
    }

    void build_tables() {
      for (const auto& k : spec.knots()) {
        breaks.push_back(k.quality);
        breaks.push_back(1.0 - k.quality);
      }
      breaks.push_back(0.5);
      std::sort(breaks.begin(), breaks.end());
      breaks.erase(std::unique(breaks.begin(), breaks.end(),
                               [](double a, double b) {
                                 return std::abs(a - b) < 1e-15;
                               }),
                   breaks.end());
      const std::size_t m = breaks.size();
      seg_alpha.assign(m - 1, 0.0);
      seg_beta.assign(m - 1, 0.0);
      for (std::size_t k = 0; k + 1 < m; ++k) {
        // f_q(yhat) is linear on each segment; recover it from two interior
        // samples so that segment edges at knots do not matter.
        const double a = breaks[k], b = breaks[k + 1];
        const double y0 = a + 0.25 * (b - a), y1 = a + 0.75 * (b - a);
        const double d0 = spec.density(y0 >= 0.5 ? y0 : 1.0 - y0);
        const double d1 = spec.density(y1 >= 0.5 ? y1 : 1.0 - y1);
        seg_beta[k] = (d1 - d0) / (y1 - y0);
        seg_alpha[k] = d0 - seg_beta[k] * y0;
      }
      for (int wi = 0; wi < 2; ++wi) {
        const World w = static_cast<World>(wi);
        std::vector<double> seg(m - 1);
        for (std::size_t k = 0; k + 1 < m; ++k) {
          seg[k] = integrate(w, breaks[k], breaks[k + 1]);
        }
        lower_cum[wi].assign(m, 0.0);
        upper_cum[wi].assign(m, 0.0);
        for (std::size_t k = 1; k < m; ++k) {
          lower_cum[wi][k] = lower_cum[wi][k - 1] + seg[k - 1];
        }
        for (std::size_t k = m - 1; k-- > 0;) {
          upper_cum[wi][k] = upper_cum[wi][k + 1] + seg[k];
        }
        total[wi] = lower_cum[wi][m - 1];
      }
    }

    QualitySpec spec;
    std::vector<double> breaks;
    std::vector<double> seg_alpha;
    std::vector<double> seg_beta;
    std::array<std::vector<double>, 2> lower_cum;
    std::array<std::vector<double>, 2> upper_cum;
    std::array<double, 2> total{1.0, 1.0};
  };

  std::shared_ptr<const Impl> impl_;
};

}  // namespace cascadefund
