#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "cascadefund/quality.hpp"
#include "cascadefund/type_distribution.hpp"

namespace testing_support {

using cascadefund::QualitySpec;
using cascadefund::TypeDistribution;

inline std::string source_path(const std::string& rel) {
  return std::string(CASCADEFUND_SOURCE_DIR) + "/" + rel;
}

inline QualitySpec triangular() {
  return QualitySpec::from_file(source_path("configs/quality/triangular.json"));
}

inline QualitySpec bimodal() {
  return QualitySpec::from_file(source_path("configs/quality/bimodal.json"));
}

struct Fixture {
  std::string name;
  QualitySpec spec;
};

inline std::vector<Fixture> fixtures() {
  return {{"uniform_050", QualitySpec::uniform(0.5, 0.8)},
          {"uniform_065", QualitySpec::uniform(0.65, 0.8)},
          {"uniform_075", QualitySpec::uniform(0.75, 0.8)},
          {"triangular", triangular()},
          {"bimodal", bimodal()}};
}

// Composite Simpson on [a, b], with the integrand split at the given points.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::vector<double> cuts = {}, int panels = 64) {
  if (!(b > a)) return 0.0;
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = std::max(a, cuts[k]);
    const double hi = std::min(b, cuts[k + 1]);
    if (!(hi > lo)) continue;
    const double h = (hi - lo) / (2 * panels);
    // One-sided end values: the integrand may jump at a cut.
    const double e = 1e-13 * (hi - lo);
    double s = f(lo + e) + f(hi - e);
    for (int i = 1; i < 2 * panels; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    total += s * h / 3.0;
  }
  return total;
}

// Type density from the quality density directly: f_1(z) = z g(q(z)),
// f_0(z) = (1 - z) g(q(z)), with q(z) = max(z, 1 - z).
inline double oracle_density(const QualitySpec& s, int omega, double z) {
  const double q = z >= 0.5 ? z : 1.0 - z;
  if (q < s.R() || q > s.Q()) return 0.0;
  double g;
  if (s.kind() == cascadefund::QualityKind::uniform) {
    g = 1.0 / (s.Q() - s.R());
  } else {
    const auto& k = s.knots();
    g = k.back().density;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      if (q >= k[i].quality && q <= k[i + 1].quality) {
        const double w = (q - k[i].quality) / (k[i + 1].quality - k[i].quality);
        g = k[i].density + w * (k[i + 1].density - k[i].density);
        break;
      }
    }
  }
  return omega == 1 ? z * g : (1.0 - z) * g;
}

inline std::vector<double> oracle_cuts(const QualitySpec& s) {
  std::vector<double> c{1.0 - s.R(), s.R()};
  if (s.kind() == cascadefund::QualityKind::tabulated) {
    for (const auto& k : s.knots()) {
      c.push_back(k.quality);
      c.push_back(1.0 - k.quality);
    }
  }
  return c;
}

inline double oracle_cdf(const QualitySpec& s, int omega, double y) {
  const double lo = 1.0 - s.Q();
  if (y <= lo) return 0.0;
  if (y >= s.Q()) return 1.0;
  return simpson([&](double z) { return oracle_density(s, omega, z); }, lo, y,
                 oracle_cuts(s));
}

inline double oracle_survival(const QualitySpec& s, int omega, double y) {
  if (y <= 1.0 - s.Q()) return 1.0;
  if (y >= s.Q()) return 0.0;
  return simpson([&](double z) { return oracle_density(s, omega, z); }, y, s.Q(),
                 oracle_cuts(s));
}

// Plain bisection for a sign change of f on [a, b].
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     int iters = 200) {
  double fa = f(a);
  for (int i = 0; i < iters; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace testing_support
