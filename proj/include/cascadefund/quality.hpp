#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cascadefund/quadrature.hpp"

namespace cascadefund {

enum class QualityKind { uniform, tabulated };

inline const char* to_string(QualityKind k) {
  return k == QualityKind::uniform ? "uniform" : "tabulated";
}

struct DensityKnot {
  double quality;
  double density;
};

// Distribution of signal qualities on [R, Q], 1/2 <= R < Q < 1.
//
// The tabulated kind is a piecewise-linear density through the knots.  The
// first knot must sit at R and the last at Q, both with positive density, and
// the density must integrate to one within 1e-8.
class QualitySpec {
 public:
  static constexpr double kMassTolerance = 1e-8;

  static QualitySpec uniform(double R, double Q) {
    check_bounds(R, Q);
    QualitySpec s;
    s.kind_ = QualityKind::uniform;
    s.R_ = R;
    s.Q_ = Q;
    return s;
  }

  static QualitySpec tabulated(double R, double Q,
                               std::vector<DensityKnot> knots) {
    check_bounds(R, Q);
    if (knots.size() < 2) {
      throw std::invalid_argument("tabulated density needs at least two knots");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const auto& k = knots[i];
      if (!std::isfinite(k.quality) || !std::isfinite(k.density)) {
        throw std::invalid_argument("tabulated density: non-finite knot");
      }
      if (k.density < 0.0) {
        throw std::invalid_argument("tabulated density must be nonnegative");
      }
      if (i > 0 && !(k.quality > knots[i - 1].quality)) {
        throw std::invalid_argument(
            "tabulated density knots must be strictly increasing in quality");
      }
    }
    if (std::abs(knots.front().quality - R) > 1e-12 ||
        std::abs(knots.back().quality - Q) > 1e-12) {
      throw std::invalid_argument(
          "tabulated density knots must start at R and end at Q");
    }
    knots.front().quality = R;
    knots.back().quality = Q;
    if (!(knots.front().density > 0.0) || !(knots.back().density > 0.0)) {
      throw std::invalid_argument(
          "tabulated density must be strictly positive at R and at Q");
    }

    QualitySpec s;
    s.kind_ = QualityKind::tabulated;
    s.R_ = R;
    s.Q_ = Q;
    s.knots_ = std::move(knots);

    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < s.knots_.size(); ++i) {
      const auto& a = s.knots_[i];
      const auto& b = s.knots_[i + 1];
      mass += adaptive_simpson([&](double q) { return s.density(q); },
                               a.quality, b.quality);
    }
    if (std::abs(mass - 1.0) > kMassTolerance) {
      throw std::invalid_argument("tabulated density integrates to " +
                                  std::to_string(mass) + ", expected 1");
    }
    for (std::size_t i = 1; i + 1 < s.knots_.size(); ++i) {
      if (s.knots_[i].density == 0.0) {
        s.warnings_.push_back(
            "density vanishes at interior quality " +
            std::to_string(s.knots_[i].quality) +
            "; accepted, but the model assumes no interior holes");
        break;
      }
    }
    return s;
  }

  // Scales the knot densities so that they integrate to one.
  static QualitySpec tabulated_normalized(double R, double Q,
                                          std::vector<DensityKnot> knots) {
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      mass += 0.5 * (knots[i].density + knots[i + 1].density) *
              (knots[i + 1].quality - knots[i].quality);
    }
    if (!(mass > 0.0)) {
      throw std::invalid_argument("tabulated density has zero mass");
    }
    for (auto& k : knots) k.density /= mass;
    return tabulated(R, Q, std::move(knots));
  }

  static QualitySpec from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
      throw std::invalid_argument("quality spec must be a JSON object");
    }
    const std::string kind = j.at("kind").get<std::string>();
    const double R = j.at("R").get<double>();
    const double Q = j.at("Q").get<double>();
    if (kind == "uniform") return uniform(R, Q);
    if (kind == "tabulated") {
      std::vector<DensityKnot> knots;
      for (const auto& k : j.at("knots")) {
        if (!k.is_array() || k.size() != 2) {
          throw std::invalid_argument("knots must be [quality, density] pairs");
        }
        knots.push_back({k[0].get<double>(), k[1].get<double>()});
      }
      return tabulated(R, Q, std::move(knots));
    }
    throw std::invalid_argument("unknown quality kind '" + kind + "'");
  }

  static QualitySpec from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open quality file " + path);
    return from_json(nlohmann::json::parse(in));
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["kind"] = to_string(kind_);
    j["R"] = R_;
    j["Q"] = Q_;
    if (kind_ == QualityKind::tabulated) {
      auto arr = nlohmann::json::array();
      for (const auto& k : knots_) arr.push_back({k.quality, k.density});
      j["knots"] = std::move(arr);
    }
    return j;
  }

  QualityKind kind() const { return kind_; }
  double R() const { return R_; }
  double Q() const { return Q_; }
  const std::vector<DensityKnot>& knots() const { return knots_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Quality density f_q, zero outside [R, Q].
  double density(double q) const {
    if (q < R_ || q > Q_) return 0.0;
    if (kind_ == QualityKind::uniform) return 1.0 / (Q_ - R_);
    auto it = std::upper_bound(
        knots_.begin(), knots_.end(), q,
        [](double v, const DensityKnot& k) { return v < k.quality; });
    if (it == knots_.end()) return knots_.back().density;
    if (it == knots_.begin()) return knots_.front().density;
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double w = (q - a.quality) / (b.quality - a.quality);
    return a.density + w * (b.density - a.density);
  }

  // Inverse CDF of the quality distribution for u in [0, 1].
  double sample(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    if (kind_ == QualityKind::uniform) return R_ + u * (Q_ - R_);
    double acc = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      total += segment_mass(i);
    }
    const double target = u * total;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      const double m = segment_mass(i);
      if (acc + m >= target || i + 2 == knots_.size()) {
        return invert_segment(i, target - acc);
      }
      acc += m;
    }
    return Q_;
  }

  friend bool operator==(const QualitySpec& a, const QualitySpec& b) {
    if (a.kind_ != b.kind_ || a.R_ != b.R_ || a.Q_ != b.Q_) return false;
    if (a.knots_.size() != b.knots_.size()) return false;
    for (std::size_t i = 0; i < a.knots_.size(); ++i) {
      if (a.knots_[i].quality != b.knots_[i].quality ||
          a.knots_[i].density != b.knots_[i].density) {
        return false;
      }
    }
    return true;
  }

 private:
  QualitySpec() = default;

  static void check_bounds(double R, double Q) {
    if (!(R >= 0.5 && R < Q && Q < 1.0)) {
      throw std::invalid_argument(
          "quality support must satisfy 1/2 <= R < Q < 1 (got R=" +
          std::to_string(R) + ", Q=" + std::to_string(Q) + ")");
    }
  }

  double segment_mass(std::size_t i) const {
    const auto& a = knots_[i];
    const auto& b = knots_[i + 1];
    return 0.5 * (a.density + b.density) * (b.quality - a.quality);
  }

  // Quality within segment i at which the accumulated mass reaches `mass`.
  double invert_segment(std::size_t i, double mass) const {
    const auto& a = knots_[i];
    const auto& b = knots_[i + 1];
    const double w = b.quality - a.quality;
    const double slope = (b.density - a.density) / w;
    mass = std::max(mass, 0.0);
    double dq;
    if (std::abs(slope) < 1e-14) {
      dq = a.density > 0.0 ? mass / a.density : 0.0;
    } else {
      // a.density * dq + slope/2 * dq^2 = mass
      const double disc = a.density * a.density + 2.0 * slope * mass;
      dq = (std::sqrt(std::max(disc, 0.0)) - a.density) / slope;
    }
    return std::clamp(a.quality + dq, a.quality, b.quality);
  }

  QualityKind kind_ = QualityKind::uniform;
  double R_ = 0.5;
  double Q_ = 0.8;
  std::vector<DensityKnot> knots_;
  std::vector<std::string> warnings_;
};

}  // namespace cascadefund
