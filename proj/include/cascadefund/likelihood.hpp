#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cascadefund {

// Public odds Pr[w = 1] / Pr[w = 0].  Held as log-odds so that long chains of
// update factors neither overflow nor underflow; the public surface speaks
// plain odds.
class Likelihood {
 public:
  Likelihood() = default;

  static Likelihood from_odds(double odds) {
    if (!(odds > 0.0) || !std::isfinite(odds)) {
      throw std::domain_error("likelihood must be positive and finite, got " +
                              std::to_string(odds));
    }
    return Likelihood(std::log(odds));
  }

  static Likelihood from_log_odds(double log_odds) {
    if (!std::isfinite(log_odds)) {
      throw std::domain_error("log-odds must be finite");
    }
    return Likelihood(log_odds);
  }

  // Odds for a probability p = Pr[w = 1].
  static Likelihood from_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::domain_error("probability must lie in (0, 1)");
    }
    return Likelihood(std::log(p) - std::log1p(-p));
  }

  double odds() const { return std::exp(log_odds_); }
  double log_odds() const { return log_odds_; }

  // lambda = L / (1 + L)
  double probability() const { return 1.0 / (1.0 + std::exp(-log_odds_)); }

  // Multiplies the odds by a positive factor.
  Likelihood scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
      throw std::domain_error("likelihood factor must be positive and finite");
    }
    return Likelihood(log_odds_ + std::log(factor));
  }

  friend bool operator==(const Likelihood&, const Likelihood&) = default;
  friend auto operator<=>(const Likelihood& a, const Likelihood& b) {
    return a.log_odds_ <=> b.log_odds_;
  }

 private:
  explicit Likelihood(double log_odds) : log_odds_(log_odds) {}

  double log_odds_ = 0.0;
};

}  // namespace cascadefund
