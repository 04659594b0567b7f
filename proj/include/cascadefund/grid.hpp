#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace cascadefund {

// Likelihood points evenly spaced in log-odds.
class LikelihoodGrid {
 public:
  LikelihoodGrid(double lo, double hi, std::size_t size)
      : log_lo_(std::log(lo)), log_hi_(std::log(hi)), size_(size) {
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
      throw std::invalid_argument("likelihood grid needs 0 < lo < hi");
    }
    if (size < 4) {
      throw std::invalid_argument("likelihood grid needs at least 4 points");
    }
    step_ = (log_hi_ - log_lo_) / static_cast<double>(size_ - 1);
  }

  // Grid spanning [((1-Q)/Q)^B0 / 10, 10 Q/(1-Q)], which brackets both cascade
  // regions of every row with B <= B0.
  static LikelihoodGrid for_game(double Q, int B0, std::size_t size) {
    const double up = Q / (1.0 - Q);
    const double down = std::pow((1.0 - Q) / Q, B0);
    return LikelihoodGrid(down / 10.0, 10.0 * up, size);
  }

  std::size_t size() const { return size_; }
  double log_lo() const { return log_lo_; }
  double log_hi() const { return log_hi_; }
  double lo() const { return std::exp(log_lo_); }
  double hi() const { return std::exp(log_hi_); }
  double step() const { return step_; }

  double log_odds(std::size_t i) const {
    return i + 1 == size_ ? log_hi_ : log_lo_ + step_ * static_cast<double>(i);
  }
  double odds(std::size_t i) const { return std::exp(log_odds(i)); }

  // Fractional index of a log-odds value (may fall outside [0, size - 1]).
  double position(double log_odds) const {
    return (log_odds - log_lo_) / step_;
  }

  // Index of the grid point nearest to the given odds.
  std::size_t nearest(double odds) const {
    const double p = std::round(position(std::log(odds)));
    if (p <= 0.0) return 0;
    if (p >= static_cast<double>(size_ - 1)) return size_ - 1;
    return static_cast<std::size_t>(p);
  }

 private:
  double log_lo_;
  double log_hi_;
  std::size_t size_;
  double step_ = 0.0;
};

}  // namespace cascadefund
