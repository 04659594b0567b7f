#pragma once

#include <cmath>
#include <stdexcept>

namespace cascadefund {

inline void check_top_quality(double Q) {
  if (!(Q > 0.5 && Q < 1.0)) {
    throw std::domain_error("top quality Q must lie in (1/2, 1)");
  }
}

// Q/(1-Q): at or above this public likelihood everyone invests.
inline double up_cascade_bound(double Q) {
  check_top_quality(Q);
  return Q / (1.0 - Q);
}

// ((1-Q)/Q)^B: at or below this public likelihood everyone declines.
inline double down_cascade_bound(int B, double Q) {
  check_top_quality(Q);
  return std::pow((1.0 - Q) / Q, B);
}

// Upper bound on the public likelihood at completion of a unanimity game.
inline double learning_bound(double Q) {
  const double up = up_cascade_bound(Q);
  return up * up;
}

// Relative slack on the cascade comparisons: 1 - 0.8 is not exactly 0.2 in
// binary, so Q/(1-Q) at Q = 0.8 evaluates slightly above 4.
inline constexpr double kCascadeSlack = 1e-12;

inline bool in_up_cascade(double L, double Q) {
  return L >= up_cascade_bound(Q) * (1.0 - kCascadeSlack);
}

inline bool in_down_cascade(double L, int B, double Q) {
  if (B < 1) throw std::domain_error("down cascades need B >= 1");
  return L <= down_cascade_bound(B, Q) * (1.0 + kCascadeSlack);
}

}  // namespace cascadefund
