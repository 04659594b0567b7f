#pragma once

#include <stdexcept>

#include "cascadefund/likelihood.hpp"
#include "cascadefund/quality.hpp"
#include "cascadefund/type_distribution.hpp"

namespace cascadefund {

// Rolls a (quality, signal) pair into a single type t with Pr[w = 1 | t] = t.
inline double type_from_signal(const QualitySpec& spec, double quality,
                               int signal) {
  if (signal != 0 && signal != 1) {
    throw std::domain_error("signal must be 0 or 1");
  }
  if (!(quality >= spec.R() && quality <= spec.Q())) {
    throw std::domain_error("quality outside [R, Q]");
  }
  return signal == 1 ? quality : 1.0 - quality;
}

inline double cdf(const TypeDistribution& dist, int omega, double y) {
  return dist.cdf(omega, y);
}

inline double lr_upper_tail(const TypeDistribution& dist, double x) {
  return dist.lr_upper_tail(x);
}

inline double lr_lower_tail(const TypeDistribution& dist, double x) {
  return dist.lr_lower_tail(x);
}

// Public likelihood after observing an investment under threshold x.
inline Likelihood update_on_invest(Likelihood L, const TypeDistribution& dist,
                                   double x) {
  return L.scaled(dist.lr_upper_tail(x));
}

// Public likelihood after observing a decline under threshold x.
inline Likelihood update_on_decline(Likelihood L, const TypeDistribution& dist,
                                    double x) {
  return L.scaled(dist.lr_lower_tail(x));
}

// A player's posterior odds given the public likelihood and her type.
inline Likelihood private_likelihood(Likelihood L, double type) {
  if (!(type > 0.0 && type < 1.0)) {
    throw std::domain_error("type must lie in (0, 1)");
  }
  return L.scaled(type / (1.0 - type));
}

}  // namespace cascadefund
