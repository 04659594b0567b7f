#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "cascadefund/belief.hpp"
#include "support.hpp"

using namespace cascadefund;
namespace ts = testing_support;

TEST(TypeFromSignal, Branches) {
  const auto s = QualitySpec::uniform(0.5, 0.8);
  EXPECT_DOUBLE_EQ(type_from_signal(s, 0.8, 1), 0.8);
  EXPECT_DOUBLE_EQ(type_from_signal(s, 0.8, 0), 0.2);
  EXPECT_DOUBLE_EQ(type_from_signal(QualitySpec::uniform(0.65, 0.8), 0.65, 0), 0.35);
}

TEST(TypeFromSignal, DomainErrors) {
  const auto s = QualitySpec::uniform(0.5, 0.8);
  EXPECT_THROW(type_from_signal(s, 0.85, 1), std::domain_error);
  EXPECT_THROW(type_from_signal(s, 0.45, 0), std::domain_error);
  EXPECT_THROW(type_from_signal(s, 0.6, 2), std::domain_error);
}

TEST(QualitySpec, RejectsBadBounds) {
  EXPECT_THROW(QualitySpec::uniform(0.8, 0.8), std::invalid_argument);
  EXPECT_THROW(QualitySpec::uniform(0.4, 0.8), std::invalid_argument);
  EXPECT_THROW(QualitySpec::uniform(0.5, 1.0), std::invalid_argument);
  // Mass 0.5 instead of 1.
  EXPECT_THROW(QualitySpec::tabulated(0.5, 0.8, {{0.5, 1.0}, {0.8, 1.0}}),
               std::invalid_argument);
  // Zero density at Q.
  EXPECT_THROW(QualitySpec::tabulated(0.5, 0.9, {{0.5, 5.0}, {0.9, 0.0}}),
               std::invalid_argument);
}

TEST(Cdf, UniformExamples) {
  const TypeDistribution d(QualitySpec::uniform(0.5, 0.8));
  const auto& s = d.spec();
  EXPECT_NEAR(cdf(d, 1, 0.4), ts::oracle_cdf(s, 1, 0.4), 1e-12);
  EXPECT_NEAR(cdf(d, 0, 0.4), ts::oracle_cdf(s, 0, 0.4), 1e-12);
  EXPECT_NEAR(cdf(d, 1, 0.4), 0.2, 1e-12);
  EXPECT_NEAR(cdf(d, 0, 0.4), 0.466666666667, 1e-9);
  EXPECT_DOUBLE_EQ(cdf(d, 0, 0.8), 1.0);
  EXPECT_DOUBLE_EQ(cdf(d, 1, 0.8), 1.0);
  EXPECT_DOUBLE_EQ(cdf(d, 0, 0.2), 0.0);
  EXPECT_THROW(cdf(d, 2, 0.4), std::domain_error);
}

TEST(Cdf, OutsideSupportClampsAndFlags) {
  const TypeDistribution d(QualitySpec::uniform(0.5, 0.8));
  const auto lo = d.cdf_checked(World::good, 0.1);
  EXPECT_DOUBLE_EQ(lo.value, 0.0);
  EXPECT_TRUE(lo.clamped);
  const auto hi = d.cdf_checked(World::bad, 0.95);
  EXPECT_DOUBLE_EQ(hi.value, 1.0);
  EXPECT_TRUE(hi.clamped);
  EXPECT_FALSE(d.cdf_checked(World::bad, 0.5).clamped);
}

TEST(Cdf, MatchesQuadratureOracle) {
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    const double lo = d.support_low(), hi = d.support_high();
    for (int k = 0; k <= 200; ++k) {
      const double y = lo + (hi - lo) * k / 200.0;
      for (int w = 0; w <= 1; ++w) {
        EXPECT_NEAR(d.cdf(w, y), ts::oracle_cdf(f.spec, w, y), 1e-8)
            << f.name << " w=" << w << " y=" << y;
        EXPECT_NEAR(d.survival(world_from_bit(w), y),
                    ts::oracle_survival(f.spec, w, y), 1e-8)
            << f.name << " w=" << w << " y=" << y;
      }
    }
  }
}

TEST(Cdf, FlatOnGap) {
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    if (!(d.gap_high() > d.gap_low())) continue;
    for (int w = 0; w <= 1; ++w) {
      const double a = d.cdf(w, d.gap_low());
      for (int k = 1; k < 10; ++k) {
        const double y = d.gap_low() + (d.gap_high() - d.gap_low()) * k / 10.0;
        EXPECT_NEAR(d.cdf(w, y), a, 1e-14) << f.name;
      }
      EXPECT_NEAR(d.cdf(w, d.gap_high()), a, 1e-14) << f.name;
    }
  }
}

TEST(Properties, Mlrp) {
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    const double lo = d.support_low(), hi = d.support_high();
    for (int k = 0; k <= 1000; ++k) {
      const double y = lo + (hi - lo) * k / 1000.0;
      const double f0 = d.density(World::bad, y);
      if (f0 == 0.0) continue;
      EXPECT_NEAR(d.density(World::good, y) / f0, y / (1.0 - y), 1e-10) << f.name;
    }
  }
}

TEST(Properties, Dominance) {
  const double delta = 1e-6;
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    const double lo = d.support_low(), hi = d.support_high();
    for (int k = 0; k <= 1000; ++k) {
      const double y = lo + (hi - lo) * k / 1000.0;
      const double diff = d.cdf(0, y) - d.cdf(1, y);
      EXPECT_GE(diff, -1e-12) << f.name << " y=" << y;
      if (y > lo + delta && y < hi - delta) EXPECT_GT(diff, 0.0) << f.name;
    }
  }
}

TEST(Properties, TailRatiosMonotone) {
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    const double lo = d.support_low(), hi = d.support_high();
    double pu = -1.0, pl = -1.0, py = lo;
    for (int k = 0; k <= 1000; ++k) {
      const double y = lo + (hi - lo) * k / 1000.0;
      const double u = lr_upper_tail(d, y), l = lr_lower_tail(d, y);
      if (k > 0) {
        EXPECT_GE(u, pu - 1e-9) << f.name << " y=" << y;
        EXPECT_GE(l, pl - 1e-9) << f.name << " y=" << y;
        const bool strict_zone = y > lo && py < hi && !d.in_gap(y) && !d.in_gap(py) &&
                                 !(py <= d.gap_low() && y >= d.gap_high());
        if (strict_zone && py > lo && y < hi) {
          EXPECT_GT(u, pu) << f.name << " y=" << y;
          EXPECT_GT(l, pl) << f.name << " y=" << y;
        }
      }
      pu = u;
      pl = l;
      py = y;
    }
  }
}

TEST(TailRatios, LimitsAndValues) {
  const TypeDistribution d(QualitySpec::uniform(0.5, 0.8));
  EXPECT_DOUBLE_EQ(lr_upper_tail(d, 0.2), 1.0);
  EXPECT_DOUBLE_EQ(lr_upper_tail(d, 0.1), 1.0);
  EXPECT_NEAR(lr_upper_tail(d, 0.8), 4.0, 1e-12);
  EXPECT_NEAR(lr_upper_tail(d, 0.8 - 1e-7), 4.0, 1e-5);
  EXPECT_NEAR(lr_lower_tail(d, 0.2), 0.25, 1e-12);
  EXPECT_NEAR(lr_lower_tail(d, 0.2 + 1e-7), 0.25, 1e-5);
  EXPECT_DOUBLE_EQ(lr_lower_tail(d, 0.8), 1.0);
  const double oracle = ts::oracle_survival(d.spec(), 1, 0.4) /
                        ts::oracle_survival(d.spec(), 0, 0.4);
  EXPECT_NEAR(lr_upper_tail(d, 0.4), oracle, 1e-12);
  EXPECT_NEAR(lr_upper_tail(d, 0.4), 1.5, 1e-12);
}

TEST(Updates, OrderedAroundPrior) {
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    for (double L : {0.05, 0.5, 1.0, 3.0, 20.0}) {
      const auto l = Likelihood::from_odds(L);
      for (int k = 0; k <= 100; ++k) {
        const double x = d.support_low() + (d.support_high() - d.support_low()) * k / 100.0;
        EXPECT_LE(update_on_decline(l, d, x).odds(), L * (1 + 1e-14));
        EXPECT_GE(update_on_invest(l, d, x).odds(), L * (1 - 1e-14));
      }
    }
  }
}

TEST(Updates, BayesRule) {
  const TypeDistribution d(QualitySpec::uniform(0.5, 0.8));
  const auto L = Likelihood::from_odds(1.0);
  // Pr[invest | w] = 1 - F_w(0.4): 0.8 and 0.533333.
  EXPECT_NEAR(update_on_invest(L, d, 0.4).odds(), 0.8 / (1.6 / 3.0), 1e-12);
  EXPECT_NEAR(update_on_decline(L, d, 0.4).odds(), 0.2 / (1.4 / 3.0), 1e-12);
  EXPECT_NEAR(private_likelihood(Likelihood::from_odds(2.0), 0.8).odds(), 8.0, 1e-12);
  EXPECT_THROW(private_likelihood(L, 1.0), std::domain_error);
}

TEST(Likelihood, Validation) {
  EXPECT_THROW(Likelihood::from_odds(0.0), std::domain_error);
  EXPECT_THROW(Likelihood::from_odds(-1.0), std::domain_error);
  EXPECT_THROW(Likelihood::from_odds(INFINITY), std::domain_error);
  EXPECT_NEAR(Likelihood::from_probability(0.8).odds(), 4.0, 1e-12);
  EXPECT_NEAR(Likelihood::from_odds(3.0).probability(), 0.75, 1e-15);
}

TEST(Sampling, InverseCdfMatchesDensity) {
  const auto s = ts::triangular();
  // Mass below the mode is one half by symmetry.
  EXPECT_NEAR(s.sample(0.5), 0.675, 1e-9);
  EXPECT_DOUBLE_EQ(s.sample(0.0), s.R());
  EXPECT_NEAR(s.sample(1.0), s.Q(), 1e-12);
  for (double u : {0.1, 0.3, 0.7, 0.95}) {
    const double q = s.sample(u);
    const double mass = ts::simpson([&](double z) { return s.density(z); }, s.R(), q,
                                    {0.675});
    EXPECT_NEAR(mass, u, 1e-9);
  }
}
