#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cascadefund/equilibrium.hpp"
#include "cascadefund/unanimity.hpp"
#include "support.hpp"

using namespace cascadefund;
namespace ts = testing_support;

TEST(Symmetric, Examples) {
  const TypeDistribution d(QualitySpec::uniform(0.5, 0.8));
  for (double L : {0.3, 1.0, 2.0}) {
    EXPECT_NEAR(symmetric_threshold(L, d, 1), 1.0 / (1.0 + L), 1e-12);
  }
  // Exact root: 0.4/0.6 = ((1-x)^2 - 0.04)/(0.64 - x^2) at x = 0.4.
  const double lhs = 0.4 / 0.6;
  const double rhs = ((1 - 0.4) * (1 - 0.4) - 0.04) / (0.64 - 0.4 * 0.4);
  EXPECT_NEAR(lhs, rhs, 1e-15);
  EXPECT_NEAR(symmetric_threshold(1.0, d, 2), 0.4, 1e-9);
  EXPECT_DOUBLE_EQ(symmetric_threshold(4.0, d, 2), 0.2);
  EXPECT_DOUBLE_EQ(symmetric_threshold(9.0, d, 3), 0.2);
}

TEST(Symmetric, MatchesOracleBisection) {
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    for (double L : {0.2, 0.6, 1.0, 1.9}) {
      for (int n : {2, 3}) {
        if (in_down_cascade(L, n, d.Q())) continue;
        auto g = [&](double x) {
          return L * x / (1 - x) - std::pow(ts::oracle_survival(f.spec, 0, x) /
                                                ts::oracle_survival(f.spec, 1, x),
                                            n - 1);
        };
        const double lo = d.support_low() + 1e-12, hi = d.support_high() - 1e-9;
        if ((g(lo) < 0) == (g(hi) < 0)) continue;
        const double x = ts::bisect(g, lo, hi, 100);
        // Thresholds inside the gap are interchangeable.
        const double got = symmetric_threshold(L, d, n);
        if (d.in_gap(x)) {
          EXPECT_TRUE(d.in_gap(got) || std::abs(got - x) < 1e-7) << f.name;
        } else {
          EXPECT_NEAR(got, x, 1e-7) << f.name << " L=" << L << " n=" << n;
        }
      }
    }
  }
}

TEST(Profiles, CompletionAndUtility) {
  const TypeDistribution d(QualitySpec::uniform(0.5, 0.8));
  const ThresholdProfile p{d, 1.0, {0.4, 0.4}};
  const auto c = completion_prob_unanimity(p);
  const double s0 = ts::oracle_survival(d.spec(), 0, 0.4);
  const double s1 = ts::oracle_survival(d.spec(), 1, 0.4);
  EXPECT_NEAR(c.pi0, s0 * s0, 1e-12);
  EXPECT_NEAR(c.pi1, s1 * s1, 1e-12);
  EXPECT_NEAR(c.pi0, 0.284444, 1e-6);
  EXPECT_NEAR(c.pi1, 0.64, 1e-12);
  EXPECT_NEAR(profile_utility(p), 0.177778, 1e-6);
  EXPECT_LT(profile_residual(p), 1e-12);

  const auto all_in = completion_prob_unanimity({d, 1.0, {0.1, 0.2}});
  EXPECT_EQ(all_in.pi0, 1.0);
  EXPECT_EQ(all_in.pi1, 1.0);
  const auto none = completion_prob_unanimity({d, 1.0, {0.8, 0.9}});
  EXPECT_EQ(none.pi0, 0.0);
  EXPECT_EQ(profile_utility({d, 1.0, {0.8, 0.85}}), 0.0);
}

TEST(Profiles, PermutationInvariance) {
  std::mt19937_64 rng(11);
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    std::uniform_real_distribution<double> ux(d.support_low(), d.support_high());
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x(4);
      for (auto& v : x) v = ux(rng);
      std::sort(x.begin(), x.end());
      const double base = profile_utility({d, 0.8, x});
      do {
        EXPECT_NEAR(profile_utility({d, 0.8, x}), base, 1e-12) << f.name;
      } while (std::next_permutation(x.begin(), x.end()));
    }
  }
}

TEST(Profiles, DiscriminatorSignMatchesDelegationMargin) {
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    for (int k = 1; k < 20; ++k) {
      const double x2 = d.support_low() + (0.5 - d.support_low()) * k / 20.0;
      const double L = (1 - x2) / x2;  // player 2 indifferent behind a delegator
      const ThresholdProfile p{d, L, {d.support_low(), x2}};
      const double diff = profile_discriminator(p, 0) - profile_discriminator(p, 1);
      const double m = delegation_order_margin(d, x2);
      EXPECT_NEAR(diff * x2, m, 1e-12) << f.name << " x2=" << x2;
    }
  }
  const TypeDistribution d(QualitySpec::uniform(0.5, 0.8));
  const ThresholdProfile sym{d, 1.0, {0.4, 0.4}};
  EXPECT_DOUBLE_EQ(profile_discriminator(sym, 0), profile_discriminator(sym, 1));
}

TEST(Hazard, Segments) {
  const TypeDistribution d50(QualitySpec::uniform(0.5, 0.8));
  const auto s50 = J_monotone_segments(d50);
  ASSERT_EQ(s50.size(), 1u);
  EXPECT_TRUE(s50[0].increasing);
  EXPECT_GE(J_monotone_segments(TypeDistribution(QualitySpec::uniform(0.75, 0.8))).size(), 2u);
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    EXPECT_LE(hazard_J(d, 0.5), 1.0 + 1e-12) << f.name;
    const double x = 0.3;
    const double oracle = x / (1 - x) * ts::oracle_survival(f.spec, 0, x) /
                          ts::oracle_survival(f.spec, 1, x);
    EXPECT_NEAR(hazard_J(d, x), oracle, 1e-9) << f.name;
  }
}

TEST(Profiles, EqualThresholdRule) {
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    if (J_monotone_segments(d).size() != 1) continue;
    for (double L : {0.1, 0.4, 1.0, 2.0, 3.5}) {
      for (int n : {2, 3}) {
        const auto ps = asymmetric_profiles(L, d, n);
        ASSERT_EQ(ps.size(), 1u) << f.name << " L=" << L;
        for (double x : ps[0].x) EXPECT_NEAR(x, ps[0].x[0], 1e-12);
      }
    }
  }
}

TEST(Profiles, AsymmetricExistForUniform065) {
  const TypeDistribution d(QualitySpec::uniform(0.65, 0.8));
  int asym = 0;
  for (int k = 0; k < 60; ++k) {
    const double L = std::exp(std::log(0.05) + (std::log(5.0) - std::log(0.05)) * k / 59.0);
    for (const auto& p : asymmetric_profiles(L, d, 2)) {
      if (std::abs(p.x[0] - p.x[1]) > 1e-6) ++asym;
    }
  }
  EXPECT_GT(asym, 0);
}

TEST(Profiles, FixedPointUnderRotations) {
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    for (double L : {0.15, 0.5, 0.9, 1.6, 2.4}) {
      for (int n : {2, 3, 4}) {
        for (auto p : asymmetric_profiles(L, d, n)) {
          for (int r = 0; r < n; ++r) {
            EXPECT_LE(profile_residual(p), 1e-9) << f.name << " L=" << L << " n=" << n;
            std::rotate(p.x.begin(), p.x.begin() + 1, p.x.end());
          }
        }
        const auto sol = solve_unanimity(L, d, n);
        EXPECT_LE(profile_residual(sol.profile(d)), 1e-9) << f.name;
      }
    }
  }
}

TEST(Solve, TwoPlayerExample) {
  const TypeDistribution d(QualitySpec::uniform(0.5, 0.8));
  const auto u = solve_unanimity(1.0, d, 2);
  ASSERT_EQ(u.x.size(), 2u);
  EXPECT_NEAR(u.x[0], 0.4, 1e-6);
  EXPECT_NEAR(u.x[1], 0.4, 1e-6);
  EXPECT_NEAR(u.pi1, 0.64, 1e-6);
  EXPECT_NEAR(u.pi0, 0.284444, 1e-6);
  EXPECT_NEAR(u.utility, 0.177778, 1e-6);
  EXPECT_FALSE(u.irregular);
  EXPECT_THROW(solve_unanimity(0.0, d, 2), std::domain_error);
  EXPECT_THROW(solve_unanimity(1.0, d, 0), std::invalid_argument);
}

TEST(SocialInsurance, Examples) {
  const TypeDistribution d(QualitySpec::uniform(0.5, 0.8));
  EXPECT_TRUE(social_insurance_check({d, 1.0, {0.4, 0.4}}));
  EXPECT_FALSE(social_insurance_check({d, 1.0, {0.5, 0.4}}));
  EXPECT_FALSE(social_insurance_check({d, 1.0, {0.55, 0.4}}));
  EXPECT_TRUE(social_insurance_check({d, 1.0, {0.5}}));
  EXPECT_TRUE(social_insurance_check({d, 4.0, {0.2, 0.2}}));
  EXPECT_NEAR(solve_unanimity(0.7, d, 1).x[0], 1.0 / 1.7, 1e-12);
}

TEST(SocialInsurance, SolvedProfiles) {
  for (double R : {0.5, 0.65, 0.75}) {
    const TypeDistribution d(QualitySpec::uniform(R, 0.8));
    for (int n : {2, 4}) {
      for (int k = 0; k < 40; ++k) {
        const double L = std::exp(std::log(0.05) + (std::log(5.0) - std::log(0.05)) * k / 39.0);
        const auto u = solve_unanimity(L, d, n);
        EXPECT_TRUE(social_insurance_check(u.profile(d))) << "R=" << R << " n=" << n << " L=" << L;
      }
    }
  }
}

TEST(Delegation, Reports) {
  const auto r50 = delegation_analysis(TypeDistribution(QualitySpec::uniform(0.5, 0.8)));
  EXPECT_FALSE(r50.startable);
  for (const auto& pt : r50.pattern) {
    for (bool b : pt.delegating) EXPECT_FALSE(b);
  }
  const TypeDistribution d65(QualitySpec::uniform(0.65, 0.8));
  const auto r65 = delegation_analysis(d65);
  EXPECT_TRUE(r65.startable);
  EXPECT_TRUE(r65.earliest_only);
  EXPECT_FALSE(r65.latest_only);
  EXPECT_TRUE(r65.item2_holds);
  // Only the first player ever delegates.
  bool any = false;
  for (const auto& pt : r65.pattern) {
    any = any || pt.delegating[0];
    EXPECT_FALSE(pt.delegating[1]) << "L=" << pt.L;
  }
  EXPECT_TRUE(any);
  // The margin is positive on the whole witness set (independent scan).
  for (const auto& w : r65.witness) {
    for (int k = 0; k <= 100; ++k) {
      const double x = w.lo + (w.hi - w.lo) * k / 100.0;
      const double s1 = ts::oracle_survival(d65.spec(), 1, x);
      const double s0 = ts::oracle_survival(d65.spec(), 0, x);
      EXPECT_GT((1 - x) * s1 * s1 - x * s0 * s0, 1 - 2 * x);
    }
  }
  for (const auto& f : ts::fixtures()) {
    const auto r = delegation_analysis(TypeDistribution(f.spec), 2, {0.3, 1.0});
    EXPECT_FALSE(r.earliest_only && r.latest_only) << f.name;
    EXPECT_TRUE(r.item2_holds) << f.name;
  }
}

// Where a smaller game delegates at L but a larger one does not, the larger
// game must have a strictly better option than passing the decision on.
TEST(Delegation, ReverseCascadeOnSolvedTables) {
  const TypeDistribution d(QualitySpec::uniform(0.65, 0.8));
  const double Q = d.Q();
  const PolicyTable t = backward_induction(d, 4, 4);
  const auto& g = t.grid();
  auto U = [&](int B, std::size_t i) {
    const auto& r = t.row(B, B);
    const double L = g.odds(i);
    return (L * r.pi1[i] - r.pi0[i]) / (1.0 + L);
  };
  int held = 0, broken = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double L = g.odds(i);
    if (in_up_cascade(L, Q)) continue;
    for (int B = 1; B < 4; ++B) {
      if (in_down_cascade(L, B + 1, Q)) continue;
      if (t.canonical(t.row(B, B).sigma[i]) > 1 - Q) continue;
      for (int k = B + 1; k <= 4; ++k) {
        if (t.canonical(t.row(k, k).sigma[i]) <= 1 - Q) {
          ++held;
          continue;
        }
        ++broken;
        EXPECT_GT(U(k, i), U(B, i) + 1e-9) << "L=" << L << " B=" << B << " k=" << k;
      }
    }
  }
  EXPECT_GT(held, 100);
  EXPECT_GT(broken, 0);
}

TEST(Delegation, ReverseCascadeCounterexample) {
  // Uniform 0.65/0.8 at L = 2: three players delegate-delegate-screen, four
  // players screen symmetrically at a higher first-mover utility.
  const double R = 0.65, Q = 0.8, L = 2.0;
  auto S = [&](int w, double y) {
    auto iq = [](double a, double b) { return b > a ? 0.5 * (b * b - a * a) : 0.0; };
    auto iq1 = [&](double a, double b) { return b > a ? (b - a) - iq(a, b) : 0.0; };
    const double hi = std::max(R, std::min(Q, 1.0 - y));
    const double lo = std::min(Q, std::max(R, y));
    return (w == 1 ? iq(lo, Q) + iq1(R, hi) : iq1(lo, Q) + iq(R, hi)) / (Q - R);
  };
  auto U = [&](const std::vector<double>& x) {
    double a = 1.0, b = 1.0;
    for (double v : x) {
      a *= S(1, v);
      b *= S(0, v);
    }
    return (L * a - b) / (1.0 + L);
  };
  const TypeDistribution d(QualitySpec::uniform(R, Q));
  const auto three = solve_unanimity(L, d, 3);
  const auto four = solve_unanimity(L, d, 4);
  EXPECT_LE(three.x[0], 1.0 - Q);
  EXPECT_LE(three.x[1], 1.0 - Q);
  EXPECT_NEAR(three.x[2], 1.0 / 3.0, 1e-6);
  const double delegate = U({0.2, 0.2, 0.2, 1.0 / 3.0});
  EXPECT_NEAR(three.utility, delegate, 1e-9);
  const double xs = ts::bisect([&](double x) {
    return L * x / (1 - x) * std::pow(S(1, x), 3) - std::pow(S(0, x), 3);
  }, 0.2 + 1e-12, 0.3);
  for (double v : four.x) EXPECT_NEAR(v, xs, 1e-6);
  EXPECT_NEAR(four.utility, U({xs, xs, xs, xs}), 1e-9);
  EXPECT_GT(four.utility - delegate, 1e-5);
}

TEST(Engine, AgreesWithGeneralSolver) {
  for (const auto& f : ts::fixtures()) {
    const TypeDistribution d(f.spec);
    const double Q = d.Q();
    for (int n = 2; n <= 3; ++n) {
      const PolicyTable t = backward_induction(d, n, n);
      const auto& g = t.grid();
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!in_up_cascade(g.odds(i), Q) && !in_down_cascade(g.odds(i), n, Q)) idx.push_back(i);
      }
      for (int k = 0; k < 100; ++k) {
        const std::size_t i = idx[k * (idx.size() - 1) / 99];
        const double L = g.odds(i);
        const auto u = solve_unanimity(L, d, n);
        EXPECT_NEAR(t.canonical(t.row(n, n).sigma[i]), t.canonical(u.x[0]), 1e-6)
            << f.name << " n=" << n << " L=" << L;
      }
    }
  }
}
