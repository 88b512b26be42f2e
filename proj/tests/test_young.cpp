#include "orliczdyn/young.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace orliczdyn;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST(Evaluate, ClosedForms) {
  EXPECT_DOUBLE_EQ(evaluate(YoungFunction::power(2), 3.0), 4.5);
  EXPECT_DOUBLE_EQ(evaluate(YoungFunction::alpha_log(2), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(YoungFunction::power(1), -4.0), 4.0);
  EXPECT_DOUBLE_EQ(evaluate(YoungFunction::power(3), 2.0), 8.0 / 3.0);
  EXPECT_DOUBLE_EQ(evaluate(YoungFunction::alpha_log(2), std::exp(1.0)), std::exp(2.0) * 2.0);
  EXPECT_EQ(evaluate(YoungFunction::alpha_log(1.5), 0.0), 0.0);
}

TEST(Evaluate, CustomTableInterpolatesAndRejectsOutside) {
  const auto phi = YoungFunction::custom({{0, 0}, {1, 0.5}, {2, 2}, {4, 8}});
  EXPECT_DOUBLE_EQ(phi(0.5), 0.25);
  EXPECT_DOUBLE_EQ(phi(-1.5), 1.25);
  EXPECT_DOUBLE_EQ(phi(4.0), 8.0);
  EXPECT_THROW(phi(4.5), OutOfRange);
  EXPECT_EQ(phi.domain_end(), 4.0);
}

TEST(Validation, RejectsBadParameters) {
  EXPECT_THROW(YoungFunction::power(0.5), InvalidArgument);
  EXPECT_THROW(YoungFunction::alpha_log(1.0), InvalidArgument);
  EXPECT_THROW(YoungFunction::custom({{0, 0}}), InvalidArgument);
  EXPECT_THROW(YoungFunction::custom({{0, 0.1}, {1, 2}}), InvalidArgument);
  EXPECT_THROW(YoungFunction::custom({{0, 0}, {1, 3}, {2, 4}}), InvalidArgument);  // concave
  EXPECT_THROW(YoungFunction::custom({{0, 0}, {1, 1}, {1, 2}}), InvalidArgument);
  EXPECT_THROW(YoungFunction::custom({{0, 0}, {1, 0.5}}), InvalidArgument);  // never reaches 1
}

TEST(Inverse, SpecExamples) {
  EXPECT_NEAR(inverse(YoungFunction::power(2), 0.5), 1.0, 1e-12);
  EXPECT_EQ(inverse(YoungFunction::power(2), 0.0), 0.0);
  EXPECT_EQ(inverse(YoungFunction::alpha_log(1.5), 0.0), 0.0);
  EXPECT_NEAR(inverse(YoungFunction::power(1), 7.0), 7.0, 7e-12);
}

TEST(Inverse, MatchesPowerClosedForm) {
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
    for (double s : {1e-6, 0.01, 0.5, 1.0, 3.0, 1e4}) {
      const double expect = std::pow(p * s, 1.0 / p);
      EXPECT_NEAR(inverse(YoungFunction::power(p), s), expect, 1e-11 * expect) << p << " " << s;
    }
  }
}

TEST(Inverse, GeneralizedOnFlatCustomSegment) {
  // A custom Phi stays below 1 on [0, 1] then climbs: generalized inverse of
  // a value hit at a vertex returns that vertex.
  const auto phi = YoungFunction::custom({{0, 0}, {1, 0.25}, {2, 1}, {3, 3}});
  EXPECT_NEAR(inverse(phi, 1.0), 2.0, 2e-12);
  EXPECT_NEAR(inverse(phi, 0.125), 0.5, 1e-12);
}

TEST(Complementary, SpecExamples) {
  EXPECT_NEAR(complementary(YoungFunction::power(2), 3.0), 4.5, 1e-10);
  EXPECT_EQ(complementary(YoungFunction::alpha_log(1.5), 0.0), 0.0);
  EXPECT_EQ(complementary(YoungFunction::power(3), 0.0), 0.0);
  EXPECT_EQ(complementary(YoungFunction::power(1), 2.0), kInf);
}

TEST(Complementary, PowerFamilyClosedForm) {
  // Conjugate of t^p/p is y^q/q with 1/p + 1/q = 1.
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const double q = p / (p - 1.0);
    for (double y : {0.1, 0.7, 1.0, 2.5, 6.0}) {
      const double expect = std::pow(y, q) / q;
      EXPECT_NEAR(complementary(YoungFunction::power(p), y), expect, 1e-9 * (1.0 + expect)) << p << " " << y;
    }
  }
}

TEST(Complementary, LinearFamilyBelowSlope) {
  const auto phi = YoungFunction::power(1);
  EXPECT_NEAR(complementary(phi, 0.5), 0.0, 1e-10);
  EXPECT_NEAR(complementary(phi, 1.0), 0.0, 1e-10);
}

TEST(Complementary, AlphaLogAgainstGrid) {
  const auto phi = YoungFunction::alpha_log(1.5);
  for (double y : {0.5, 1.0, 2.0, 5.0}) {
    const double grid = oracle::grid_conjugate([&](double x) { return phi(x); }, y, 50.0, 400000);
    EXPECT_NEAR(complementary(phi, y), grid, 1e-6 * (1.0 + grid)) << y;
    EXPECT_GE(complementary(phi, y) + 1e-10, grid);
  }
}

TEST(Complementary, CustomTableSaturatesAtEnd) {
  // Beyond the table the custom Phi is treated as infinite, so the supremum
  // over [0, T] is finite for every y.
  const auto phi = YoungFunction::custom({{0, 0}, {1, 0.5}, {2, 2}});
  EXPECT_NEAR(complementary(phi, 1.0), 0.5, 1e-9);
  EXPECT_NEAR(complementary(phi, 10.0), 18.0, 1e-8);
}

TEST(Complementary, BiconjugationRecoversPower) {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto phi = YoungFunction::power(p);
    auto psi = [&](double y) { return complementary(phi, y); };
    for (double t : {0.3, 1.0, 1.7, 2.5}) {
      const double back = convex_conjugate(psi, t, 1e4);
      EXPECT_NEAR(back, phi(t), 1e-6) << p << " " << t;
    }
  }
}

TEST(YoungInequality, PowerFamilies) {
  EXPECT_LE(young_inequality_check(YoungFunction::power(2), 2000), 1e-8);
  EXPECT_LE(young_inequality_check(YoungFunction::power(3), 10000), 1e-8);
  EXPECT_LE(young_inequality_check(YoungFunction::power(1), 2000), 1e-8);
  EXPECT_LE(young_inequality_check(YoungFunction::alpha_log(1.5), 2000), 1e-8);
}

TEST(YoungInequality, OriginIsTight) {
  const auto phi = YoungFunction::power(2);
  EXPECT_EQ(0.0 * 0.0 - phi(0.0) - complementary(phi, 0.0), 0.0);
}

TEST(YoungInequality, DeterministicForSeed) {
  const auto phi = YoungFunction::alpha_log(2.0);
  EXPECT_EQ(young_inequality_check(phi, 300, 5), young_inequality_check(phi, 300, 5));
}

TEST(Delta2, SpecExamples) {
  const auto two = delta2_probe(YoungFunction::power(2), 1e-3, 1e3, 200);
  EXPECT_NEAR(two.ratio_sup, 4.0, 1e-12);
  EXPECT_TRUE(two.evidence_only);
  const auto one = delta2_probe(YoungFunction::power(1), 1e-3, 1e3, 200);
  EXPECT_NEAR(one.ratio_sup, 2.0, 1e-12);
  const auto al = delta2_probe(YoungFunction::alpha_log(2), 1e-3, 1e3, 200);
  EXPECT_TRUE(std::isfinite(al.ratio_sup));
  EXPECT_GE(al.ratio_sup, 2.0);
}

TEST(Delta2, AlphaLogMatchesDirectGrid) {
  const double lo = 1e-3;
  const double hi = 1e3;
  const std::size_t n = 200;
  double expect = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i + 1 == n ? hi : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1.0));
    const double r = 4.0 * (1.0 + std::abs(std::log(2 * t))) / (1.0 + std::abs(std::log(t)));
    expect = std::max(expect, r);
  }
  EXPECT_NEAR(delta2_probe(YoungFunction::alpha_log(2), lo, hi, n).ratio_sup, expect, 1e-9 * expect);
}

TEST(Delta2, CustomSkipsPointsBeyondTable) {
  const auto phi = YoungFunction::custom({{0, 0}, {1, 0.5}, {2, 2}});
  const auto r = delta2_probe(phi, 0.1, 2.0, 20);
  EXPECT_GT(r.skipped, 0u);
  EXPECT_GE(r.ratio_sup, 2.0);
}

TEST(Delta2, RejectsBadGrid) {
  EXPECT_THROW(delta2_probe(YoungFunction::power(2), 1.0, 0.5, 10), InvalidArgument);
  EXPECT_THROW(delta2_probe(YoungFunction::power(2), 0.0, 1.0, 10), InvalidArgument);
}

// The alpha-log family is convex only for alpha >= (3 + sqrt 5) / 2; below
// that it bends the wrong way on an interval left of t = 1.
TEST(Convexity, AlphaLogThreshold) {
  EXPECT_LT(convexity_defect(YoungFunction::alpha_log(1.5), 0.05, 0.99, 200), 0.0);
  EXPECT_LT(convexity_defect(YoungFunction::alpha_log(2.0), 0.05, 0.99, 200), 0.0);
  EXPECT_GE(convexity_defect(YoungFunction::alpha_log(2.7), 1e-3, 1e3, 400), -1e-9);
  const auto phi = YoungFunction::alpha_log(1.5);
  EXPECT_GT(2.0 * phi(0.7), phi(0.4) + phi(1.0));  // midpoint inequality fails
}

TEST(Convexity, BuiltinAndCustomConvex) {
  EXPECT_GE(convexity_defect(YoungFunction::power(1), 1e-3, 1e3, 400), -1e-9);
  EXPECT_GE(convexity_defect(YoungFunction::power(2.5), 1e-3, 1e3, 400), -1e-9);
  EXPECT_GE(convexity_defect(YoungFunction::custom({{0, 0}, {1, 0.5}, {2, 2}}), 0.01, 1.9, 100), -1e-9);
}

TEST(Complementary, NonConvexStretchDoesNotTrapSearch) {
  // Grid oracle on the region where the objective has two local maxima.
  const auto phi = YoungFunction::alpha_log(1.5);
  for (double y : {0.3, 0.45, 0.6, 0.8}) {
    const double grid = oracle::grid_conjugate([&](double x) { return phi(x); }, y, 5.0, 200000);
    EXPECT_NEAR(complementary(phi, y), grid, 1e-8) << y;
  }
}

class YoungProperties : public ::testing::TestWithParam<int> {
protected:
  YoungFunction phi() const {
    switch (GetParam()) {
    case 0: return YoungFunction::power(1);
    case 1: return YoungFunction::power(2.5);
    case 2: return YoungFunction::alpha_log(1.5);
    default: return YoungFunction::custom({{0, 0}, {0.5, 0.1}, {1, 0.5}, {3, 4}, {10, 40}});
    }
  }
  double t_max() const { return GetParam() == 3 ? 10.0 : 100.0; }
};

TEST_P(YoungProperties, EvenMonotoneConvex) {
  const auto f = phi();
  std::mt19937_64 rng(31 + GetParam());
  std::uniform_real_distribution<double> u(0.0, t_max());
  for (int i = 0; i < 2000; ++i) {
    const double s = u(rng);
    const double t = u(rng);
    ASSERT_EQ(f(-t), f(t));
    if (s < t) {
      ASSERT_LE(f(s), f(t));
    }
    if (GetParam() != 2) {
      ASSERT_LE(f(0.5 * (s + t)), 0.5 * (f(s) + f(t)) + 1e-12 * (1.0 + f(s) + f(t)));
    }
  }
  EXPECT_EQ(f(0.0), 0.0);
  EXPECT_GT(f(1e-3), 0.0);
}

TEST_P(YoungProperties, InverseRoundTrip) {
  const auto f = phi();
  std::mt19937_64 rng(77 + GetParam());
  std::uniform_real_distribution<double> u(1e-3, t_max());
  for (int i = 0; i < 500; ++i) {
    const double t = u(rng);
    ASSERT_NEAR(inverse(f, f(t)), t, 1e-9 * (1.0 + t)) << t;
  }
}

INSTANTIATE_TEST_SUITE_P(Families, YoungProperties, ::testing::Values(0, 1, 2, 3));
