#include "orliczdyn/orlicz.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace orliczdyn;

using ZVec = OrliczVector<Integers>;
using HVec = OrliczVector<Heisenberg>;

TEST(Vector, PrunesZerosAndAccumulates) {
  ZVec f{{0, 1.0}, {1, 0.0}, {0, 2.0}, {5, -1.0}};
  EXPECT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0], 3.0);
  EXPECT_EQ(f[1], 0.0);
  const ZVec g = f - f;
  EXPECT_TRUE(g.empty());
  EXPECT_TRUE((0.0 * f).empty());
  EXPECT_EQ((f + ZVec{{5, 1.0}}).size(), 1u);
}

TEST(Vector, IndicatorAndRestriction) {
  const CompactSet<Integers> B{1, 2, 3};
  const auto chi = ZVec::indicator(B);
  EXPECT_EQ(chi.size(), 3u);
  EXPECT_EQ(chi.support_set(), B);
  const auto r = ZVec{{1, 4.0}, {7, 2.0}}.restricted_to(B);
  EXPECT_EQ(r, ZVec({{1, 4.0}}));
  EXPECT_EQ(r.sup_abs(), 4.0);
}

TEST(Modular, SpecExamples) {
  const auto p2 = YoungFunction::power(2);
  EXPECT_EQ(modular(ZVec{}, p2, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(modular(ZVec{{0, 1.0}, {4, 1.0}}, p2, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(modular(ZVec{{7, 3.0}}, YoungFunction::power(1), 3.0), 1.0);
  EXPECT_THROW(modular(ZVec{{0, 1.0}}, p2, 0.0), InvalidArgument);
}

TEST(Modular, NonincreasingInScale) {
  const ZVec f{{0, 1.5}, {1, -0.2}, {3, 4.0}};
  const auto phi = YoungFunction::alpha_log(1.5);
  double prev = std::numeric_limits<double>::infinity();
  for (double k = 0.1; k < 50.0; k *= 1.3) {
    const double m = modular(f, phi, k);
    EXPECT_LE(m, prev);
    prev = m;
  }
}

TEST(Norm, SpecExamples) {
  const auto p2 = YoungFunction::power(2);
  EXPECT_EQ(luxemburg_norm(ZVec{}, p2), 0.0);
  EXPECT_NEAR(luxemburg_norm(ZVec{{0, 2.0}, {1, 2.0}}, p2), 2.0, 1e-12);
  EXPECT_NEAR(luxemburg_norm(ZVec{{0, 1.0}, {1, 1.0}}, p2), 1.0, 1e-12);
  EXPECT_NEAR(luxemburg_norm(ZVec{{3, 3.0}}, YoungFunction::power(1)), 3.0, 3e-12);
}

TEST(Norm, NonFiniteRejected) {
  const auto p2 = YoungFunction::power(2);
  EXPECT_THROW(luxemburg_norm(ZVec{{0, std::numeric_limits<double>::infinity()}}, p2), NonFinite);
  EXPECT_THROW(luxemburg_norm(ZVec{{0, std::nan("")}}, p2), NonFinite);
}

TEST(Norm, PowerClosedFormOnRandomVectors) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  std::uniform_int_distribution<int> len(1, 30);
  std::uniform_real_distribution<double> pd(1.0, 6.0);
  for (int t = 0; t < 100; ++t) {
    const double p = t % 10 == 0 ? 1.0 : pd(rng);
    ZVec::storage_type s;
    std::vector<double> vals;
    for (int i = len(rng); i > 0; --i) {
      const double v = val(rng);
      s[static_cast<integer>(vals.size())] = v;
      vals.push_back(v);
    }
    const double expect = oracle::power_norm(vals, p);
    EXPECT_NEAR(luxemburg_norm(ZVec(s), YoungFunction::power(p)), expect, 1e-9 * expect) << p;
  }
}

TEST(Norm, AlphaLogAgainstIndependentBisection) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  for (double alpha : {1.5, 2.0, 3.0}) {
    const auto phi = YoungFunction::alpha_log(alpha);
    auto ref_phi = [alpha](double t) { return t == 0.0 ? 0.0 : std::pow(t, alpha) * (1.0 + std::abs(std::log(t))); };
    for (int t = 0; t < 20; ++t) {
      ZVec::storage_type s;
      std::vector<double> vals;
      for (int i = 0; i < 12; ++i) {
        vals.push_back(val(rng));
        s[i] = vals.back();
      }
      const double expect = oracle::bisect_norm(vals, ref_phi);
      EXPECT_NEAR(luxemburg_norm(ZVec(s), phi), expect, 1e-10 * expect);
    }
  }
}

TEST(Norm, CustomTableAgainstIndependentBisection) {
  const std::vector<std::pair<double, double>> tab{{0, 0}, {0.5, 0.1}, {1, 0.5}, {2, 2}, {4, 8}};
  const auto phi = YoungFunction::custom(tab);
  auto ref_phi = [&](double t) {
    if (t > 4.0) return std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < tab.size(); ++i) {
      if (t <= tab[i].first) {
        const double s = (t - tab[i - 1].first) / (tab[i].first - tab[i - 1].first);
        return tab[i - 1].second + s * (tab[i].second - tab[i - 1].second);
      }
    }
    return tab.back().second;
  };
  const std::vector<double> vals{3.0, 0.2, 1.0, 5.0};
  const ZVec f{{0, 3.0}, {1, 0.2}, {2, 1.0}, {3, 5.0}};
  const double expect = oracle::bisect_norm(vals, ref_phi);
  EXPECT_NEAR(luxemburg_norm(f, phi), expect, 1e-10 * expect);
}

TEST(IndicatorClosedForm, SpecExamples) {
  EXPECT_NEAR(indicator_norm_closed_form(1, YoungFunction::power(1)), 1.0, 1e-12);
  EXPECT_NEAR(indicator_norm_closed_form(2, YoungFunction::power(2)), 1.0, 1e-12);
  EXPECT_NEAR(indicator_norm_closed_form(8, YoungFunction::power(2)), 2.0, 1e-11);
  EXPECT_THROW(indicator_norm_closed_form(0, YoungFunction::power(2)), InvalidArgument);
}

TEST(IndicatorClosedForm, MatchesBisectionBothFamilies) {
  for (const auto& phi : {YoungFunction::power(2), YoungFunction::power(3.5), YoungFunction::alpha_log(1.5),
                          YoungFunction::alpha_log(2.0)}) {
    for (std::size_t m = 1; m <= 64; ++m) {
      ZVec::storage_type s;
      for (std::size_t i = 0; i < m; ++i) s[static_cast<integer>(3 * i)] = 1.0;
      const double closed = indicator_norm_closed_form(m, phi);
      EXPECT_NEAR(luxemburg_norm(ZVec(s), phi), closed, 1e-9 * closed) << m;
    }
  }
}

TEST(Translate, SpecExamples) {
  EXPECT_EQ(translate(ZVec{{0, 1.0}}, Integers{}, 3), ZVec({{3, 1.0}}));
  Heisenberg h;
  EXPECT_EQ(translate(HVec{{{0, 0, 0}, 1.0}}, h, {3, 0, 2}), HVec({{{3, 0, 2}, 1.0}}));
  const HVec f{{{1, 2, 3}, 1.0}, {{0, -1, 4}, -2.5}};
  EXPECT_EQ(translate(translate(f, h, {3, 0, 2}), h, h.inv({3, 0, 2})), f);
}

TEST(Translate, RightMultiplicationInHeisenberg) {
  // g(x a) = f(x): with x = (1, 2, 0), a = (0, 1, 0), x a = (1, 3, 1).
  Heisenberg h;
  const auto g = translate(HVec{{{1, 2, 0}, 5.0}}, h, {0, 1, 0});
  EXPECT_EQ((g[{1, 3, 1}]), 5.0);
}

namespace {

template <class G, class Draw>
void invariance_trials(const G& grp, Draw&& draw, std::mt19937_64& rng, const YoungFunction& phi, int trials) {
  std::uniform_real_distribution<double> val(-20.0, 20.0);
  std::uniform_int_distribution<int> len(1, 25);
  for (int t = 0; t < trials; ++t) {
    typename OrliczVector<G>::storage_type s;
    for (int i = len(rng); i > 0; --i) s[draw()] = val(rng);
    const OrliczVector<G> f(s);
    const auto a = draw();
    const double n = luxemburg_norm(f, phi);
    const double nt = luxemburg_norm(translate(f, grp, a), phi);
    ASSERT_LE(std::abs(nt - n), 1e-12 * (1.0 + n));
  }
}

} // namespace

TEST(NormProperties, TranslationInvarianceAllGroups) {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<integer> d(-30, 30);
  for (const auto& phi : {YoungFunction::power(2), YoungFunction::alpha_log(1.5)}) {
    invariance_trials(Integers{}, [&] { return d(rng); }, rng, phi, 40);
    invariance_trials(Lattice{2}, [&] { return Lattice::element_type{d(rng), d(rng)}; }, rng, phi, 40);
    invariance_trials(Heisenberg{}, [&] { return Heisenberg::element_type{d(rng), d(rng), d(rng)}; }, rng, phi, 40);
  }
}

class NormProperties : public ::testing::TestWithParam<int> {
protected:
  YoungFunction phi() const {
    switch (GetParam()) {
    case 0: return YoungFunction::power(1);
    case 1: return YoungFunction::power(2);
    case 2: return YoungFunction::power(4.5);
    case 3: return YoungFunction::alpha_log(3.0);
    default: return YoungFunction::custom({{0, 0}, {0.5, 0.1}, {1, 0.5}, {3, 4}, {40, 400}});
    }
  }

  ZVec random_vector(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    std::uniform_int_distribution<integer> pos(-10, 10);
    std::uniform_int_distribution<int> len(1, 12);
    ZVec::storage_type s;
    for (int i = len(rng); i > 0; --i) s[pos(rng)] = val(rng);
    return ZVec(s);
  }
};

TEST_P(NormProperties, Homogeneity) {
  std::mt19937_64 rng(10 + GetParam());
  std::uniform_real_distribution<double> c(-4.0, 4.0);
  for (int t = 0; t < 100; ++t) {
    const auto f = random_vector(rng);
    const double s = c(rng);
    const double n = luxemburg_norm(f, phi());
    ASSERT_NEAR(luxemburg_norm(s * f, phi()), std::abs(s) * n, 1e-10 * std::abs(s) * n + 1e-300);
  }
}

TEST_P(NormProperties, TriangleInequality) {
  std::mt19937_64 rng(20 + GetParam());
  for (int t = 0; t < 200; ++t) {
    const auto f = random_vector(rng);
    const auto g = random_vector(rng);
    ASSERT_LE(luxemburg_norm(f + g, phi()), luxemburg_norm(f, phi()) + luxemburg_norm(g, phi()) + 1e-10);
  }
}

TEST_P(NormProperties, DefinitenessAndUnitModular) {
  std::mt19937_64 rng(30 + GetParam());
  EXPECT_EQ(luxemburg_norm(ZVec{}, phi()), 0.0);
  for (int t = 0; t < 100; ++t) {
    const auto f = random_vector(rng);
    const double n = luxemburg_norm(f, phi());
    ASSERT_GT(n, 0.0);
    const double m = modular(f, phi(), n);
    ASSERT_GE(m, 1.0 - 1e-9);
    ASSERT_LE(m, 1.0 + 1e-9);
  }
}

TEST_P(NormProperties, MonotoneUnderPointwiseDomination) {
  std::mt19937_64 rng(40 + GetParam());
  std::uniform_real_distribution<double> shrink(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto f = random_vector(rng);
    const auto g = f.multiplied_by([&](const integer&) { return shrink(rng); });
    ASSERT_LE(luxemburg_norm(g, phi()), luxemburg_norm(f, phi()) * (1.0 + 1e-12));
  }
}

INSTANTIATE_TEST_SUITE_P(Families, NormProperties, ::testing::Values(0, 1, 2, 3, 4));
