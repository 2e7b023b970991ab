#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace vdc;
using namespace testing_support;

namespace {

Rational frac(long a, long b) { return Rational(Integer(a), Integer(b)); }

// All degree profiles (r_2, ..., r_D) with r_D >= 1 and sum r_d <= rmax.
std::vector<std::vector<unsigned>> profiles(unsigned D, unsigned rmax) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> rs(D - 1, 0);
  while (true) {
    unsigned total = 0;
    for (auto v : rs) total += v;
    if (rs.back() >= 1 && total <= rmax) out.push_back(rs);
    std::size_t k = 0;
    while (k < rs.size() && ++rs[k] > rmax) rs[k++] = 0;
    if (k == rs.size()) break;
  }
  return out;
}

}  // namespace

TEST(EtaSame, QuarticInThirteenVariables) {
  const auto rep = eta_same(13, 1, 4);
  EXPECT_EQ(rep.eta, frac(1, 2));
  EXPECT_EQ(rep.exponent, Rational(11));
  EXPECT_TRUE(rep.admissible);
  EXPECT_EQ(rep.threshold, Rational(12));
  const auto low = eta_same(12, 1, 4);
  EXPECT_FALSE(low.admissible);
  EXPECT_FALSE(low.violated.empty());
  EXPECT_THROW(eta_same(13, 1, 3), InvalidInput);
  EXPECT_THROW(eta_same(13, 0, 4), InvalidInput);
}

TEST(EtaSame, ClosedFormAcrossDegrees) {
  for (unsigned d = 4; d <= 7; ++d)
    for (unsigned r = 1; r <= 3; ++r)
      for (unsigned n = 1; n <= 80; n += 7) {
        const Rational K = Rational((Integer(1) << (d - 2)) * (d - 1) * r);
        const Rational eta = K / (Rational(n) + K - 1);
        const auto rep = eta_same(n, r, d);
        EXPECT_EQ(rep.eta, eta);
        EXPECT_EQ(rep.exponent, Rational(n) - Rational(r * d) * (1 - eta));
        EXPECT_EQ(rep.admissible, Rational(n) > K);
      }
}

TEST(Mixed, QuadricPlusQuartic) {
  // (r_2, r_3, r_4) = (1, 0, 1): D' = 5, Delta = 1/2 + 3, threshold 14.
  const auto rep = exponents_mixed(20, {1, 0, 1});
  EXPECT_EQ(rep.D_prime, Rational(5));
  EXPECT_EQ(rep.Delta, frac(7, 2));
  EXPECT_EQ(rep.threshold, Rational(14));
  EXPECT_EQ(rep.eta, frac(14, 33));
  EXPECT_EQ(rep.exponent, frac(565, 33));
  EXPECT_TRUE(rep.admissible);
  EXPECT_EQ(rep.total_degree, Rational(6));
  EXPECT_FALSE(exponents_mixed(14, {1, 0, 1}).admissible);
  EXPECT_TRUE(exponents_mixed(15, {1, 0, 1}).admissible);
  EXPECT_THROW(exponents_mixed(20, {1, 1}), InvalidInput);
  EXPECT_THROW(exponents_mixed(20, {1, 0, 0}), InvalidInput);
}

TEST(Mixed, SpecializesToSameDegree) {
  for (unsigned D = 4; D <= 6; ++D)
    for (unsigned r = 1; r <= 3; ++r) {
      std::vector<unsigned> rs(D - 1, 0);
      rs.back() = r;
      for (unsigned n = 1; n <= 60; ++n) {
        const auto a = exponents_mixed(n, rs);
        const auto b = eta_same(n, r, D);
        EXPECT_EQ(a.eta, b.eta);
        EXPECT_EQ(a.exponent, b.exponent);
        EXPECT_EQ(a.admissible, b.admissible);
      }
    }
}

TEST(RKappa, WorkedValues) {
  const auto a = script_R_kappa({0, 1, 1}, 1);
  EXPECT_EQ(a.R, Rational(2));
  EXPECT_EQ(a.kappa, Rational(6));
  // m = 0: every member contributes 1 to R and 2 to kappa
  const auto b = script_R_kappa({2, 1, 1}, 0);
  EXPECT_EQ(b.R, Rational(4));
  EXPECT_EQ(b.kappa, Rational(8));
  // m = 2, D = 4: quadrics save 1/2, cubics 3/4, quartics 1
  const auto c = script_R_kappa({1, 1, 1}, 2);
  EXPECT_EQ(c.R, frac(1, 2) + frac(3, 4) + 1);
  EXPECT_EQ(c.kappa, Rational(1 + 2 + 4));
  EXPECT_THROW(script_R_kappa({0, 1}, 2), InvalidInput);
}

TEST(RKappa, SweepInequalities) {
  for (unsigned D = 4; D <= 6; ++D)
    for (const auto& rs : profiles(D, 3)) {
      unsigned r = 0;
      for (auto v : rs) r += v;
      EXPECT_EQ(script_R_kappa(rs, 0).R, Rational(r));
      for (unsigned m = 0; m + 2 <= D; ++m) {
        const auto rk = script_R_kappa(rs, m);
        EXPECT_GE(rk.kappa, 2 * rk.R);
        EXPECT_GE(rk.kappa - Rational(r) / 2, rk.R);
      }
    }
}

TEST(Birch, Thresholds) {
  EXPECT_EQ(birch_threshold(2, 1, 0), 5);  // quadrics need n >= 5
  EXPECT_EQ(birch_threshold(4, 1, 0), 49);
  EXPECT_EQ(birch_threshold(3, 2, 1), 1 + 4 * 2 * 6 + 1);
  const auto c = compare_thresholds(4, 1, 0);
  EXPECT_EQ(c.birch, 49);
  EXPECT_EQ(c.same_degree, 13);
  EXPECT_EQ(c.mixed, 13);
  EXPECT_THROW(birch_threshold(1, 1, 0), InvalidInput);
}

TEST(Slope, ExactPowerLaw) {
  std::vector<std::pair<double, double>> rows;
  for (double B : {10.0, 20.0, 40.0, 80.0}) rows.emplace_back(B, 3.0 * std::pow(B, 2.5));
  const auto fit = empirical_slope(rows);
  EXPECT_NEAR(fit.slope, 2.5, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  for (double e : fit.residuals) EXPECT_NEAR(e, 0.0, 1e-10);
  EXPECT_THROW(empirical_slope({{1, 1}, {2, 2}}), InvalidInput);
  EXPECT_THROW(empirical_slope({{2, 1}, {2, 2}, {2, 3}}), InvalidInput);
  EXPECT_THROW(empirical_slope({{1, 0}, {2, 2}, {3, 3}}), InvalidInput);
}

TEST(Slope, SplitQuadricGrowsQuadratically) {
  // x1 x2 = 0 in [-B, B]^3 has (4B + 1)(2B + 1) points
  const auto S = load("split_quadric.sys");
  std::vector<std::pair<double, double>> rows;
  for (std::int64_t B : {10, 20, 40, 80}) {
    const auto N = count_points(S, B).count;
    EXPECT_EQ(N, static_cast<std::uint64_t>((4 * B + 1) * (2 * B + 1)));
    rows.emplace_back(static_cast<double>(B), static_cast<double>(N));
  }
  EXPECT_NEAR(empirical_slope(rows).slope, 2.0, 0.3);
}
