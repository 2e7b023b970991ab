#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace vdc;
using namespace testing_support;

namespace {

bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Polynomial var(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }
Polynomial cst(std::size_t n, long c) { return Polynomial::constant(n, c); }

// Projective points of P^{n-1}(F_p), one representative each (first nonzero = 1).
std::vector<std::vector<std::int64_t>> projective_points(std::size_t n, std::int64_t p) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> x(n, 0);
  while (true) {
    const auto first = std::find_if(x.begin(), x.end(), [](auto v) { return v != 0; });
    if (first != x.end() && *first == 1) out.push_back(x);
    std::size_t pos = n;
    while (pos > 0 && ++x[pos - 1] == p) x[--pos] = 0;
    if (pos == 0) break;
  }
  return out;
}

}  // namespace

TEST(PrimeField, PrimalityMatchesTrialDivision) {
  for (std::uint64_t n = 0; n < 5000; ++n) EXPECT_EQ(is_prime(n), trial_prime(n)) << n;
  EXPECT_TRUE(is_prime(2147483647ULL));
  EXPECT_FALSE(is_prime(2147483649ULL));
  EXPECT_TRUE(is_prime(1000000007ULL));
}

TEST(PrimeField, SegmentedSieveMatchesTrialDivision) {
  for (auto [lo, hi] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{0, 100}, {50, 60}, {9990, 10400}, {200000, 201000}}) {
    std::vector<std::uint64_t> expect;
    for (auto n = lo; n <= hi; ++n)
      if (trial_prime(n)) expect.push_back(n);
    EXPECT_EQ(primes_in_range(lo, hi), expect);
  }
}

TEST(PrimeField, ExtensionFieldAxioms) {
  for (auto [p, k] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 3}, {3, 2}, {5, 2}, {7, 2}}) {
    const ExtensionField K(p, k);
    std::uint32_t q = 1;
    for (unsigned i = 0; i < k; ++i) q *= p;
    ASSERT_EQ(K.order(), q);
    for (std::uint32_t a = 1; a < q; ++a) EXPECT_EQ(K.mul(a, K.inverse(a)), 1u);
    for (std::uint32_t a = 0; a < q; ++a) {
      EXPECT_EQ(K.add(a, K.neg(a)), 0u);
      // a^q = a
      std::uint32_t v = 1;
      for (std::uint32_t e = 0; e < q; ++e) v = K.mul(v, a);
      EXPECT_EQ(v, a);
      for (std::uint32_t b = 0; b < q; b += 3)
        for (std::uint32_t c = 0; c < q; c += 5) EXPECT_EQ(K.mul(a, K.add(b, c)), K.add(K.mul(a, b), K.mul(a, c)));
    }
  }
}

TEST(Groebner, BasisSatisfiesBuchbergerCriterion) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    const std::uint32_t p = trial % 2 ? 7 : 5;
    std::vector<gb::MPoly> gens;
    for (unsigned g = 0; g < 1 + rng() % 3; ++g)
      gens.push_back(gb::from_polynomial(random_poly(rng, n, 1 + rng() % 3, 6, 4, true), p));
    std::erase_if(gens, [](const gb::MPoly& f) { return f.empty(); });
    if (gens.empty()) continue;
    const auto G = gb::groebner(gens, p, n);
    gb::Reducer red(p, 10'000'000);
    for (const auto& f : gens) EXPECT_TRUE(red.normal_form(f, G.basis).empty());
    for (std::size_t i = 0; i < G.basis.size(); ++i)
      for (std::size_t j = i + 1; j < G.basis.size(); ++j)
        EXPECT_TRUE(red.normal_form(gb::s_polynomial(G.basis[i], G.basis[j], p), G.basis).empty());
  }
}

TEST(Groebner, BudgetExhaustionThrows) {
  const std::size_t n = 4;
  std::mt19937_64 rng(2);
  std::vector<gb::MPoly> gens;
  for (int g = 0; g < 3; ++g) gens.push_back(gb::from_polynomial(random_poly(rng, n, 3, 6, 8, true), 7));
  EXPECT_THROW(gb::groebner(gens, 7, n, 3), ResourceExhausted);
}

TEST(Dimension, KnownVarieties) {
  const std::size_t n = 3;
  const std::vector<Polynomial> conic{pow(var(n, 0), 2) + pow(var(n, 1), 2) - pow(var(n, 2), 2)};
  const std::vector<Polynomial> point{pow(var(n, 0), 2), pow(var(n, 1), 2)};
  const std::vector<Polynomial> empty{var(n, 0), var(n, 1), var(n, 2)};
  const std::vector<Polynomial> two_lines{var(n, 0) * var(n, 1)};
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
    EXPECT_EQ(projective_dimension(n, conic, p), 1);
    EXPECT_EQ(projective_dimension(n, point, p), 0);
    EXPECT_EQ(projective_dimension(n, empty, p), -1);
    EXPECT_EQ(projective_dimension(n, two_lines, p), 1);
    EXPECT_EQ(projective_dimension(n, std::vector<Polynomial>{}, p), 2);
    EXPECT_EQ(dimension_bruteforce(n, conic, p, 2).dimension, 1);
    EXPECT_EQ(dimension_bruteforce(n, two_lines, p, 2).dimension, 1);
    EXPECT_EQ(dimension_bruteforce(n, empty, p, 2).dimension, -1);
  }
}

TEST(Profile, ConicIsSmoothCodimensionOne) {
  const auto S = load("conic.sys");
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
    const auto v = variety_profile(S, p);
    EXPECT_EQ(v.rho, 1);
    EXPECT_EQ(v.s, -1);
    EXPECT_EQ(v.proj_count, p + 1);  // a smooth conic with a rational point is a P^1
    EXPECT_EQ(v.sing_count, 0u);
    EXPECT_TRUE(is_smooth_ci(v, 1));
  }
}

TEST(Profile, CountsMatchNaiveEnumeration) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rng() % 2;
    const std::uint64_t p = trial % 3 == 0 ? 5 : 7;
    const Polynomial F = random_poly(rng, n, 2 + rng() % 2, 5, 5, true);
    std::vector<Polynomial> forms{F};
    if (gb::from_polynomial(F, static_cast<std::uint32_t>(p)).empty()) continue;
    const auto v = form_profile(n, forms, p);
    std::uint64_t zeros = 0, sing = 0;
    const auto grad = gradient(F);
    for (const auto& x : projective_points(n, static_cast<std::int64_t>(p))) {
      if (naive_mod(F, x, p) != 0) continue;
      ++zeros;
      bool all = true;
      for (const auto& g : grad) all = all && naive_mod(g, x, p) == 0;
      if (all) ++sing;
    }
    EXPECT_EQ(v.proj_count, zeros);
    EXPECT_EQ(v.sing_count, sing);
    // F_p-rational singular points force s >= 0
    if (sing > 0) EXPECT_GE(v.s, 0);
  }
}

TEST(Profile, DegenerateAndEdgeCases) {
  const std::size_t n = 3;
  const std::vector<Polynomial> square{pow(var(n, 0), 2)};
  const auto v = form_profile(n, square, 5);
  EXPECT_EQ(v.rho, 1);
  EXPECT_EQ(v.s, 1);  // every point of the double line is singular
  const std::vector<Polynomial> none;
  const auto z = form_profile(n, none, 5);
  EXPECT_EQ(z.rho, 0);
  EXPECT_EQ(z.s, -1);
  const std::vector<Polynomial> vanish{cst(n, 5) * pow(var(n, 0), 2)};
  EXPECT_THROW(form_profile(n, vanish, 5), HypothesisFailure);
  const auto lenient = form_profile(n, vanish, 5, {false, true});
  EXPECT_TRUE(lenient.degenerate);
  EXPECT_EQ(lenient.rho, 0);
  EXPECT_EQ(lenient.s, 2);
  // r > n: no maximal minors, s = dim Z
  const std::vector<Polynomial> many{pow(var(2, 0), 2), pow(var(2, 1), 2), var(2, 0) * var(2, 1)};
  const auto m = form_profile(2, many, 5);
  EXPECT_EQ(m.dim, -1);
  EXPECT_EQ(m.s, -1);
  EXPECT_THROW(form_profile(n, square, 4), InvalidInput);
}

TEST(AffineCount, MatchesNaiveLoop) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 2;
    const std::uint64_t p = trial % 2 ? 7 : 11;
    std::vector<Polynomial> polys{random_poly(rng, n, 3, 9, 5)};
    if (trial % 3 == 0) polys.push_back(random_poly(rng, n, 2, 9, 4));
    std::uint64_t expect = 0;
    std::vector<std::int64_t> x(n, 0);
    while (true) {
      bool ok = true;
      for (const auto& f : polys) ok = ok && naive_mod(f, x, p) == 0;
      if (ok) ++expect;
      std::size_t pos = n;
      while (pos > 0 && ++x[pos - 1] == static_cast<std::int64_t>(p)) x[--pos] = 0;
      if (pos == 0) break;
    }
    EXPECT_EQ(affine_count_mod_p(n, polys, p), expect);
  }
}

TEST(Hooley, SphereResidualIsMinusP) {
  // #{x1^2+x2^2+x3^2+x4^2 = 1} over F_p is p^3 - p for odd p.
  const auto S = load("hooley_sphere4.sys");
  for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL}) {
    const auto h = hooley_residual(S, p);
    EXPECT_TRUE(h.certified);
    EXPECT_EQ(h.main_term, Integer(p * p * p));
    EXPECT_EQ(h.residual, -Integer(p));
  }
}

TEST(TSets, DiagonalCubicDimensionsAreCoordinateSubspaces) {
  // H = y . grad G = 3 sum y_i x_i^2, so S_y = {x : x_i = 0 whenever y_i != 0}
  // and dim S_y = #{i : y_i = 0} - 1.
  const auto G = load("diagonal_cubic.sys");
  for (std::uint64_t p : {7ULL, 13ULL}) {
    const auto rep = build_T_sets(G, p);
    EXPECT_EQ(rep.per_y.size(), p * p + p + 1);
    for (const auto& [y, d] : rep.per_y) {
      const int zeros = static_cast<int>(std::count(y.begin(), y.end(), 0u));
      EXPECT_EQ(d, zeros - 1);
    }
    EXPECT_EQ(rep.occupancy_at(2), 0u);
  }
  EXPECT_THROW(build_T_sets(G, 3), HypothesisFailure);
  EXPECT_THROW(build_T_sets(G, 2), HypothesisFailure);
  EXPECT_THROW(build_T_sets(load("cubic_affine.sys"), 7), InvalidInput);
}

TEST(Jacobian, MinorsOfDiagonalQuadrics) {
  const auto S = load("nested_quadrics.sys");
  const auto J = jacobian(S.polys());
  ASSERT_EQ(J.size(), 2u);
  ASSERT_EQ(J[0].size(), 4u);
  const auto minors = maximal_minors(J, 4);
  EXPECT_EQ(minors.size(), 6u);
  // minor on columns (0,1): det [[2x1, 2x2],[2x1, 4x2]] = 4 x1 x2
  EXPECT_EQ(minors[0], cst(4, 4) * var(4, 0) * var(4, 1));
}
