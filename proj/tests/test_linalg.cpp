#include <gtest/gtest.h>

#include <random>

#include "walkharm/gf2.hpp"
#include "walkharm/linalg.hpp"

using namespace walkharm;

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(parse_rational("2/4"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(Nullspace, ExactRational) {
  Matrix<Rational> a(2, 3);
  a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
  a(1, 0) = 2; a(1, 1) = 4; a(1, 2) = 6;
  const auto ns = nullspace(a, 0.0);
  ASSERT_EQ(ns.size(), 2u);
  for (const auto& v : ns) {
    const auto r = a.apply(v);
    for (const auto& x : r) EXPECT_EQ(x, 0);
  }
}

TEST(Nullspace, FloatingMatchesExactDimension) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 20; ++t) {
    // Rank-deficient integer matrix: third row = first + second.
    Matrix<Rational> a(3, 5);
    for (int c = 0; c < 5; ++c) {
      a(0, c) = d(rng);
      a(1, c) = d(rng);
      a(2, c) = a(0, c) + a(1, c);
    }
    const auto exact = nullspace(a, 0.0);
    const auto approx = nullspace(matrix_cast<double>(a), 1e-10);
    ASSERT_EQ(exact.size(), approx.size());
    for (std::size_t i = 0; i < exact.size(); ++i)
      for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(exact[i][j].get_d(), approx[i][j], 1e-9);
  }
}

TEST(Nullspace, ComplexIdentityHasNone) {
  EXPECT_TRUE(nullspace(Matrix<Complex>::identity(4), 1e-10).empty());
  EXPECT_EQ(nullspace(Matrix<Complex>(3, 3), 1e-10).size(), 3u);
}

TEST(Coordinates, InsideAndOutsideSpan) {
  std::vector<std::vector<Rational>> basis{{1, 0, 1}, {0, 1, 1}};
  const auto c = coordinates<Rational>(basis, {2, 3, 5}, 0.0);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ((*c)[0], 2);
  EXPECT_EQ((*c)[1], 3);
  EXPECT_FALSE(coordinates<Rational>(basis, {1, 0, 0}, 0.0).has_value());
}

TEST(OrthogonalProjection, ProjectsOntoLine) {
  const auto p = orthogonal_projection<Rational>({{1, 1}}, {1, 0}, 0.0);
  EXPECT_EQ(p[0], Rational(1, 2));
  EXPECT_EQ(p[1], Rational(1, 2));
  const auto pd = orthogonal_projection<double>({{1, 1, 0}, {1, 0, 0}}, {3, 4, 5}, 1e-12);
  EXPECT_NEAR(pd[0], 3, 1e-12);
  EXPECT_NEAR(pd[1], 4, 1e-12);
  EXPECT_NEAR(pd[2], 0, 1e-12);
}

TEST(Gf2, LexSmallestSolution) {
  // x0 + x1 = 1, x1 + x2 = 0: smallest is x0 = 0, x1 = 1, x2 = 1.
  Gf2System sys(3);
  sys.add_equation({0, 1}, true);
  sys.add_equation({1, 2}, false);
  ASSERT_TRUE(sys.consistent());
  EXPECT_EQ(sys.rank(), 2u);
  const auto s = sys.lex_smallest_solution();
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(*s, (std::vector<bool>{false, true, true}));
}

TEST(Gf2, InconsistentAndRepeatedVariables) {
  Gf2System sys(2);
  sys.add_equation({0, 0}, false);  // cancels to 0 = 0
  EXPECT_EQ(sys.rank(), 0u);
  sys.add_equation({0}, true);
  sys.add_equation({1}, true);
  sys.add_equation({0, 1}, true);
  EXPECT_FALSE(sys.consistent());
  EXPECT_FALSE(sys.lex_smallest_solution().has_value());
}

TEST(Gf2, AgreesWithBruteForce) {
  std::mt19937 rng(9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 8;
    Gf2System sys(n);
    std::vector<std::pair<std::vector<std::size_t>, bool>> eqs;
    const int m = static_cast<int>(rng() % 10);
    for (int e = 0; e < m; ++e) {
      std::vector<std::size_t> vars;
      for (std::size_t v = 0; v < n; ++v)
        if (rng() % 3 == 0) vars.push_back(v);
      const bool rhs = rng() % 2;
      sys.add_equation(vars, rhs);
      eqs.emplace_back(vars, rhs);
    }
    // Brute force: variable 0 is the most significant position.
    std::optional<std::vector<bool>> best;
    for (unsigned long mask = 0; mask < (1UL << n) && !best; ++mask) {
      std::vector<bool> x(n);
      for (std::size_t v = 0; v < n; ++v) x[v] = (mask >> (n - 1 - v)) & 1UL;
      bool ok = true;
      for (const auto& [vars, rhs] : eqs) {
        bool s = false;
        for (auto v : vars) s ^= x[v];
        ok = ok && s == rhs;
      }
      if (ok) best = x;
    }
    EXPECT_EQ(sys.consistent(), best.has_value());
    EXPECT_EQ(sys.lex_smallest_solution(), best);
  }
}
