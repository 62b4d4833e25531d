#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "walkharm/errors.hpp"
#include "walkharm/harmonic.hpp"

using namespace walkharm;

namespace {

GroupFunction<Rational> rfun(const GroupPtr& g, std::vector<Rational> v) { return {g, std::move(v)}; }

std::function<unsigned(unsigned, unsigned)> mul_of(const GroupPtr& g) {
  const auto& fg = require_finite(*g, "test");
  return [&fg](unsigned a, unsigned b) { return fg.mul(a, b); };
}

// Symmetric generating measure: uniform on a random symmetric set containing
// a generating set, with random rational weights paired on inverses.
RationalMeasure random_symmetric(const GroupPtr& g, std::mt19937& rng) {
  const auto& fg = require_finite(*g, "test");
  const Element n = static_cast<Element>(fg.size());
  while (true) {
    std::map<Element, int> raw;
    const int picks = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < picks; ++i) {
      const Element x = static_cast<Element>(rng() % n);
      const int w = 1 + static_cast<int>(rng() % 5);
      raw[x] += w;
      raw[fg.inverse(x)] += w;
    }
    int total = 0;
    for (const auto& [x, w] : raw) total += w;
    std::vector<std::pair<Element, Rational>> e;
    for (const auto& [x, w] : raw) {
      Rational r(w, total);
      r.canonicalize();
      e.emplace_back(x, r);
    }
    auto mu = make_measure<Rational>(g, e);
    if (is_generating(mu)) return mu;
  }
}

std::vector<GroupSpec> corpus() {
  return {GroupSpec::cyclic(4),   GroupSpec::cyclic(5),    GroupSpec::cyclic(6),  GroupSpec::dihedral(3),
          GroupSpec::dihedral(4), GroupSpec::symmetric(3), GroupSpec::quaternion8(), GroupSpec::alternating(4)};
}

}  // namespace

TEST(HarmonicSpaces, Examples) {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto mu = uniform<Rational>(z4, {1, 3});
  const auto har = harmonic_space(mu, Side::right);
  ASSERT_EQ(har.size(), 1u);
  EXPECT_EQ(har[0], constant_function<Rational>(z4, 1));
  const auto anti = anti_harmonic_space(mu, Side::right);
  ASSERT_EQ(anti.size(), 1u);
  EXPECT_EQ(anti[0], rfun(z4, {1, -1, 1, -1}));

  const auto z3 = build_group(GroupSpec::cyclic(3));
  EXPECT_TRUE(anti_harmonic_space(uniform<Rational>(z3, {1, 2}), Side::right).empty());

  const auto s3 = build_group(GroupSpec::symmetric(3));
  const auto id = delta<Rational>(s3, 0);
  EXPECT_EQ(harmonic_space(id, Side::left).size(), 6u);
  EXPECT_EQ(harmonic_space(id, Side::right)[0], constant_function<Rational>(s3, 1));
  EXPECT_TRUE(anti_harmonic_space(id, Side::right).empty());
}

TEST(HarmonicSpaces, BasisVectorsAreEigenvectors) {
  std::mt19937 rng(40);
  for (const auto& spec : corpus()) {
    const auto g = build_group(spec);
    const auto mu = random_symmetric(g, rng);
    for (auto side : {Side::right, Side::left}) {
      for (const auto& f : harmonic_space(mu, side)) EXPECT_EQ(convolve_function(f, mu, side), f);
      for (const auto& f : anti_harmonic_space(mu, side)) {
        auto neg = f;
        for (auto& x : neg.values) x = -x;
        EXPECT_EQ(convolve_function(f, mu, side), neg);
      }
    }
  }
}

TEST(JointlyBiharmonic, Examples) {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto jb = jointly_biharmonic_space(uniform<Rational>(z4, {1, 3}));
  ASSERT_EQ(jb.size(), 2u);
  for (const auto& f : jb) EXPECT_EQ(biconvolve(f, uniform<Rational>(z4, {1, 3})), f);
  const auto z3 = build_group(GroupSpec::cyclic(3));
  const auto jb3 = jointly_biharmonic_space(uniform<Rational>(z3, {1, 2}));
  ASSERT_EQ(jb3.size(), 1u);
  EXPECT_EQ(jb3[0], constant_function<Rational>(z3, 1));
  const auto z2 = build_group(GroupSpec::cyclic(2));
  EXPECT_EQ(jointly_biharmonic_space(delta<Rational>(z2, 1)).size(), 2u);
}

TEST(JointlyBiharmonic, ConstantPlusTwoSidedAntiHarmonic) {
  std::mt19937 rng(41);
  for (const auto& spec : corpus()) {
    const auto g = build_group(spec);
    for (int t = 0; t < 3; ++t) {
      const auto mu = random_symmetric(g, rng);
      for (const auto& f : jointly_biharmonic_space(mu)) {
        const auto d = decompose(f, mu);
        ASSERT_TRUE(d.constant.has_value());
        EXPECT_EQ(d.harmonic, constant_function<Rational>(g, *d.constant));
        auto neg = d.anti_harmonic;
        for (auto& x : neg.values) x = -x;
        EXPECT_EQ(convolve_function(d.anti_harmonic, mu, Side::right), neg);
        EXPECT_EQ(convolve_function(d.anti_harmonic, mu, Side::left), neg);
      }
    }
  }
}

TEST(Decompose, Examples) {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto mu = uniform<Rational>(z4, {1, 3});
  const auto parity = rfun(z4, {1, -1, 1, -1});
  const auto d = decompose(parity, mu);
  EXPECT_EQ(d.harmonic, constant_function<Rational>(z4, 0));
  EXPECT_EQ(d.anti_harmonic, parity);
  EXPECT_EQ(d.constant, Rational(0));

  const auto d2 = decompose(rfun(z4, {2, 0, 2, 0}), mu);
  EXPECT_EQ(d2.harmonic, constant_function<Rational>(z4, 1));
  EXPECT_EQ(d2.anti_harmonic, parity);
  EXPECT_EQ(d2.constant, Rational(1));

  const auto d5 = decompose(constant_function<Rational>(z4, 5), mu);
  EXPECT_EQ(d5.constant, Rational(5));
  EXPECT_EQ(d5.anti_harmonic, constant_function<Rational>(z4, 0));

  EXPECT_THROW(decompose(rfun(z4, {1, 0, 0, 0}), mu), ValidationError);

  // Non-symmetric: parts are returned without a constant.
  const auto e = decompose(rfun(z4, {3, 1, 3, 1}), delta<Rational>(z4, 2));
  EXPECT_TRUE(is_symmetric(delta<Rational>(z4, 2)));
  EXPECT_FALSE(e.constant.has_value());  // symmetric but not generating
  const auto z3 = build_group(GroupSpec::cyclic(3));
  const auto f = decompose(constant_function<Rational>(z3, 4), delta<Rational>(z3, 1));
  EXPECT_FALSE(f.constant.has_value());
  EXPECT_EQ(f.harmonic, constant_function<Rational>(z3, 4));
}

TEST(Decompose, EvenCycleSurrogateOfLatticeParity) {
  const auto z10 = build_group(GroupSpec::cyclic(10));
  std::vector<Rational> v(10);
  for (int i = 0; i < 10; ++i) v[i] = i % 2 == 0 ? 1 : -1;
  const auto d = decompose(rfun(z10, v), uniform<Rational>(z10, {1, 9}));
  EXPECT_EQ(d.constant, Rational(0));
  EXPECT_EQ(d.anti_harmonic.values, v);
}

TEST(AntiCharacter, Examples) {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto chi = find_anti_character(uniform<Rational>(z4, {1, 3}));
  ASSERT_TRUE(chi.has_value());
  EXPECT_EQ(chi->values, (std::vector<int>{1, -1, 1, -1}));
  EXPECT_EQ(chi->kernel(), (std::vector<Element>{0, 2}));
  EXPECT_TRUE(is_character(*chi));

  const auto z3 = build_group(GroupSpec::cyclic(3));
  EXPECT_FALSE(find_anti_character(uniform<Rational>(z3, {1, 2})).has_value());

  const auto f2 = build_group(GroupSpec::free(2, 4));
  const auto& t = require_truncated(*f2, "test");
  const auto chif = find_anti_character(uniform<Rational>(f2, t.generators()));
  ASSERT_TRUE(chif.has_value());
  for (Element g = 0; g < f2->size(); ++g) EXPECT_EQ(chif->values[g], t.length(g) % 2 == 0 ? 1 : -1);
  EXPECT_TRUE(is_character(*chif));

  // A generator step and the identity together cannot both map to -1.
  const auto lazy = make_measure<Rational>(f2, {{0, Rational(1, 2)}, {f2->parse("a"), Rational(1, 2)}});
  EXPECT_FALSE(find_anti_character(lazy).has_value());
}

TEST(AntiCharacter, AgreesWithExhaustiveEnumeration) {
  std::mt19937 rng(42);
  for (const auto& spec : corpus()) {
    const auto g = build_group(spec);
    const auto all = oracle::all_sign_characters(mul_of(g), static_cast<unsigned>(g->size()));
    for (int t = 0; t < 4; ++t) {
      const auto mu = random_symmetric(g, rng);
      std::vector<std::vector<int>> admissible;
      for (const auto& c : all) {
        bool ok = true;
        for (auto s : mu.support()) ok = ok && c[s] == -1;
        if (ok) admissible.push_back(c);
      }
      const auto chi = find_anti_character(mu);
      EXPECT_EQ(chi.has_value(), !admissible.empty());
      if (chi) {
        EXPECT_NE(std::find(admissible.begin(), admissible.end(), chi->values), admissible.end());
      }
      // Existence equivalences: E_-1 != 0 iff a character exists iff -1 is peripheral.
      const auto anti = anti_harmonic_space(mu, Side::right);
      EXPECT_EQ(!anti.empty(), chi.has_value());
      const auto rep = spectrum(right_operator(mu));
      bool minus_one = false;
      for (const auto& e : rep.peripheral) minus_one = minus_one || std::abs(e.value + 1.0) < 1e-8;
      EXPECT_EQ(minus_one, chi.has_value());
      if (chi) {
        EXPECT_EQ(anti.size(), harmonic_space(mu, Side::right).size());
      }
    }
  }
}

TEST(AntiCharacter, GroupsWithoutIndexTwoSubgroup) {
  std::mt19937 rng(43);
  for (auto spec : {GroupSpec::cyclic(3), GroupSpec::cyclic(7), GroupSpec::cyclic(9), GroupSpec::alternating(4)}) {
    const auto g = build_group(spec);
    for (int t = 0; t < 5; ++t) {
      const auto mu = random_symmetric(g, rng);
      EXPECT_TRUE(anti_harmonic_space(mu, Side::right).empty());
      const auto jb = jointly_biharmonic_space(mu);
      ASSERT_EQ(jb.size(), 1u);
      EXPECT_EQ(jb[0], constant_function<Rational>(g, 1));
    }
  }
}

TEST(CharacterFromExtremal, Examples) {
  const auto z2 = build_group(GroupSpec::cyclic(2));
  const auto chi = character_from_extremal(GroupFunction<double>(z2, {1, -1}), delta<Rational>(z2, 1).to_real());
  EXPECT_EQ(chi.values, (std::vector<int>{1, -1}));

  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto mu = uniform<Rational>(z4, {1, 3}).to_real();
  const auto c4 = character_from_extremal(GroupFunction<double>(z4, {-1, 1, -1, 1}), mu);
  EXPECT_EQ(c4.values, (std::vector<int>{1, -1, 1, -1}));
  EXPECT_THROW(character_from_extremal(GroupFunction<double>(z4, {0.5, -0.5, 0.5, -0.5}), mu), ValidationError);
  EXPECT_THROW(character_from_extremal(GroupFunction<double>(z4, {1, 1, 1, 1}), mu), ValidationError);
}

TEST(CharacterFromExtremal, RecoversCharacterFromTranslate) {
  const auto d4 = build_group(GroupSpec::dihedral(4));
  const auto& fg = require_finite(*d4, "test");
  std::mt19937 rng(44);
  for (int t = 0; t < 10; ++t) {
    const auto mu = random_symmetric(d4, rng);
    const auto chi = find_anti_character(mu);
    if (!chi) continue;
    // Left translate of a character is still anti-harmonic for f * mu.
    const Element h = static_cast<Element>(rng() % 8);
    std::vector<double> f(8);
    for (Element x = 0; x < 8; ++x) f[x] = chi->values[fg.mul(h, x)];
    const auto rec = character_from_extremal(GroupFunction<double>(d4, f), mu.to_real());
    EXPECT_TRUE(is_character(rec));
    for (auto s : mu.support()) EXPECT_EQ(rec.values[s], -1);
  }
}

TEST(FactorAndMultiply, Examples) {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto mu = uniform<Rational>(z4, {1, 3});
  const auto chi = *find_anti_character(mu);
  const auto parity = chi.as_function<Rational>();
  EXPECT_EQ(factor_anti_harmonic(parity, chi, mu), constant_function<Rational>(z4, 1));
  auto three = parity;
  for (auto& x : three.values) x *= 3;
  EXPECT_EQ(factor_anti_harmonic(three, chi, mu), constant_function<Rational>(z4, 3));
  EXPECT_EQ(factor_anti_harmonic(constant_function<Rational>(z4, 0), chi, mu), constant_function<Rational>(z4, 0));
  EXPECT_EQ(char_multiply(constant_function<Rational>(z4, 1), chi, mu), parity);
  EXPECT_THROW(char_multiply(parity, chi, mu), ValidationError);
  EXPECT_THROW(factor_anti_harmonic(constant_function<Rational>(z4, 1), chi, mu), ValidationError);
}

TEST(FactorAndMultiply, RoundTripOnCorpus) {
  std::mt19937 rng(45);
  for (const auto& spec : corpus()) {
    const auto g = build_group(spec);
    const auto mu = random_symmetric(g, rng);
    const auto chi = find_anti_character(mu);
    if (!chi) continue;
    for (const auto& h : harmonic_space(mu, Side::right))
      EXPECT_EQ(factor_anti_harmonic(char_multiply(h, *chi, mu), *chi, mu), h);
  }
}

TEST(Boundary, Examples) {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto mu = uniform<Rational>(z4, {1, 3});
  const auto parity = rfun(z4, {1, -1, 1, -1});
  const auto one = constant_function<Rational>(z4, 1);
  EXPECT_EQ(diamond(parity, -1, parity, -1, mu), one);
  EXPECT_EQ(diamond(one, 1, parity, -1, mu), parity);

  const auto z6 = build_group(GroupSpec::cyclic(6));
  const auto b = peripheral_boundary(uniform<Rational>(z6, {1, 5}));
  EXPECT_EQ(b.dimension(), 2u);
  EXPECT_EQ(b.eigenvalues, (std::vector<int>{1, -1}));

  EXPECT_THROW(diamond(one, 1, one, 1, delta<Rational>(z4, 1)), ValidationError);
  EXPECT_THROW(peripheral_boundary(uniform<Rational>(z6, {2, 4})), ValidationError);
}

TEST(Boundary, DiamondMatchesCesaroOracleAndIsAnAlgebra) {
  std::mt19937 rng(46);
  for (const auto& spec : corpus()) {
    const auto g = build_group(spec);
    const std::size_t n = g->size();
    const auto mu = random_symmetric(g, rng);
    const auto muf = mu.to_real();
    const auto b = peripheral_boundary(muf);
    const auto br = peripheral_boundary(mu);
    ASSERT_EQ(b.dimension(), br.dimension());
    const std::vector<double> p = right_operator(muf).entries().data();
    for (std::size_t i = 0; i < b.dimension(); ++i)
      for (std::size_t j = 0; j < b.dimension(); ++j) {
        const auto d = diamond(b.basis[i], b.eigenvalues[i], b.basis[j], b.eigenvalues[j], muf);
        std::vector<double> prod(n);
        for (std::size_t x = 0; x < n; ++x) prod[x] = b.basis[i][x] * b.basis[j][x];
        const auto ces = oracle::cesaro_limit(p, n, prod, b.eigenvalues[i] * b.eigenvalues[j]);
        for (std::size_t x = 0; x < n; ++x) EXPECT_NEAR(d[x], ces[x], 1e-9);
        // Commutative, exactly on the rational path.
        EXPECT_EQ(br.table[i][j], br.table[j][i]);
      }
    // Associativity on the rational basis.
    auto combine = [&](const std::vector<Rational>& coeffs) {
      std::vector<Rational> v(n, 0);
      for (std::size_t k = 0; k < coeffs.size(); ++k)
        for (std::size_t x = 0; x < n; ++x) v[x] += coeffs[k] * br.basis[k][x];
      return v;
    };
    for (std::size_t i = 0; i < br.dimension(); ++i)
      for (std::size_t j = 0; j < br.dimension(); ++j)
        for (std::size_t k = 0; k < br.dimension(); ++k) {
          const int lij = br.eigenvalues[i] * br.eigenvalues[j];
          const int ljk = br.eigenvalues[j] * br.eigenvalues[k];
          const GroupFunction<Rational> ij(g, combine(br.table[i][j]));
          const GroupFunction<Rational> jk(g, combine(br.table[j][k]));
          EXPECT_EQ(diamond(ij, lij, br.basis[k], br.eigenvalues[k], mu),
                    diamond(br.basis[i], br.eigenvalues[i], jk, ljk, mu));
        }
    const auto chi = find_anti_character(mu);
    if (chi) {
      const auto c = chi->as_function<Rational>();
      EXPECT_EQ(diamond(c, -1, c, -1, mu), constant_function<Rational>(g, 1));
    }
  }
}

TEST(MonotoneAbs, Examples) {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto mu = uniform<Rational>(z4, {1, 3});
  const auto chi = find_anti_character(mu)->as_function<Rational>();
  const auto r = monotone_abs_check(chi, mu, 5);
  EXPECT_TRUE(r.all_monotone());
  for (const auto& gap : r.gaps) EXPECT_EQ(gap, 0);

  const auto scaled = rfun(z4, {Rational(7, 10), Rational(-7, 10), Rational(7, 10), Rational(-7, 10)});
  const auto r2 = monotone_abs_check(scaled, mu, 5);
  EXPECT_TRUE(r2.all_monotone());
  ASSERT_EQ(r2.gaps.size(), 6u);
  for (const auto& gap : r2.gaps) EXPECT_EQ(gap, Rational(3, 10));

  EXPECT_THROW(monotone_abs_check(constant_function<Rational>(z4, 1), mu, 3), ValidationError);
  auto big = chi;
  for (auto& x : big.values) x *= 2;
  EXPECT_THROW(monotone_abs_check(big, mu, 3), ValidationError);
}

TEST(Jensen, HoldsOnRandomFunctions) {
  std::mt19937 rng(47);
  const auto s3 = build_group(GroupSpec::symmetric(3));
  for (int t = 0; t < 20; ++t) {
    const auto mu = random_symmetric(s3, rng);
    std::vector<Rational> v(6);
    for (auto& x : v) x = Rational(static_cast<int>(rng() % 21) - 10, 7);
    const auto r = jensen_check(GroupFunction<Rational>(s3, v), mu);
    EXPECT_TRUE(r.holds);
    EXPECT_LE(r.max_excess, 0);
  }
}
