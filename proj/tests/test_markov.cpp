#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "oracles.hpp"
#include "walkharm/errors.hpp"
#include "walkharm/markov.hpp"

using namespace walkharm;

namespace {

GroupFunction<Rational> rfun(const GroupPtr& g, std::vector<Rational> v) { return {g, std::move(v)}; }

RationalMeasure random_measure(const GroupPtr& g, std::mt19937& rng, std::size_t k) {
  std::uniform_int_distribution<Element> pick(0, static_cast<Element>(g->size() - 1));
  std::map<Element, int> raw;
  while (raw.size() < std::min<std::size_t>(k, g->size())) raw[pick(rng)] = 1 + static_cast<int>(rng() % 7);
  int total = 0;
  for (const auto& [x, w] : raw) total += w;
  std::vector<std::pair<Element, Rational>> e;
  for (const auto& [x, w] : raw) {
    Rational r(w, total);
    r.canonicalize();
    e.emplace_back(x, r);
  }
  return make_measure<Rational>(g, e);
}

GroupFunction<Rational> random_function(const GroupPtr& g, std::mt19937& rng) {
  std::vector<Rational> v(g->size());
  for (auto& x : v) x = static_cast<int>(rng() % 11) - 5;
  return {g, v};
}

// Entry-formula oracle: right entries[g][x] = mu(g^-1 x), left mu(x g^-1).
Matrix<Rational> entry_formula(const FiniteGroup& g, const RationalMeasure& mu, Side side) {
  Matrix<Rational> m(g.size(), g.size());
  for (Element a = 0; a < g.size(); ++a)
    for (Element x = 0; x < g.size(); ++x)
      m(a, x) = mu.weight(side == Side::right ? g.mul(g.inverse(a), x) : g.mul(x, g.inverse(a)));
  return m;
}

Matrix<double> diag(const std::vector<double>& f) {
  Matrix<double> m(f.size(), f.size());
  for (std::size_t i = 0; i < f.size(); ++i) m(i, i) = f[i];
  return m;
}

}  // namespace

TEST(ConvolutionOperator, Examples) {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto op = right_operator(uniform<Rational>(z4, {1, 3}));
  const std::vector<Rational> row0{0, Rational(1, 2), 0, Rational(1, 2)};
  for (Element r = 0; r < 4; ++r)
    for (Element c = 0; c < 4; ++c) EXPECT_EQ(op.entries()(r, c), row0[(c + 4 - r) % 4]);

  const auto s3 = build_group(GroupSpec::symmetric(3));
  EXPECT_EQ(right_operator(delta<Rational>(s3, 0)).entries(), Matrix<Rational>::identity(6));

  const auto& fs3 = require_finite(*s3, "test");
  std::vector<Element> transpositions;
  for (Element x = 1; x < 6; ++x)
    if (fs3.mul(x, x) == 0) transpositions.push_back(x);
  ASSERT_EQ(transpositions.size(), 3u);
  const auto t = right_operator(uniform<Rational>(s3, transpositions)).entries();
  EXPECT_EQ(t, t.transpose());
  for (Element r = 0; r < 6; ++r) {
    Rational row = 0, col = 0;
    for (Element c = 0; c < 6; ++c) {
      row += t(r, c);
      col += t(c, r);
    }
    EXPECT_EQ(row, 1);
    EXPECT_EQ(col, 1);
  }
}

TEST(ConvolutionOperator, MatchesEntryFormulaOracle) {
  std::mt19937 rng(21);
  for (auto spec : {GroupSpec::symmetric(3), GroupSpec::dihedral(4), GroupSpec::quaternion8()}) {
    const auto g = build_group(spec);
    const auto& fg = require_finite(*g, "test");
    for (int t = 0; t < 4; ++t) {
      const auto mu = random_measure(g, rng, 3);
      for (auto side : {Side::right, Side::left})
        EXPECT_EQ(ConvolutionOperator<Rational>(mu, side).entries(), entry_formula(fg, mu, side));
    }
  }
}

TEST(ConvolutionOperator, RejectsTruncations) {
  const auto f2 = build_group(GroupSpec::free(2, 2));
  EXPECT_THROW(right_operator(uniform<Rational>(f2, {f2->parse("a")})), ValidationError);
}

TEST(Apply, Examples) {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto op = right_operator(uniform<Rational>(z4, {1, 3}));
  const auto parity = rfun(z4, {1, -1, 1, -1});
  EXPECT_EQ(apply(op, parity), rfun(z4, {-1, 1, -1, 1}));
  EXPECT_EQ(apply(op, constant_function<Rational>(z4, 7)), constant_function<Rational>(z4, 7));

  const auto z3 = build_group(GroupSpec::cyclic(3));
  const auto shift = right_operator(delta<Rational>(z3, 1));
  EXPECT_EQ(apply(shift, rfun(z3, {10, 20, 30})), rfun(z3, {20, 30, 10}));
  EXPECT_THROW(apply(shift, parity), ValidationError);
}

TEST(Apply, ArrayAgreesWithDirectSumAndOperatorsCommute) {
  std::mt19937 rng(31);
  for (auto spec : {GroupSpec::symmetric(3), GroupSpec::alternating(4), GroupSpec::dihedral(5)}) {
    const auto g = build_group(spec);
    for (int t = 0; t < 4; ++t) {
      const auto mu = random_measure(g, rng, 3);
      const auto nu = random_measure(g, rng, 2);
      const auto f = random_function(g, rng);
      for (auto side : {Side::right, Side::left})
        EXPECT_EQ(apply(ConvolutionOperator<Rational>(mu, side), f), convolve_function(f, mu, side));
      const auto l = left_operator(mu).entries();
      const auto r = right_operator(nu).entries();
      EXPECT_EQ(l * r, r * l);
      // Right operators compose as convolution powers: R_mu R_nu = R_{mu*nu}.
      EXPECT_EQ(right_operator(mu).entries() * r, right_operator(convolve(mu, nu)).entries());
    }
  }
}

TEST(ApplyTruncated, LatticeParity) {
  const auto z = build_group(GroupSpec::lattice(1, 50));
  const auto& t = require_truncated(*z, "test");
  const auto mu = uniform<Rational>(z, {z->parse("1"), z->parse("-1")});
  std::vector<Rational> v(z->size());
  for (Element g = 0; g < z->size(); ++g) v[g] = t.point(g)[0] % 2 == 0 ? 1 : -1;
  const auto out = apply_truncated(mu, PartialFunction<Rational>::total({z, v}), Side::right);
  ASSERT_EQ(out.interior.size(), 99u);
  for (auto g : out.interior) {
    EXPECT_LE(std::abs(t.point(g)[0]), 49);
    EXPECT_EQ(out.result.values[g], -v[g]);
  }
  for (Element g = 0; g < z->size(); ++g)
    EXPECT_EQ(out.result.defined[g], std::binary_search(out.interior.begin(), out.interior.end(), g));
}

TEST(ApplyTruncated, FreeGroupBothSides) {
  const auto f2 = build_group(GroupSpec::free(2, 6));
  const auto& t = require_truncated(*f2, "test");
  const auto mu = uniform<Rational>(f2, t.generators());
  std::vector<Rational> v(f2->size());
  for (Element g = 0; g < f2->size(); ++g) v[g] = t.length(g) % 2 == 0 ? 1 : -1;
  for (auto side : {Side::right, Side::left}) {
    const auto out = apply_truncated(mu, PartialFunction<Rational>::total({f2, v}), side);
    EXPECT_EQ(out.interior.size(), ball_size(Family::free, 2, 5));
    for (auto g : out.interior) EXPECT_EQ(out.result.values[g], -v[g]);
  }
}

TEST(ApplyTruncated, EmptyInteriorWhenNothingDefined) {
  const auto z = build_group(GroupSpec::lattice(1, 1));
  const auto mu = uniform<Rational>(z, {z->parse("1"), z->parse("-1")});
  PartialFunction<Rational> f{z, std::vector<Rational>(z->size()), std::vector<bool>(z->size(), false)};
  EXPECT_TRUE(apply_truncated(mu, f, Side::right).interior.empty());
}

TEST(ApplyTruncated, AgreesWithCyclicSurrogate) {
  // Z_{2R+2} contains the radius R ball of Z; on the interior the two agree.
  const int radius = 6;
  const auto z = build_group(GroupSpec::lattice(1, radius));
  const auto& t = require_truncated(*z, "test");
  const auto cyc = build_group(GroupSpec::cyclic(2 * radius + 2));
  const unsigned n = 2 * radius + 2;
  std::mt19937 rng(7);
  std::vector<Rational> fc(n);
  for (auto& x : fc) x = static_cast<int>(rng() % 9);
  std::vector<Rational> fz(z->size());
  for (Element g = 0; g < z->size(); ++g) fz[g] = fc[(t.point(g)[0] + static_cast<int>(n)) % n];
  const auto mu_z = make_measure<Rational>(z, {{z->parse("1"), Rational(1, 3)}, {z->parse("-1"), Rational(2, 3)}});
  const auto mu_c = make_measure<Rational>(cyc, {{1, Rational(1, 3)}, {n - 1, Rational(2, 3)}});
  const auto full = convolve_function(GroupFunction<Rational>(cyc, fc), mu_c, Side::right);
  const auto part = apply_truncated(mu_z, PartialFunction<Rational>::total({z, fz}), Side::right);
  for (auto g : part.interior) EXPECT_EQ(part.result.values[g], full[(t.point(g)[0] + static_cast<int>(n)) % n]);
}

TEST(Spectrum, CirculantExamples) {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto rep = spectrum(right_operator(uniform<Rational>(z4, {1, 3})));
  ASSERT_EQ(rep.eigenvalues.size(), 3u);
  EXPECT_NEAR(rep.eigenvalues[0].value.real(), 1.0, 1e-12);
  EXPECT_NEAR(rep.eigenvalues[1].value.real(), 0.0, 1e-12);
  EXPECT_EQ(rep.eigenvalues[1].multiplicity, 2);
  EXPECT_NEAR(rep.eigenvalues[2].value.real(), -1.0, 1e-12);
  ASSERT_EQ(rep.peripheral.size(), 2u);

  const auto z3 = build_group(GroupSpec::cyclic(3));
  const auto rep3 = spectrum(right_operator(uniform<Rational>(z3, {1, 2})));
  ASSERT_EQ(rep3.eigenvalues.size(), 2u);
  EXPECT_NEAR(rep3.eigenvalues[1].value.real(), -0.5, 1e-12);
  EXPECT_EQ(rep3.eigenvalues[1].multiplicity, 2);
  EXPECT_EQ(rep3.peripheral.size(), 1u);

  const auto shift = spectrum(right_operator(delta<Rational>(z3, 1)));
  ASSERT_EQ(shift.eigenvalues.size(), 3u);
  EXPECT_EQ(shift.peripheral.size(), 3u);
  for (const auto& e : shift.eigenvalues) EXPECT_NEAR(std::abs(e.value), 1.0, 1e-12);
}

TEST(Spectrum, MatchesCirculantOracle) {
  std::mt19937 rng(12);
  for (unsigned n : {5u, 8u, 11u}) {
    const auto g = build_group(GroupSpec::cyclic(n));
    for (int t = 0; t < 3; ++t) {
      const auto mu = random_measure(g, rng, 3).to_real();
      std::map<unsigned, double> m;
      for (const auto& [x, w] : mu.entries()) m[x] = w;
      auto expected = oracle::circulant_eigenvalues(n, m);
      const auto rep = spectrum(right_operator(mu));
      std::size_t total = 0;
      for (const auto& e : rep.eigenvalues) {
        total += e.multiplicity;
        EXPECT_LE(std::abs(e.value), 1 + 1e-9);
        EXPECT_LE(e.residual, 1e-9);
        int hits = 0;
        for (const auto& x : expected) hits += std::abs(x - e.value) < 1e-7 ? 1 : 0;
        EXPECT_EQ(hits, e.multiplicity);
      }
      EXPECT_EQ(total, n);
    }
  }
}

TEST(Spectrum, SymmetricMeasuresHaveRealSpectrum) {
  const auto s4 = build_group(GroupSpec::symmetric(4));
  const auto& fg = require_finite(*s4, "test");
  std::vector<Element> s{1, fg.inverse(1), 7, fg.inverse(7)};
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  const auto rep = spectrum(right_operator(uniform<Rational>(s4, s)));
  for (const auto& e : rep.eigenvalues) EXPECT_LE(std::abs(e.value.imag()), 1e-9);
}

TEST(Eigenspace, SignedExactAndFloating) {
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto op = right_operator(uniform<Rational>(z4, {1, 3}));
  const auto anti = signed_eigenspace(op, -1);
  ASSERT_EQ(anti.size(), 1u);
  EXPECT_EQ(anti[0], rfun(z4, {1, -1, 1, -1}));
  const auto harm = signed_eigenspace(op, 1);
  ASSERT_EQ(harm.size(), 1u);
  EXPECT_EQ(harm[0], constant_function<Rational>(z4, 1));

  const auto zero = eigenspace(op, Complex(0, 0));
  EXPECT_EQ(zero.size(), 2u);
  const auto real_anti = signed_eigenspace(right_operator(uniform<Rational>(z4, {1, 3}).to_real()), -1);
  ASSERT_EQ(real_anti.size(), 1u);
  EXPECT_NEAR(real_anti[0][1], -1.0, 1e-12);

  const auto z3 = build_group(GroupSpec::cyclic(3));
  const auto w = std::polar(1.0, 2 * std::numbers::pi / 3);
  const auto shift = right_operator(delta<Rational>(z3, 1));
  const auto e = eigenspace(shift, w);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_NEAR(std::abs(e[0][0] - Complex(1, 0)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(e[0][1] - w), 0.0, 1e-9);
}

TEST(Superoperator, Examples) {
  const auto z2 = build_group(GroupSpec::cyclic(2));
  const auto sop = superoperator(delta<Rational>(z2, 1), Side::right);
  EXPECT_EQ(super_apply(sop, diag({1, -1})), diag({-1, 1}));
  EXPECT_EQ(super_apply(sop, Matrix<double>::identity(2)), Matrix<double>::identity(2));
  const auto s4 = build_group(GroupSpec::symmetric(4));
  EXPECT_THROW(superoperator(delta<Rational>(s4, 1), Side::right), ValidationError);
}

TEST(Superoperator, DiagonalRestrictionAndExpectation) {
  std::mt19937 rng(17);
  for (auto spec : {GroupSpec::cyclic(4), GroupSpec::symmetric(3), GroupSpec::quaternion8()}) {
    const auto g = build_group(spec);
    const auto& fg = require_finite(*g, "test");
    const std::size_t n = fg.size();
    for (int t = 0; t < 3; ++t) {
      const auto mu = random_measure(g, rng, 3).to_real();
      std::vector<double> f(n);
      for (auto& x : f) x = static_cast<double>(rng() % 9) - 4;
      Matrix<double> tm(n, n);
      for (std::size_t i = 0; i < n * n; ++i) tm(i / n, i % n) = static_cast<double>(rng() % 7) - 3;
      for (auto side : {Side::right, Side::left}) {
        const OperatorOnMatrices sop(mu, side);
        const auto out = super_apply(sop, diag(f));
        const auto expected = convolve_function(GroupFunction<double>(g, f), mu, side);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(out(i, j), i == j ? expected[i] : 0.0, 1e-12);
        // E o P = P o E.
        const auto lhs = conditional_expectation(super_apply(sop, tm));
        const auto rhs = convolve_function(GroupFunction<double>(g, conditional_expectation(tm)), mu, side);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-12);
        // Trace preserving, and materialize agrees with apply.
        double tr_in = 0, tr_out = 0;
        const auto st = super_apply(sop, tm);
        for (std::size_t i = 0; i < n; ++i) {
          tr_in += tm(i, i);
          tr_out += st(i, i);
        }
        EXPECT_NEAR(tr_in, tr_out, 1e-12);
        const auto big = sop.materialize();
        const auto vec = big.apply(tm.data());
        for (std::size_t i = 0; i < n * n; ++i) EXPECT_NEAR(vec[i], st(i / n, i % n), 1e-12);
      }
    }
  }
}

TEST(Superoperator, PreservesPositivity) {
  std::mt19937 rng(5);
  const auto g = build_group(GroupSpec::dihedral(3));
  const auto mu = random_measure(g, rng, 3).to_real();
  for (auto side : {Side::right, Side::left}) {
    const OperatorOnMatrices sop(mu, side);
    for (int t = 0; t < 5; ++t) {
      Matrix<double> b(6, 6);
      for (std::size_t i = 0; i < 36; ++i) b(i / 6, i % 6) = static_cast<double>(rng() % 5) - 2;
      const auto out = super_apply(sop, b * b.transpose());
      Eigen::MatrixXd e(6, 6);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) e(i, j) = out(i, j);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
    }
  }
}

TEST(FourierCoefficient, Examples) {
  const auto z3 = build_group(GroupSpec::cyclic(3));
  const auto& fg = require_finite(*z3, "test");
  const auto l1 = left_regular(fg, 1);
  EXPECT_EQ(fourier_coefficient(fg, l1, 1), std::vector<double>(3, 1.0));
  EXPECT_EQ(fourier_coefficient(fg, l1, 0), std::vector<double>(3, 0.0));
  EXPECT_EQ(fourier_coefficient(fg, l1, 2), std::vector<double>(3, 0.0));
  EXPECT_EQ(fourier_coefficient(fg, diag({1, 2, 3}), 0), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(fourier_coefficient(fg, diag({1, 2, 3}), 2), std::vector<double>(3, 0.0));
  EXPECT_EQ(fourier_coefficient(fg, Matrix<double>(3, 3), 1), std::vector<double>(3, 0.0));
  EXPECT_THROW(fourier_coefficient(fg, Matrix<double>(2, 2), 1), std::invalid_argument);
}

TEST(FourierCoefficient, ExpansionReconstructs) {
  std::mt19937 rng(13);
  const auto g = build_group(GroupSpec::symmetric(3));
  const auto& fg = require_finite(*g, "test");
  Matrix<double> t(6, 6);
  for (std::size_t i = 0; i < 36; ++i) t(i / 6, i % 6) = static_cast<double>(rng() % 10);
  Matrix<double> sum(6, 6);
  for (Element h = 0; h < 6; ++h) sum = sum + diag(fourier_coefficient(fg, t, h)) * left_regular(fg, h);
  EXPECT_EQ(sum, t);
  // Right regular representation is a homomorphism: rho_g rho_h = rho_gh.
  for (Element a = 0; a < 6; ++a)
    for (Element b = 0; b < 6; ++b) {
      EXPECT_EQ(right_regular(fg, a) * right_regular(fg, b), right_regular(fg, fg.mul(a, b)));
      EXPECT_EQ(left_regular(fg, a) * left_regular(fg, b), left_regular(fg, fg.mul(a, b)));
    }
}

TEST(EigenOperator, Examples) {
  const auto z2 = build_group(GroupSpec::cyclic(2));
  const OperatorOnMatrices s2(delta<Rational>(z2, 1).to_real(), Side::right);
  Matrix<Complex> t2(2, 2);
  t2(0, 0) = 1;
  t2(1, 1) = -1;
  const auto w = eigen_operator_to_function(s2, t2, Complex(-1, 0));
  EXPECT_EQ(w.g, 0u);
  EXPECT_EQ(w.coefficient.values, (std::vector<Complex>{1, -1}));

  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto& f4 = require_finite(*z4, "test");
  const auto mu = uniform<Rational>(z4, {1, 3}).to_real();
  const OperatorOnMatrices s4(mu, Side::right);
  for (Element h = 0; h < 4; ++h) {
    const auto t = matrix_cast<Complex>(diag({1, -1, 1, -1}) * left_regular(f4, h));
    ASSERT_LE(max_abs<Complex>((super_apply(s4, t) + t).data()), 1e-12);
    const auto wt = eigen_operator_to_function(s4, t, Complex(-1, 0));
    const auto& f = wt.coefficient;
    for (Element x = 0; x < 4; ++x)
      EXPECT_NEAR(std::abs(0.5 * (f[(x + 1) % 4] + f[(x + 3) % 4]) + f[x]), 0.0, 1e-12);
    EXPECT_GT(sup_norm(wt.coefficient), 0.5);
  }

  const auto z3 = build_group(GroupSpec::cyclic(3));
  const OperatorOnMatrices s3(delta<Rational>(z3, 1).to_real(), Side::right);
  EXPECT_THROW(eigen_operator_to_function(s3, Matrix<Complex>(3, 3), Complex(1, 0)), ValidationError);
  EXPECT_THROW(eigen_operator_to_function(s2, t2, Complex(1, 0)), ValidationError);
}
