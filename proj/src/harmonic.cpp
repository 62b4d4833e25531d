#include "walkharm/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "walkharm/errors.hpp"
#include "walkharm/gf2.hpp"

namespace walkharm {

namespace {

constexpr std::size_t kAllPairsLimit = 1024;

template <class S>
bool near_equal(const std::vector<S>& a, const std::vector<S>& b, double tol) {
  if (a.size() != b.size()) return false;
  if constexpr (ScalarTraits<S>::exact) {
    return a == b;
  } else {
    const double scale = std::max(1.0, std::max(max_abs<S>(a), max_abs<S>(b)));
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > tol * scale) return false;
    return true;
  }
}

template <class S>
std::vector<S> scaled(const std::vector<S>& v, const S& s) {
  std::vector<S> out(v);
  for (auto& x : out) x *= s;
  return out;
}

template <class S>
std::vector<S> times_character(const std::vector<S>& v, const Character& chi) {
  std::vector<S> out(v);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (chi.values[i] < 0) out[i] = -out[i];
  return out;
}

template <class S>
bool is_eigenfunction(const GroupFunction<S>& f, const Measure<S>& mu, int sign, double tol) {
  return near_equal(convolve_function(f, mu, Side::right).values, scaled(f.values, S(sign)), tol);
}

template <class S>
std::vector<GroupFunction<S>> wrap(const GroupPtr& g, std::vector<std::vector<S>> vs) {
  std::vector<GroupFunction<S>> out;
  for (auto& v : vs) out.emplace_back(g, std::move(v));
  return out;
}

// Greedy generating set: each new element lies outside the subgroup generated
// by the previous ones.
std::vector<Element> generating_set(const FiniteGroup& g) {
  std::vector<Element> gens;
  std::vector<bool> covered(g.size(), false);
  covered[0] = true;
  for (Element x = 1; x < g.size(); ++x) {
    if (covered[x]) continue;
    gens.push_back(x);
    for (auto y : closure(g, gens)) covered[y] = true;
  }
  return gens;
}

template <class S>
void check_character_for(const Character& chi, const Measure<S>& mu) {
  if (chi.group.get() != &mu.group()) throw ValidationError("character and measure live on different groups");
  if (!is_character(chi)) throw ValidationError("not a multiplicative {+-1} character");
  for (auto s : mu.support()) {
    if (chi.values[s] != -1) throw ValidationError("character is not -1 on supp(mu)");
  }
}

template <class S>
std::vector<std::vector<S>> signed_basis(const Measure<S>& mu, int sign, double tol) {
  std::vector<std::vector<S>> out;
  for (auto& f : signed_eigenspace(right_operator(mu), sign, tol)) out.push_back(std::move(f.values));
  return out;
}

template <class S>
std::vector<S> project_product(const std::vector<S>& f1, const std::vector<S>& f2,
                               const std::vector<std::vector<S>>& target_basis, double tol) {
  std::vector<S> prod(f1.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f1[i] * f2[i];
  return orthogonal_projection(target_basis, prod, tol);
}

}  // namespace

std::vector<Element> Character::kernel() const {
  std::vector<Element> out;
  for (Element g = 0; g < values.size(); ++g)
    if (values[g] == 1) out.push_back(g);
  return out;
}

bool is_character(const Character& chi) {
  if (!chi.group || chi.values.size() != chi.group->size()) return false;
  for (int v : chi.values)
    if (v != 1 && v != -1) return false;
  if (chi.values[0] != 1) return false;
  const Group& g = *chi.group;
  if (const auto* t = dynamic_cast<const TruncatedGroup*>(&g)) {
    // A {+-1} function on a ball that is multiplicative against every
    // generator step on both sides is the restriction of a character.
    const auto gens = t->generators();
    for (Element x = 0; x < g.size(); ++x) {
      for (auto s : gens) {
        if (const auto y = g.multiply(x, s); y && chi.values[*y] != chi.values[x] * chi.values[s]) return false;
        if (const auto y = g.multiply(s, x); y && chi.values[*y] != chi.values[x] * chi.values[s]) return false;
      }
    }
    return true;
  }
  const auto& f = static_cast<const FiniteGroup&>(g);
  const auto second = f.size() <= kAllPairsLimit ? std::vector<Element>{} : generating_set(f);
  for (Element x = 0; x < f.size(); ++x) {
    if (second.empty()) {
      for (Element y = 0; y < f.size(); ++y)
        if (chi.values[f.mul(x, y)] != chi.values[x] * chi.values[y]) return false;
    } else {
      for (auto y : second)
        if (chi.values[f.mul(x, y)] != chi.values[x] * chi.values[y]) return false;
    }
  }
  return true;
}

template <class S>
std::vector<GroupFunction<S>> harmonic_space(const Measure<S>& mu, Side side, double tol) {
  auto basis = signed_eigenspace(ConvolutionOperator<S>(mu, side), 1, tol);
  // Every echelon basis vector is 1 at its own pivot and 0 at the others, so
  // the constant function has coefficient 1 on each: swapping it in for the
  // first vector keeps a basis.
  if (!basis.empty()) basis.front() = constant_function<S>(mu.group_ptr(), S(1));
  return basis;
}

template <class S>
std::vector<GroupFunction<S>> anti_harmonic_space(const Measure<S>& mu, Side side, double tol) {
  return signed_eigenspace(ConvolutionOperator<S>(mu, side), -1, tol);
}

template <class S>
std::vector<GroupFunction<S>> jointly_biharmonic_space(const Measure<S>& mu, double tol) {
  const auto left = left_operator(mu);
  const auto right = right_operator(mu);
  Matrix<S> m = left.entries() * right.entries();
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= S(1);
  return wrap<S>(mu.group_ptr(), nullspace(m, tol));
}

template <class S>
Decomposition<S> decompose(const GroupFunction<S>& f, const Measure<S>& mu, double tol) {
  const auto rf = convolve_function(f, mu, Side::right);
  const auto rrf = convolve_function(rf, mu, Side::right);
  if (!near_equal(rrf.values, f.values, tol)) {
    throw ValidationError("decompose: f is not fixed by the square of the Markov operator");
  }
  const S half = S(1) / S(2);
  std::vector<S> t0(f.size());
  std::vector<S> t1(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    t0[i] = (f.values[i] + rf.values[i]) * half;
    t1[i] = (f.values[i] - rf.values[i]) * half;
  }
  Decomposition<S> d{f, GroupFunction<S>(f.group, std::move(t0)), GroupFunction<S>(f.group, std::move(t1)),
                     std::nullopt};
  if (is_symmetric(mu) && is_generating(mu) && near_equal(biconvolve(f, mu).values, f.values, tol)) {
    const S c = d.harmonic.values.front();
    if (!near_equal(d.harmonic.values, std::vector<S>(f.size(), c), tol)) {
      throw ComputationError("decompose: harmonic part of a jointly bi-harmonic function is not constant");
    }
    d.constant = c;
  }
  return d;
}

template <class S>
std::optional<Character> find_anti_character(const Measure<S>& mu) {
  const GroupPtr& gp = mu.group_ptr();
  if (const auto* t = dynamic_cast<const TruncatedGroup*>(gp.get())) {
    Gf2System sys(static_cast<std::size_t>(t->rank()));
    for (auto s : mu.support()) {
      std::vector<std::size_t> vars;
      const auto e = t->generator_exponents(s);
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] % 2 != 0) vars.push_back(i);
      sys.add_equation(vars, true);
    }
    const auto x = sys.lex_smallest_solution();
    if (!x) return std::nullopt;
    Character chi{gp, std::vector<int>(t->size(), 1)};
    for (Element g = 0; g < t->size(); ++g) {
      const auto e = t->generator_exponents(g);
      int parity = 0;
      for (std::size_t i = 0; i < e.size(); ++i)
        if ((*x)[i]) parity += std::abs(e[i]);
      chi.values[g] = parity % 2 == 0 ? 1 : -1;
    }
    return chi;
  }
  const auto& g = require_finite(*gp, "find_anti_character");
  const std::size_t n = g.size();
  Gf2System sys(n);
  const auto right_factors = [&] {
    if (n <= kAllPairsLimit) {
      std::vector<Element> all(n);
      for (Element x = 0; x < n; ++x) all[x] = x;
      return all;
    }
    return generating_set(g);
  }();
  for (Element x = 0; x < n; ++x)
    for (auto y : right_factors) sys.add_equation({x, y, g.mul(x, y)}, false);
  for (auto s : mu.support()) sys.add_equation({s}, true);
  const auto sol = sys.lex_smallest_solution();
  if (!sol) return std::nullopt;
  Character chi{gp, std::vector<int>(n, 1)};
  for (Element x = 0; x < n; ++x) chi.values[x] = (*sol)[x] ? -1 : 1;
  return chi;
}

template <class S>
Character character_from_extremal(const GroupFunction<S>& f, const Measure<S>& mu, double tol) {
  const auto& g = require_finite(mu.group(), "character_from_extremal");
  if (f.group.get() != &g) throw ValidationError("character_from_extremal: function and measure live on different groups");
  const double sup = sup_norm(f);
  if (sup > 1.0 + tol) throw ValidationError("character_from_extremal: sup norm exceeds 1");
  if (sup < 1.0 - tol) throw ValidationError("character_from_extremal: f does not attain an extremal value");
  if (!is_eigenfunction(f, mu, -1, tol)) throw ValidationError("character_from_extremal: f is not anti-harmonic");
  Element peak = 0;
  double peak_mag = -1.0;
  for (Element x = 0; x < g.size(); ++x) {
    const double m = ScalarTraits<S>::magnitude(f.values[x]);
    if (m > peak_mag) {
      peak_mag = m;
      peak = x;
    }
  }
  const S anchor = f.values[peak];
  Character chi{f.group, std::vector<int>(g.size(), 1)};
  for (Element x = 0; x < g.size(); ++x) {
    const S ratio = f.values[g.mul(peak, x)] / anchor;
    const int rounded = ratio < S(0) ? -1 : 1;
    if (ScalarTraits<S>::magnitude(ratio - S(rounded)) > (ScalarTraits<S>::exact ? 0.0 : tol)) {
      throw ComputationError("character_from_extremal: translated f is not {+-1}-valued; f is not extremal");
    }
    chi.values[x] = rounded;
  }
  if (!is_character(chi)) throw ComputationError("character_from_extremal: candidate is not multiplicative");
  for (auto s : mu.support()) {
    if (chi.values[s] != -1) throw ComputationError("character_from_extremal: candidate is not -1 on supp(mu)");
  }
  return chi;
}

template <class S>
GroupFunction<S> factor_anti_harmonic(const GroupFunction<S>& anti, const Character& chi, const Measure<S>& mu,
                                      double tol) {
  check_character_for(chi, mu);
  if (!is_eigenfunction(anti, mu, -1, tol)) throw ValidationError("factor_anti_harmonic: F is not anti-harmonic");
  GroupFunction<S> f1(anti.group, times_character(anti.values, chi));
  if (!is_eigenfunction(f1, mu, 1, tol)) throw ComputationError("factor_anti_harmonic: F * chi is not harmonic");
  return f1;
}

template <class S>
GroupFunction<S> char_multiply(const GroupFunction<S>& harmonic, const Character& chi, const Measure<S>& mu,
                               double tol) {
  check_character_for(chi, mu);
  if (!is_eigenfunction(harmonic, mu, 1, tol)) throw ValidationError("char_multiply: h is not harmonic");
  GroupFunction<S> out(harmonic.group, times_character(harmonic.values, chi));
  if (!is_eigenfunction(out, mu, -1, tol)) throw ComputationError("char_multiply: h * chi is not anti-harmonic");
  return out;
}

template <class S>
GroupFunction<S> diamond(const GroupFunction<S>& f1, int lambda1, const GroupFunction<S>& f2, int lambda2,
                         const Measure<S>& mu, double tol) {
  if (!is_symmetric(mu)) throw ValidationError("diamond: measure must be symmetric");
  for (int l : {lambda1, lambda2})
    if (l != 1 && l != -1) throw ValidationError("diamond: eigenvalues must be +1 or -1");
  if (!is_eigenfunction(f1, mu, lambda1, tol) || !is_eigenfunction(f2, mu, lambda2, tol)) {
    throw ValidationError("diamond: argument is not in the stated eigenspace");
  }
  return GroupFunction<S>(f1.group,
                          project_product(f1.values, f2.values, signed_basis(mu, lambda1 * lambda2, tol), tol));
}

template <class S>
BoundaryBasis<S> peripheral_boundary(const Measure<S>& mu, double tol) {
  if (!is_symmetric(mu)) throw ValidationError("peripheral_boundary: measure must be symmetric");
  if (!is_generating(mu)) throw ValidationError("peripheral_boundary: measure must be generating");
  BoundaryBasis<S> b;
  const auto har = harmonic_space(mu, Side::right, tol);
  const auto anti = anti_harmonic_space(mu, Side::right, tol);
  std::vector<std::vector<S>> har_vecs;
  std::vector<std::vector<S>> anti_vecs;
  for (const auto& f : har) {
    b.basis.push_back(f);
    b.eigenvalues.push_back(1);
    har_vecs.push_back(f.values);
  }
  for (const auto& f : anti) {
    b.basis.push_back(f);
    b.eigenvalues.push_back(-1);
    anti_vecs.push_back(f.values);
  }
  const std::size_t d = b.basis.size();
  b.table.assign(d, std::vector<std::vector<S>>(d, std::vector<S>(d, S(0))));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const bool harmonic_target = b.eigenvalues[i] * b.eigenvalues[j] == 1;
      const auto& target = harmonic_target ? har_vecs : anti_vecs;
      const auto product = project_product(b.basis[i].values, b.basis[j].values, target, tol);
      const auto coords = coordinates(target, product, std::max(tol, 1e-9));
      if (!coords) throw ComputationError("peripheral_boundary: diamond product left its eigenspace");
      const std::size_t offset = harmonic_target ? 0 : har_vecs.size();
      for (std::size_t k = 0; k < coords->size(); ++k) b.table[i][j][offset + k] = (*coords)[k];
    }
  }
  return b;
}

template <class S>
bool MonotoneReport<S>::all_monotone() const {
  return std::all_of(monotone.begin(), monotone.end(), [](bool b) { return b; });
}

template <class S>
MonotoneReport<S> monotone_abs_check(const GroupFunction<S>& f, const Measure<S>& mu, int steps, double tol) {
  if (steps < 0) throw ValidationError("monotone_abs_check: negative step count");
  if (sup_norm(f) > 1.0 + (ScalarTraits<S>::exact ? 0.0 : tol)) {
    throw ValidationError("monotone_abs_check: sup norm exceeds 1");
  }
  if (!is_eigenfunction(f, mu, -1, tol)) throw ValidationError("monotone_abs_check: f is not anti-harmonic");
  MonotoneReport<S> r;
  GroupFunction<S> cur = f;
  for (auto& x : cur.values) x = absolute(x);
  auto gap = [](const GroupFunction<S>& g) -> S { return S(1) - *std::min_element(g.values.begin(), g.values.end()); };
  r.gaps.push_back(gap(cur));
  const S slack = ScalarTraits<S>::exact ? S(0) : S(tol);
  for (int n = 0; n < steps; ++n) {
    auto next = convolve_function(cur, mu, Side::right);
    bool up = true;
    for (std::size_t i = 0; i < next.size(); ++i) up = up && next.values[i] >= cur.values[i] - slack;
    r.monotone.push_back(up);
    r.gaps.push_back(gap(next));
    cur = std::move(next);
  }
  return r;
}

template <class S>
JensenReport<S> jensen_check(const GroupFunction<S>& f, const Measure<S>& mu, double tol) {
  GroupFunction<S> sq = f;
  for (auto& x : sq.values) x *= x;
  const auto pf = convolve_function(f, mu, Side::right);
  const auto psq = convolve_function(sq, mu, Side::right);
  JensenReport<S> r;
  r.max_excess = pf.values[0] * pf.values[0] - psq.values[0];
  for (std::size_t i = 0; i < f.size(); ++i) {
    const S excess = pf.values[i] * pf.values[i] - psq.values[i];
    if (excess > r.max_excess) r.max_excess = excess;
  }
  r.holds = ScalarTraits<S>::exact ? r.max_excess <= S(0) : r.max_excess <= S(tol);
  return r;
}

#define WALKHARM_INSTANTIATE_HARMONIC(S)                                                                          \
  template std::vector<GroupFunction<S>> harmonic_space<S>(const Measure<S>&, Side, double);                    \
  template std::vector<GroupFunction<S>> anti_harmonic_space<S>(const Measure<S>&, Side, double);               \
  template std::vector<GroupFunction<S>> jointly_biharmonic_space<S>(const Measure<S>&, double);                \
  template Decomposition<S> decompose<S>(const GroupFunction<S>&, const Measure<S>&, double);                   \
  template std::optional<Character> find_anti_character<S>(const Measure<S>&);                                  \
  template Character character_from_extremal<S>(const GroupFunction<S>&, const Measure<S>&, double);            \
  template GroupFunction<S> factor_anti_harmonic<S>(const GroupFunction<S>&, const Character&, const Measure<S>&, \
                                                    double);                                                    \
  template GroupFunction<S> char_multiply<S>(const GroupFunction<S>&, const Character&, const Measure<S>&,       \
                                             double);                                                           \
  template GroupFunction<S> diamond<S>(const GroupFunction<S>&, int, const GroupFunction<S>&, int,              \
                                       const Measure<S>&, double);                                              \
  template BoundaryBasis<S> peripheral_boundary<S>(const Measure<S>&, double);                                  \
  template struct MonotoneReport<S>;                                                                            \
  template MonotoneReport<S> monotone_abs_check<S>(const GroupFunction<S>&, const Measure<S>&, int, double);    \
  template JensenReport<S> jensen_check<S>(const GroupFunction<S>&, const Measure<S>&, double);

WALKHARM_INSTANTIATE_HARMONIC(Rational)
WALKHARM_INSTANTIATE_HARMONIC(double)

}  // namespace walkharm
