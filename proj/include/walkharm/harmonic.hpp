#pragma once

#include <optional>
#include <vector>

#include "walkharm/markov.hpp"

namespace walkharm {

// Homomorphism into {+1, -1}.
struct Character {
  GroupPtr group;
  std::vector<int> values;

  // Elements with value +1, in element order.
  std::vector<Element> kernel() const;

  template <class S>
  GroupFunction<S> as_function() const {
    std::vector<S> v;
    v.reserve(values.size());
    for (int x : values) v.emplace_back(x);
    return GroupFunction<S>(group, std::move(v));
  }
};

// chi(e) = 1, values in {+-1} and chi(gh) = chi(g) chi(h) wherever gh is
// defined (all pairs on finite groups).
bool is_character(const Character& chi);

// Basis of ker(P -+ I) for the right or left convolution operator. The
// harmonic basis always starts with the constant function 1; the remaining
// vectors (and the whole anti-harmonic basis) are in reduced echelon form.
template <class S>
std::vector<GroupFunction<S>> harmonic_space(const Measure<S>& mu, Side side, double tol = kDefaultTolerance);
template <class S>
std::vector<GroupFunction<S>> anti_harmonic_space(const Measure<S>& mu, Side side, double tol = kDefaultTolerance);

// Basis of {f : mu * f * mu = f}.
template <class S>
std::vector<GroupFunction<S>> jointly_biharmonic_space(const Measure<S>& mu, double tol = kDefaultTolerance);

template <class S>
struct Decomposition {
  GroupFunction<S> input;
  GroupFunction<S> harmonic;       // (f + f * mu) / 2
  GroupFunction<S> anti_harmonic;  // (f - f * mu) / 2
  // Set only when mu is symmetric and generating and f is jointly
  // bi-harmonic; then the harmonic part is this constant.
  std::optional<S> constant;
};

// Requires f * mu * mu = f (ValidationError otherwise). Throws
// ComputationError if the theorem hypotheses hold but the harmonic part is
// not constant.
template <class S>
Decomposition<S> decompose(const GroupFunction<S>& f, const Measure<S>& mu, double tol = kDefaultTolerance);

// A character equal to -1 on supp(mu), or nullopt. Finite groups solve the
// GF(2) system x_g + x_h = x_gh, x_s = 1 (s in supp); truncations solve for
// the generator images. Picks the lexicographically smallest solution.
template <class S>
std::optional<Character> find_anti_character(const Measure<S>& mu);

// Translates an extremal anti-harmonic f (sup norm attained, ~1) so its
// maximum sits at the identity and rounds to a character. ValidationError on
// violated preconditions, ComputationError if the candidate is not a
// character with value -1 on supp(mu).
template <class S>
Character character_from_extremal(const GroupFunction<S>& f, const Measure<S>& mu, double tol = kDefaultTolerance);

// F = f1 * chi with f1 = F * chi harmonic.
template <class S>
GroupFunction<S> factor_anti_harmonic(const GroupFunction<S>& anti, const Character& chi, const Measure<S>& mu,
                                      double tol = kDefaultTolerance);

// h -> h * chi, harmonic to anti-harmonic.
template <class S>
GroupFunction<S> char_multiply(const GroupFunction<S>& harmonic, const Character& chi, const Measure<S>& mu,
                               double tol = kDefaultTolerance);

template <class S>
struct BoundaryBasis {
  std::vector<GroupFunction<S>> basis;
  std::vector<int> eigenvalues;
  // table[i][j][k] = coefficient of basis[k] in basis[i] <> basis[j].
  std::vector<std::vector<std::vector<S>>> table;

  std::size_t dimension() const { return basis.size(); }
};

// Harmonic basis followed by the anti-harmonic basis, with the diamond
// multiplication table. mu must be symmetric and generating.
template <class S>
BoundaryBasis<S> peripheral_boundary(const Measure<S>& mu, double tol = kDefaultTolerance);

// f1 <> f2 for f_i in the lambda_i-eigenspace: the orthogonal projection of
// the pointwise product onto the (lambda_1 lambda_2)-eigenspace. mu must be
// symmetric, so that projection is the spectral one.
template <class S>
GroupFunction<S> diamond(const GroupFunction<S>& f1, int lambda1, const GroupFunction<S>& f2, int lambda2,
                         const Measure<S>& mu, double tol = kDefaultTolerance);

template <class S>
struct MonotoneReport {
  // monotone[n]: P^{n+1}|f| >= P^n|f| pointwise, n < N.
  std::vector<bool> monotone;
  // gaps[n] = 1 - min_g P^n(|f|)(g), n <= N.
  std::vector<S> gaps;

  bool all_monotone() const;
};

// Requires f * mu = -f and ||f||_inf <= 1.
template <class S>
MonotoneReport<S> monotone_abs_check(const GroupFunction<S>& f, const Measure<S>& mu, int steps,
                                     double tol = kDefaultTolerance);

template <class S>
struct JensenReport {
  bool holds = true;
  // max_g (P f)^2(g) - P(f^2)(g); <= 0 when the inequality holds.
  S max_excess;
};

// (P f)^2 <= P(f^2) pointwise, P the right convolution operator.
template <class S>
JensenReport<S> jensen_check(const GroupFunction<S>& f, const Measure<S>& mu, double tol = 1e-12);

}  // namespace walkharm
