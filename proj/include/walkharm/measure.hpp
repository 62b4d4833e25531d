#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "walkharm/group.hpp"
#include "walkharm/scalar.hpp"

namespace walkharm {

// Finitely supported probability measure on a group. Weights are Rational on
// the exact path and double on the floating path; the two never mix.
template <class S>
class Measure {
 public:
  using Entry = std::pair<Element, S>;

  Measure() = default;

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  // Sorted by element; every weight strictly positive.
  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Element> support() const;
  S weight(Element g) const;
  bool contains(Element g) const;

  Measure<double> to_real() const;

  // Skips validation; for results of operations on already valid measures.
  static Measure from_trusted(GroupPtr group, std::vector<Entry> sorted_entries);

  friend bool operator==(const Measure& a, const Measure& b) {
    return a.group_ == b.group_ && a.entries_ == b.entries_;
  }

 private:
  GroupPtr group_;
  std::vector<Entry> entries_;
};

using RationalMeasure = Measure<Rational>;
using RealMeasure = Measure<double>;

// Validates and canonicalizes: weights > 0, no duplicate elements, total mass
// exactly 1 (Rational) or within 1e-12 (double). On truncations every support
// element must have word length <= 1. Throws ValidationError.
template <class S>
Measure<S> make_measure(GroupPtr group, std::vector<std::pair<Element, S>> entries);

template <class S>
Measure<S> delta(GroupPtr group, Element g) {
  return make_measure<S>(std::move(group), {{g, S(1)}});
}

// Equal weights on the given distinct elements.
template <class S>
Measure<S> uniform(GroupPtr group, const std::vector<Element>& elements);

// (mu * nu)(g) = sum_h mu(h) nu(h^-1 g). Throws ValidationError when the
// measures live on different groups or a product leaves a truncation.
template <class S>
Measure<S> convolve(const Measure<S>& mu, const Measure<S>& nu);

// n-fold convolution power, n >= 1.
template <class S>
Measure<S> power(const Measure<S>& mu, int n);

// Half the L1 distance, in [0, 1].
template <class S>
S tv_distance(const Measure<S>& mu, const Measure<S>& nu);

// mu(g) == mu(g^-1) for all g (1e-12 slack on the floating path).
template <class S>
bool is_symmetric(const Measure<S>& mu);

// The support generates the (finite) group as a semigroup.
template <class S>
bool is_generating(const Measure<S>& mu);

// Least k <= cap with the identity in supp(mu^k), computed on supports only.
template <class S>
std::optional<int> min_return(const Measure<S>& mu, int cap);

// Supports of mu^1 .. mu^n as sorted element sets (finite groups only).
std::vector<std::vector<Element>> support_powers(const FiniteGroup& group, const std::vector<Element>& support, int n);

}  // namespace walkharm
