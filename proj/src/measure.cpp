#include "walkharm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "walkharm/errors.hpp"

namespace walkharm {

namespace {

constexpr double kMassTolerance = 1e-12;
constexpr double kSymmetryTolerance = 1e-12;

void require_same_group(const Group& a, const Group& b, const char* what) {
  if (&a != &b) throw ValidationError(std::string(what) + ": measures live on different groups");
}

}  // namespace

template <class S>
std::vector<Element> Measure<S>::support() const {
  std::vector<Element> out;
  out.reserve(entries_.size());
  for (const auto& [g, w] : entries_) out.push_back(g);
  return out;
}

template <class S>
S Measure<S>::weight(Element g) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), g,
                                   [](const Entry& e, Element x) { return e.first < x; });
  return it != entries_.end() && it->first == g ? it->second : S(0);
}

template <class S>
bool Measure<S>::contains(Element g) const {
  return std::binary_search(entries_.begin(), entries_.end(), Entry{g, S(0)},
                            [](const Entry& a, const Entry& b) { return a.first < b.first; });
}

template <class S>
Measure<double> Measure<S>::to_real() const {
  std::vector<Measure<double>::Entry> out;
  out.reserve(entries_.size());
  for (const auto& [g, w] : entries_) out.emplace_back(g, to_double(w));
  return Measure<double>::from_trusted(group_, std::move(out));
}

template <class S>
Measure<S> Measure<S>::from_trusted(GroupPtr group, std::vector<Entry> sorted_entries) {
  Measure m;
  m.group_ = std::move(group);
  m.entries_ = std::move(sorted_entries);
  return m;
}

template <class S>
Measure<S> make_measure(GroupPtr group, std::vector<std::pair<Element, S>> entries) {
  if (!group) throw ValidationError("measure: null group");
  if (entries.empty()) throw ValidationError("measure: empty support");
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  S total(0);
  const auto* truncated = dynamic_cast<const TruncatedGroup*>(group.get());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& [g, w] = entries[i];
    if (g >= group->size()) throw ValidationError("measure: element index " + std::to_string(g) + " out of range");
    if (i > 0 && entries[i - 1].first == g) {
      throw ValidationError("measure: duplicate element " + group->format(g));
    }
    if constexpr (ScalarTraits<S>::exact) w.canonicalize();
    if (!(w > S(0))) throw ValidationError("measure: weight of " + group->format(g) + " is not positive");
    if (truncated && truncated->length(g) > 1) {
      throw ValidationError("measure: support element " + group->format(g) +
                            " has word length > 1 (truncations accept generator steps only)");
    }
    total += w;
  }
  if constexpr (ScalarTraits<S>::exact) {
    if (total != S(1)) throw ValidationError("measure: weights sum to " + to_string(total) + ", not 1");
  } else {
    if (!(std::abs(total - 1.0) <= kMassTolerance)) {
      throw ValidationError("measure: weights sum to " + std::to_string(total) + ", not 1");
    }
  }
  return Measure<S>::from_trusted(std::move(group), std::move(entries));
}

template <class S>
Measure<S> uniform(GroupPtr group, const std::vector<Element>& elements) {
  if (elements.empty()) throw ValidationError("uniform measure on an empty set");
  std::vector<std::pair<Element, S>> entries;
  if constexpr (ScalarTraits<S>::exact) {
    const Rational w(1, static_cast<unsigned long>(elements.size()));
    for (auto g : elements) entries.emplace_back(g, w);
    return make_measure<S>(std::move(group), std::move(entries));
  } else {
    const double w = 1.0 / static_cast<double>(elements.size());
    for (auto g : elements) entries.emplace_back(g, w);
    return make_measure<S>(std::move(group), std::move(entries));
  }
}

template <class S>
Measure<S> convolve(const Measure<S>& mu, const Measure<S>& nu) {
  require_same_group(mu.group(), nu.group(), "convolve");
  std::map<Element, S> acc;
  for (const auto& [h, a] : mu.entries()) {
    for (const auto& [k, b] : nu.entries()) {
      const auto g = mu.group().multiply(h, k);
      if (!g) {
        throw ValidationError("convolve: product " + mu.group().format(h) + "*" + mu.group().format(k) +
                              " leaves the truncation ball");
      }
      acc[*g] += a * b;
    }
  }
  std::vector<typename Measure<S>::Entry> entries(acc.begin(), acc.end());
  return Measure<S>::from_trusted(mu.group_ptr(), std::move(entries));
}

template <class S>
Measure<S> power(const Measure<S>& mu, int n) {
  if (n < 1) throw ValidationError("power: exponent must be >= 1");
  Measure<S> out = mu;
  for (int i = 1; i < n; ++i) out = convolve(out, mu);
  return out;
}

template <class S>
S tv_distance(const Measure<S>& mu, const Measure<S>& nu) {
  require_same_group(mu.group(), nu.group(), "tv_distance");
  std::map<Element, S> diff;
  for (const auto& [g, w] : mu.entries()) diff[g] += w;
  for (const auto& [g, w] : nu.entries()) diff[g] -= w;
  S total(0);
  for (const auto& [g, d] : diff) total += absolute(d);
  return total / S(2);
}

template <class S>
bool is_symmetric(const Measure<S>& mu) {
  for (const auto& [g, w] : mu.entries()) {
    const S other = mu.weight(mu.group().inverse(g));
    if constexpr (ScalarTraits<S>::exact) {
      if (other != w) return false;
    } else {
      if (std::abs(other - w) > kSymmetryTolerance) return false;
    }
  }
  return true;
}

template <class S>
bool is_generating(const Measure<S>& mu) {
  const auto& g = require_finite(mu.group(), "is_generating");
  return closure(g, mu.support()).size() == g.size();
}

std::vector<std::vector<Element>> support_powers(const FiniteGroup& group, const std::vector<Element>& support,
                                                 int n) {
  std::vector<std::vector<Element>> out;
  if (n < 1) return out;
  std::vector<Element> current = support;
  std::sort(current.begin(), current.end());
  out.push_back(current);
  std::vector<bool> mark(group.size(), false);
  for (int k = 2; k <= n; ++k) {
    std::fill(mark.begin(), mark.end(), false);
    for (auto x : current)
      for (auto s : support) mark[group.mul(x, s)] = true;
    current.clear();
    for (Element g = 0; g < group.size(); ++g)
      if (mark[g]) current.push_back(g);
    out.push_back(current);
  }
  return out;
}

template <class S>
std::optional<int> min_return(const Measure<S>& mu, int cap) {
  const auto& group = require_finite(mu.group(), "min_return");
  const auto support = mu.support();
  std::vector<Element> current = support;
  std::vector<bool> mark(group.size(), false);
  for (int k = 1; k <= cap; ++k) {
    if (std::binary_search(current.begin(), current.end(), group.identity())) return k;
    std::fill(mark.begin(), mark.end(), false);
    for (auto x : current)
      for (auto s : support) mark[group.mul(x, s)] = true;
    current.clear();
    for (Element g = 0; g < group.size(); ++g)
      if (mark[g]) current.push_back(g);
  }
  return std::nullopt;
}

#define WALKHARM_INSTANTIATE_MEASURE(S)                                                            \
  template class Measure<S>;                                                                       \
  template Measure<S> make_measure<S>(GroupPtr, std::vector<std::pair<Element, S>>);              \
  template Measure<S> uniform<S>(GroupPtr, const std::vector<Element>&);                           \
  template Measure<S> convolve<S>(const Measure<S>&, const Measure<S>&);                           \
  template Measure<S> power<S>(const Measure<S>&, int);                                            \
  template S tv_distance<S>(const Measure<S>&, const Measure<S>&);                                 \
  template bool is_symmetric<S>(const Measure<S>&);                                                \
  template bool is_generating<S>(const Measure<S>&);                                               \
  template std::optional<int> min_return<S>(const Measure<S>&, int);

WALKHARM_INSTANTIATE_MEASURE(Rational)
WALKHARM_INSTANTIATE_MEASURE(double)

}  // namespace walkharm
