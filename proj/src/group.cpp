#include "walkharm/group.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <deque>
#include <numeric>
#include <random>
#include <stdexcept>

#include "walkharm/errors.hpp"

namespace walkharm {

namespace {

constexpr std::size_t kTableLimit = 2048;
constexpr std::size_t kFullAssociativityLimit = 64;
constexpr std::size_t kSampledTriples = 4096;

std::string kind_error(const GroupSpec& spec, const std::string& msg) {
  return std::string(to_string(spec.kind)) + " group: " + msg;
}

std::optional<long long> parse_integer(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

// Lexicographic rank of a permutation among all permutations of its size.
std::size_t permutation_rank(const std::vector<int>& perm) {
  const std::size_t n = perm.size();
  std::size_t rank = 0;
  std::vector<bool> used(n, false);
  std::size_t factorial = 1;
  for (std::size_t i = 1; i < n; ++i) factorial *= i;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t smaller = 0;
    for (int v = 0; v < perm[i]; ++v) smaller += used[static_cast<std::size_t>(v)] ? 0 : 1;
    rank += smaller * factorial;
    used[static_cast<std::size_t>(perm[i])] = true;
    if (n - 1 - i > 0) factorial /= (n - 1 - i);
  }
  return rank;
}

bool is_even(const std::vector<int>& perm) {
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j] ? 1 : 0;
  return inversions % 2 == 0;
}

struct PermutationGroupData {
  std::vector<std::vector<int>> perms;
  std::vector<Element> rank_to_index;  // full S_n rank -> index (or sentinel)
};

std::shared_ptr<const PermutationGroupData> enumerate_permutations(int degree, bool even_only) {
  auto data = std::make_shared<PermutationGroupData>();
  std::vector<int> p(static_cast<std::size_t>(degree));
  std::iota(p.begin(), p.end(), 0);
  std::size_t total = 1;
  for (int i = 2; i <= degree; ++i) total *= static_cast<std::size_t>(i);
  data->rank_to_index.assign(total, static_cast<Element>(-1));
  std::size_t rank = 0;
  do {
    if (!even_only || is_even(p)) {
      data->rank_to_index[rank] = static_cast<Element>(data->perms.size());
      data->perms.push_back(p);
    }
    ++rank;
  } while (std::next_permutation(p.begin(), p.end()));
  return data;
}

FiniteGroup::Rule permutation_rule(std::shared_ptr<const PermutationGroupData> data) {
  return [data](Element g, Element h) {
    const auto& a = data->perms[g];
    const auto& b = data->perms[h];
    std::vector<int> c(a.size());
    // (g h)(x) = g(h(x)).
    for (std::size_t x = 0; x < a.size(); ++x) c[x] = a[static_cast<std::size_t>(b[x])];
    return data->rank_to_index[permutation_rank(c)];
  };
}

// Q8 elements: index 2u + s for unit u in {1, i, j, k} and sign s (1 = negative).
FiniteGroup::Rule quaternion_rule() {
  // unit product table: result unit and sign flip for (1,i,j,k) x (1,i,j,k).
  static constexpr std::array<std::array<std::pair<int, int>, 4>, 4> units = {{
      {{{0, 0}, {1, 0}, {2, 0}, {3, 0}}},
      {{{1, 0}, {0, 1}, {3, 0}, {2, 1}}},
      {{{2, 0}, {3, 1}, {0, 1}, {1, 0}}},
      {{{3, 0}, {2, 0}, {1, 1}, {0, 1}}},
  }};
  return [](Element g, Element h) {
    const auto [u, flip] = units[g / 2][h / 2];
    const unsigned sign = (g % 2) ^ (h % 2) ^ static_cast<unsigned>(flip);
    return static_cast<Element>(2 * u + static_cast<int>(sign));
  };
}

FiniteGroupPtr build_table_group(const GroupSpec& spec) {
  const auto& t = spec.table;
  const std::size_t n = t.size();
  if (n == 0) throw ValidationError(kind_error(spec, "empty multiplication table"));
  if (n > kMaxFiniteOrder) throw ValidationError(kind_error(spec, "order exceeds 65536"));
  for (std::size_t i = 0; i < n; ++i) {
    if (t[i].size() != n) throw ValidationError(kind_error(spec, "table is not square"));
    std::vector<bool> seen(n, false);
    for (auto v : t[i]) {
      if (v >= n) throw ValidationError(kind_error(spec, "table entry out of range"));
      if (seen[v]) throw ValidationError(kind_error(spec, "table is not a Latin square (row " + std::to_string(i) + ")"));
      seen[v] = true;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[t[i][j]]) throw ValidationError(kind_error(spec, "table is not a Latin square (column " + std::to_string(j) + ")"));
      seen[t[i][j]] = true;
    }
  }
  for (std::size_t g = 0; g < n; ++g) {
    if (t[0][g] != g || t[g][0] != g) throw ValidationError(kind_error(spec, "element 0 is not a two-sided identity"));
  }
  auto table = std::make_shared<std::vector<std::vector<Element>>>(t);
  return std::make_shared<FiniteGroup>(spec.label(), n, [table](Element g, Element h) { return (*table)[g][h]; });
}

FiniteGroupPtr build_product_group(const GroupSpec& spec) {
  if (spec.factors.empty()) throw ValidationError(kind_error(spec, "no factors"));
  std::vector<FiniteGroupPtr> factors;
  std::size_t order = 1;
  for (const auto& f : spec.factors) {
    factors.push_back(build_finite_group(f));
    order *= factors.back()->size();
    if (order > kMaxFiniteOrder) throw ValidationError(kind_error(spec, "order exceeds 65536"));
  }
  auto rule = [factors](Element g, Element h) {
    Element out = 0;
    Element scale = 1;
    for (std::size_t i = factors.size(); i-- > 0;) {
      const auto n = static_cast<Element>(factors[i]->size());
      const Element a = g % n;
      const Element b = h % n;
      g /= n;
      h /= n;
      out += factors[i]->mul(a, b) * scale;
      scale *= n;
    }
    return out;
  };
  return std::make_shared<FiniteGroup>(spec.label(), order, rule);
}

void check_order(const GroupSpec& spec, std::size_t order) {
  if (order == 0 || order > kMaxFiniteOrder) {
    throw ValidationError(kind_error(spec, "order " + std::to_string(order) + " outside [1, 65536]"));
  }
}

}  // namespace

std::string_view to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::cyclic: return "cyclic";
    case GroupKind::dihedral: return "dihedral";
    case GroupKind::symmetric: return "symmetric";
    case GroupKind::alternating: return "alternating";
    case GroupKind::quaternion8: return "quaternion8";
    case GroupKind::table: return "table";
    case GroupKind::product: return "product";
    case GroupKind::lattice: return "lattice";
    case GroupKind::free: return "free";
  }
  return "unknown";
}

GroupKind parse_group_kind(std::string_view name) {
  for (auto k : {GroupKind::cyclic, GroupKind::dihedral, GroupKind::symmetric, GroupKind::alternating,
                 GroupKind::quaternion8, GroupKind::table, GroupKind::product, GroupKind::lattice, GroupKind::free}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown group kind '" + std::string(name) + "'");
}

std::string GroupSpec::label() const {
  switch (kind) {
    case GroupKind::cyclic:
    case GroupKind::dihedral:
    case GroupKind::symmetric:
    case GroupKind::alternating:
      return std::string(to_string(kind)) + "(" + std::to_string(n) + ")";
    case GroupKind::quaternion8: return "quaternion8";
    case GroupKind::table: return "table(" + std::to_string(table.size()) + ")";
    case GroupKind::product: {
      std::string s = "product(";
      for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? "," : "") + factors[i].label();
      return s + ")";
    }
    case GroupKind::lattice:
    case GroupKind::free:
      return std::string(to_string(kind)) + "(" + std::to_string(rank) + ",r=" + std::to_string(radius) + ")";
  }
  return "unknown";
}

void Group::check_index(Element g) const {
  if (g >= size()) {
    throw std::out_of_range("element index " + std::to_string(g) + " out of range for " + label());
  }
}

// ---------------------------------------------------------------- FiniteGroup

FiniteGroup::FiniteGroup(std::string label, std::size_t order, Rule rule)
    : label_(std::move(label)), order_(order), rule_(std::move(rule)) {
  if (order_ == 0 || order_ > kMaxFiniteOrder) throw ValidationError(label_ + ": order out of range");
  if (order_ <= kTableLimit) {
    table_.resize(order_ * order_);
    for (Element g = 0; g < order_; ++g)
      for (Element h = 0; h < order_; ++h) table_[static_cast<std::size_t>(g) * order_ + h] = rule_(g, h);
  }
  inverse_.assign(order_, static_cast<Element>(order_));
  for (Element g = 0; g < order_; ++g) {
    if (raw_mul(0, g) != g || raw_mul(g, 0) != g) throw ValidationError(label_ + ": element 0 is not an identity");
  }
  if (!table_.empty()) {
    for (Element g = 0; g < order_; ++g)
      for (Element h = 0; h < order_; ++h)
        if (raw_mul(g, h) == 0) inverse_[g] = h;
  } else {
    // Rule-based groups are large; walk the cyclic subgroup of g and invert
    // every power at once (g^k and g^(m-k) are inverse).
    inverse_[0] = 0;
    std::vector<Element> powers;
    for (Element g = 1; g < order_; ++g) {
      if (inverse_[g] != order_) continue;
      powers.assign(1, 0);
      Element cur = g;
      while (cur != 0 && powers.size() <= order_) {
        powers.push_back(cur);
        cur = raw_mul(cur, g);
      }
      if (cur != 0) break;  // reported by the check below
      const std::size_t m = powers.size();
      for (std::size_t k = 1; k < m; ++k) inverse_[powers[k]] = powers[m - k];
    }
  }
  for (Element g = 0; g < order_; ++g) {
    if (inverse_[g] >= order_ || raw_mul(g, inverse_[g]) != 0 || raw_mul(inverse_[g], g) != 0) {
      throw ValidationError(label_ + ": element " + std::to_string(g) + " has no two-sided inverse");
    }
  }
  auto assoc = [&](Element a, Element b, Element c) {
    if (raw_mul(raw_mul(a, b), c) != raw_mul(a, raw_mul(b, c))) {
      throw ValidationError(label_ + ": product is not associative on (" + std::to_string(a) + "," +
                            std::to_string(b) + "," + std::to_string(c) + ")");
    }
  };
  if (order_ <= kFullAssociativityLimit) {
    for (Element a = 0; a < order_; ++a)
      for (Element b = 0; b < order_; ++b)
        for (Element c = 0; c < order_; ++c) assoc(a, b, c);
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(order_ - 1));
    for (std::size_t i = 0; i < kSampledTriples; ++i) assoc(pick(rng), pick(rng), pick(rng));
  }
}

Element FiniteGroup::mul(Element g, Element h) const {
  check_index(g);
  check_index(h);
  return raw_mul(g, h);
}

Element FiniteGroup::inverse(Element g) const {
  check_index(g);
  return inverse_[g];
}

std::string FiniteGroup::format(Element g) const {
  check_index(g);
  return std::to_string(g);
}

Element FiniteGroup::parse(std::string_view text) const {
  const auto v = parse_integer(text);
  if (!v) throw ValidationError("malformed element '" + std::string(text) + "' for " + label_);
  if (*v < 0 || static_cast<std::size_t>(*v) >= order_) {
    throw ValidationError("element " + std::string(text) + " out of range for " + label_);
  }
  return static_cast<Element>(*v);
}

// ------------------------------------------------------------- TruncatedGroup

namespace {

char inverse_letter(char c) {
  return c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : static_cast<char>(c - 'A' + 'a');
}

int letter_generator(char c) { return c >= 'a' && c <= 'z' ? c - 'a' : c - 'A'; }

// Letter order used for shortlex: a < A < b < B < ...
std::vector<char> letter_order(int rank) {
  std::vector<char> out;
  for (int i = 0; i < rank; ++i) {
    out.push_back(static_cast<char>('a' + i));
    out.push_back(static_cast<char>('A' + i));
  }
  return out;
}

std::string reduce_product(const std::string& g, const std::string& h) {
  std::size_t cancel = 0;
  while (cancel < g.size() && cancel < h.size() && g[g.size() - 1 - cancel] == inverse_letter(h[cancel])) ++cancel;
  return g.substr(0, g.size() - cancel) + h.substr(cancel);
}

}  // namespace

std::size_t ball_size(Family family, int rank, int radius) {
  constexpr std::size_t cap = kMaxBallSize + 1;
  if (radius < 0 || rank < 1) return 0;
  if (family == Family::free) {
    std::size_t total = 1;
    std::size_t sphere = 2 * static_cast<std::size_t>(rank);
    for (int k = 1; k <= radius; ++k) {
      total += sphere;
      if (total >= cap) return cap;
      sphere *= 2 * static_cast<std::size_t>(rank) - 1;
      if (sphere >= cap) sphere = cap;
    }
    return total;
  }
  // counts[r] = number of points in Z^d with L1 norm exactly r, built one
  // coordinate at a time.
  std::vector<std::size_t> counts(static_cast<std::size_t>(radius) + 1, 0);
  counts[0] = 1;
  for (int d = 0; d < rank; ++d) {
    std::vector<std::size_t> next(counts.size(), 0);
    for (std::size_t r = 0; r < counts.size(); ++r) {
      if (counts[r] == 0) continue;
      for (std::size_t c = 0; r + c < counts.size(); ++c) {
        const std::size_t ways = c == 0 ? 1 : 2;
        next[r + c] = std::min(cap, next[r + c] + ways * counts[r]);
      }
    }
    counts = std::move(next);
  }
  std::size_t total = 0;
  for (auto c : counts) total = std::min(cap, total + c);
  return total;
}

TruncatedGroup::TruncatedGroup(Family family, int rank, int radius) : family_(family), rank_(rank), radius_(radius) {
  const std::string name = family == Family::free ? "free" : "lattice";
  if (rank < 1) throw ValidationError(name + " group: rank/dim must be >= 1");
  if (family == Family::free && rank > 26) throw ValidationError("free group: rank must be <= 26");
  if (radius < 0) throw ValidationError(name + " group: radius must be >= 0");
  if (ball_size(family, rank, radius) > kMaxBallSize) {
    throw ValidationError(name + " group: ball size exceeds 2^20 elements");
  }
  if (family == Family::free) {
    const auto letters = letter_order(rank);
    words_.push_back("");
    lengths_.push_back(0);
    std::size_t layer_begin = 0;
    for (int k = 1; k <= radius; ++k) {
      const std::size_t layer_end = words_.size();
      for (std::size_t i = layer_begin; i < layer_end; ++i) {
        for (char c : letters) {
          const std::string& w = words_[i];
          if (!w.empty() && w.back() == inverse_letter(c)) continue;
          words_.push_back(w + c);
          lengths_.push_back(k);
        }
      }
      layer_begin = layer_end;
    }
    for (std::size_t i = 0; i < words_.size(); ++i) word_index_.emplace(words_[i], static_cast<Element>(i));
  } else {
    std::vector<std::vector<int>> pts;
    std::vector<int> p(static_cast<std::size_t>(rank), 0);
    // Coordinates in increasing numeric order, bounded by the remaining L1 budget.
    auto enumerate = [&](auto&& self, std::size_t axis, int budget) -> void {
      if (axis == p.size()) {
        pts.push_back(p);
        return;
      }
      for (int x = -budget; x <= budget; ++x) {
        p[axis] = x;
        self(self, axis + 1, budget - std::abs(x));
      }
      p[axis] = 0;
    };
    enumerate(enumerate, 0, radius);
    std::sort(pts.begin(), pts.end());
    const std::vector<int> origin(static_cast<std::size_t>(rank), 0);
    points_.push_back(origin);
    for (auto& q : pts)
      if (q != origin) points_.push_back(std::move(q));
    for (std::size_t i = 0; i < points_.size(); ++i) {
      point_index_.emplace(points_[i], static_cast<Element>(i));
      int norm = 0;
      for (int x : points_[i]) norm += std::abs(x);
      lengths_.push_back(norm);
    }
  }
}

std::optional<Element> TruncatedGroup::lookup_word(const std::string& w) const {
  const auto it = word_index_.find(w);
  if (it == word_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Element> TruncatedGroup::lookup_point(const std::vector<int>& p) const {
  const auto it = point_index_.find(p);
  if (it == point_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Element> TruncatedGroup::multiply(Element g, Element h) const {
  check_index(g);
  check_index(h);
  if (family_ == Family::free) {
    const auto& a = words_[g];
    const auto& b = words_[h];
    std::size_t cancel = 0;
    while (cancel < a.size() && cancel < b.size() && a[a.size() - 1 - cancel] == inverse_letter(b[cancel])) ++cancel;
    if (static_cast<int>(a.size() + b.size() - 2 * cancel) > radius_) return std::nullopt;
    return lookup_word(reduce_product(a, b));
  }
  std::vector<int> sum = points_[g];
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += points_[h][i];
  return lookup_point(sum);
}

Element TruncatedGroup::inverse(Element g) const {
  check_index(g);
  if (family_ == Family::free) {
    std::string w(words_[g].rbegin(), words_[g].rend());
    for (auto& c : w) c = inverse_letter(c);
    return *lookup_word(w);
  }
  std::vector<int> p = points_[g];
  for (auto& x : p) x = -x;
  return *lookup_point(p);
}

std::string TruncatedGroup::format(Element g) const {
  check_index(g);
  if (family_ == Family::free) return words_[g];
  const auto& p = points_[g];
  if (rank_ == 1) return std::to_string(p[0]);
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + "]";
}

Element TruncatedGroup::parse(std::string_view text) const {
  const std::string original(text);
  if (family_ == Family::free) {
    std::string reduced;
    for (char c : text) {
      const bool lower = c >= 'a' && c <= 'z';
      const bool upper = c >= 'A' && c <= 'Z';
      if ((!lower && !upper) || letter_generator(c) >= rank_) {
        throw ValidationError("malformed word '" + original + "': unknown letter '" + std::string(1, c) + "'");
      }
      if (!reduced.empty() && reduced.back() == inverse_letter(c)) {
        reduced.pop_back();
      } else {
        reduced.push_back(c);
      }
    }
    if (const auto e = lookup_word(reduced)) return *e;
    throw ValidationError("word '" + original + "' lies outside the ball of radius " + std::to_string(radius_));
  }
  std::vector<int> p;
  std::string_view body = text;
  while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
  while (!body.empty() && body.back() == ' ') body.remove_suffix(1);
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw ValidationError("malformed lattice point '" + original + "'");
    body = body.substr(1, body.size() - 2);
    while (!body.empty()) {
      const auto comma = body.find(',');
      const auto v = parse_integer(body.substr(0, comma));
      if (!v) throw ValidationError("malformed lattice point '" + original + "'");
      p.push_back(static_cast<int>(*v));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
  } else if (rank_ == 1) {
    const auto v = parse_integer(body);
    if (!v) throw ValidationError("malformed lattice point '" + original + "'");
    p.push_back(static_cast<int>(*v));
  } else {
    throw ValidationError("malformed lattice point '" + original + "': expected [x1,...,xd]");
  }
  if (static_cast<int>(p.size()) != rank_) {
    throw ValidationError("lattice point '" + original + "' has wrong dimension");
  }
  if (const auto e = lookup_point(p)) return *e;
  throw ValidationError("lattice point '" + original + "' lies outside the ball of radius " + std::to_string(radius_));
}

std::string TruncatedGroup::label() const {
  return std::string(family_ == Family::free ? "free" : "lattice") + "(" + std::to_string(rank_) +
         ",r=" + std::to_string(radius_) + ")";
}

int TruncatedGroup::length(Element g) const {
  check_index(g);
  return lengths_[g];
}

std::vector<Element> TruncatedGroup::generators() const {
  std::vector<Element> out;
  for (Element g = 0; g < size(); ++g)
    if (lengths_[g] == 1) out.push_back(g);
  return out;
}

const std::string& TruncatedGroup::word(Element g) const {
  check_index(g);
  if (family_ != Family::free) throw std::logic_error("word() on a lattice truncation");
  return words_[g];
}

const std::vector<int>& TruncatedGroup::point(Element g) const {
  check_index(g);
  if (family_ != Family::lattice) throw std::logic_error("point() on a free-group truncation");
  return points_[g];
}

std::size_t TruncatedGroup::sphere_size(int k) const {
  return static_cast<std::size_t>(std::count(lengths_.begin(), lengths_.end(), k));
}

std::vector<int> TruncatedGroup::generator_exponents(Element g) const {
  check_index(g);
  if (family_ == Family::lattice) return points_[g];
  std::vector<int> out(static_cast<std::size_t>(rank_), 0);
  for (char c : words_[g]) out[static_cast<std::size_t>(letter_generator(c))] += c >= 'a' ? 1 : -1;
  return out;
}

// -------------------------------------------------------------------- builders

FiniteGroupPtr build_finite_group(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupKind::cyclic: {
      check_order(spec, static_cast<std::size_t>(std::max(spec.n, 0)));
      const auto n = static_cast<Element>(spec.n);
      return std::make_shared<FiniteGroup>(spec.label(), n, [n](Element g, Element h) { return (g + h) % n; });
    }
    case GroupKind::dihedral: {
      if (spec.n < 1) throw ValidationError(kind_error(spec, "n must be >= 1"));
      check_order(spec, 2 * static_cast<std::size_t>(spec.n));
      const auto n = static_cast<Element>(spec.n);
      // r^k has index k, r^k s has index n + k; s r = r^{-1} s.
      return std::make_shared<FiniteGroup>(spec.label(), 2 * n, [n](Element g, Element h) {
        const Element a = g % n;
        const Element i = g / n;
        const Element b = h % n;
        const Element j = h / n;
        const Element rot = i == 0 ? (a + b) % n : (a + n - b) % n;
        return ((i + j) % 2) * n + rot;
      });
    }
    case GroupKind::symmetric:
    case GroupKind::alternating: {
      if (spec.n < 1 || spec.n > 8) throw ValidationError(kind_error(spec, "degree must lie in [1, 8]"));
      const auto data = enumerate_permutations(spec.n, spec.kind == GroupKind::alternating);
      return std::make_shared<FiniteGroup>(spec.label(), data->perms.size(), permutation_rule(data));
    }
    case GroupKind::quaternion8:
      return std::make_shared<FiniteGroup>(spec.label(), 8, quaternion_rule());
    case GroupKind::table:
      return build_table_group(spec);
    case GroupKind::product:
      return build_product_group(spec);
    case GroupKind::lattice:
    case GroupKind::free:
      throw ValidationError(std::string(to_string(spec.kind)) + " groups are infinite; only ball truncations exist");
  }
  throw ValidationError("unsupported group kind");
}

GroupPtr build_group(const GroupSpec& spec) {
  if (spec.kind == GroupKind::lattice || spec.kind == GroupKind::free) {
    if (spec.radius < 1) throw ValidationError(std::string(to_string(spec.kind)) + " group: radius must be >= 1");
    return std::make_shared<TruncatedGroup>(spec.kind == GroupKind::free ? Family::free : Family::lattice, spec.rank,
                                            spec.radius);
  }
  return build_finite_group(spec);
}

std::vector<Element> closure(const FiniteGroup& group, const std::vector<Element>& generators) {
  if (generators.empty()) throw ValidationError("closure of an empty set");
  std::vector<bool> in(group.size(), false);
  std::deque<Element> frontier;
  for (auto s : generators) {
    if (s >= group.size()) throw std::out_of_range("closure: element index out of range");
    if (!in[s]) {
      in[s] = true;
      frontier.push_back(s);
    }
  }
  while (!frontier.empty()) {
    const Element x = frontier.front();
    frontier.pop_front();
    for (auto s : generators) {
      const Element y = group.mul(x, s);
      if (!in[y]) {
        in[y] = true;
        frontier.push_back(y);
      }
    }
  }
  std::vector<Element> out;
  for (Element g = 0; g < group.size(); ++g)
    if (in[g]) out.push_back(g);
  return out;
}

const FiniteGroup& require_finite(const Group& group, std::string_view what) {
  if (const auto* f = dynamic_cast<const FiniteGroup*>(&group)) return *f;
  throw ValidationError(std::string(what) + " requires a finite group, got " + group.label());
}

const TruncatedGroup& require_truncated(const Group& group, std::string_view what) {
  if (const auto* t = dynamic_cast<const TruncatedGroup*>(&group)) return *t;
  throw ValidationError(std::string(what) + " requires a ball truncation, got " + group.label());
}

}  // namespace walkharm
