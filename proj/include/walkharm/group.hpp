#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace walkharm {

// Dense element index; the identity is always 0.
using Element = std::uint32_t;

inline constexpr std::size_t kMaxFiniteOrder = std::size_t{1} << 16;
inline constexpr std::size_t kMaxBallSize = std::size_t{1} << 20;

enum class GroupKind { cyclic, dihedral, symmetric, alternating, quaternion8, table, product, lattice, free };

std::string_view to_string(GroupKind kind);
GroupKind parse_group_kind(std::string_view name);

// Construction recipe for a group.
//  cyclic(n): Z_n.  dihedral(n): symmetries of the n-gon, order 2n.
//  symmetric(n) / alternating(n): S_n / A_n on n points.
//  quaternion8: Q_8.  table: explicit Cayley table with identity 0.
//  product: direct product of `factors`.
//  lattice(dim=rank) / free(rank): balls of word length <= radius.
struct GroupSpec {
  GroupKind kind = GroupKind::cyclic;
  int n = 1;
  int rank = 1;
  int radius = 0;
  std::vector<std::vector<Element>> table;
  std::vector<GroupSpec> factors;

  static GroupSpec cyclic(int n) { return with(GroupKind::cyclic, n); }
  static GroupSpec dihedral(int n) { return with(GroupKind::dihedral, n); }
  static GroupSpec symmetric(int n) { return with(GroupKind::symmetric, n); }
  static GroupSpec alternating(int n) { return with(GroupKind::alternating, n); }
  static GroupSpec quaternion8() { return with(GroupKind::quaternion8, 8); }
  static GroupSpec from_table(std::vector<std::vector<Element>> t) {
    GroupSpec s = with(GroupKind::table, 0);
    s.table = std::move(t);
    return s;
  }
  static GroupSpec product(std::vector<GroupSpec> f) {
    GroupSpec s = with(GroupKind::product, 0);
    s.factors = std::move(f);
    return s;
  }
  static GroupSpec lattice(int dim, int radius) { return with(GroupKind::lattice, 0, dim, radius); }
  static GroupSpec free(int rank, int radius) { return with(GroupKind::free, 0, rank, radius); }

  static GroupSpec with(GroupKind kind, int n, int rank = 1, int radius = 0) {
    GroupSpec s;
    s.kind = kind;
    s.n = n;
    s.rank = rank;
    s.radius = radius;
    return s;
  }

  // Short human-readable label, e.g. "cyclic(4)" or "free(2,r=6)".
  std::string label() const;
};

// Common interface of finite groups and ball truncations. Products that leave
// a truncation are undefined (nullopt); finite groups always return a value.
// Index arguments outside [0, size()) throw std::out_of_range.
class Group {
 public:
  virtual ~Group() = default;

  virtual std::size_t size() const = 0;
  virtual bool is_finite() const = 0;
  virtual std::optional<Element> multiply(Element g, Element h) const = 0;
  virtual Element inverse(Element g) const = 0;
  virtual std::string format(Element g) const = 0;
  virtual Element parse(std::string_view text) const = 0;
  virtual std::string label() const = 0;

  Element identity() const { return 0; }

 protected:
  void check_index(Element g) const;
};

using GroupPtr = std::shared_ptr<const Group>;

class FiniteGroup final : public Group {
 public:
  using Rule = std::function<Element(Element, Element)>;

  // Builds from a product rule; validates identity/inverse laws on every
  // element and associativity on all triples (order <= 64) or a seeded
  // sample of triples. Throws ValidationError on failure.
  FiniteGroup(std::string label, std::size_t order, Rule rule);

  std::size_t size() const override { return order_; }
  bool is_finite() const override { return true; }
  std::optional<Element> multiply(Element g, Element h) const override { return mul(g, h); }
  Element inverse(Element g) const override;
  std::string format(Element g) const override;
  Element parse(std::string_view text) const override;
  std::string label() const override { return label_; }

  Element mul(Element g, Element h) const;

 private:
  Element raw_mul(Element g, Element h) const {
    return table_.empty() ? rule_(g, h) : table_[static_cast<std::size_t>(g) * order_ + h];
  }

  std::string label_;
  std::size_t order_;
  Rule rule_;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
};

using FiniteGroupPtr = std::shared_ptr<const FiniteGroup>;

enum class Family { lattice, free };

// Ball of radius R in Z^d (generators +-e_i, L1 word length) or in the free
// group F_k (reduced words over a..; capitals are inverses).
class TruncatedGroup final : public Group {
 public:
  TruncatedGroup(Family family, int rank, int radius);

  std::size_t size() const override { return lengths_.size(); }
  bool is_finite() const override { return false; }
  std::optional<Element> multiply(Element g, Element h) const override;
  Element inverse(Element g) const override;
  std::string format(Element g) const override;
  Element parse(std::string_view text) const override;
  std::string label() const override;

  Family family() const { return family_; }
  int rank() const { return rank_; }
  int radius() const { return radius_; }
  int length(Element g) const;
  // Elements of length 1 in canonical order.
  std::vector<Element> generators() const;
  // Free family: reduced word. Lattice family: coordinates.
  const std::string& word(Element g) const;
  const std::vector<int>& point(Element g) const;
  // Number of elements of exact length k.
  std::size_t sphere_size(int k) const;
  // Exponent sums per generator (letter counts with sign for lattice, letter
  // parity contributions for free words): entry i is the signed count of
  // generator i in g.
  std::vector<int> generator_exponents(Element g) const;

 private:
  std::optional<Element> lookup_word(const std::string& w) const;
  std::optional<Element> lookup_point(const std::vector<int>& p) const;

  Family family_;
  int rank_;
  int radius_;
  std::vector<int> lengths_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, Element> word_index_;
  std::vector<std::vector<int>> points_;
  std::map<std::vector<int>, Element> point_index_;
};

using TruncatedGroupPtr = std::shared_ptr<const TruncatedGroup>;

// Builds the group described by spec. Throws ValidationError with a
// descriptive message on invalid tables or out-of-bounds parameters.
GroupPtr build_group(const GroupSpec& spec);
FiniteGroupPtr build_finite_group(const GroupSpec& spec);

// Number of elements in the ball; saturates at kMaxBallSize + 1.
std::size_t ball_size(Family family, int rank, int radius);

// Smallest product-closed subset containing generators (semigroup closure),
// sorted. Throws ValidationError when generators is empty.
std::vector<Element> closure(const FiniteGroup& group, const std::vector<Element>& generators);

// Checked downcasts; throw ValidationError naming `what` on mismatch.
const FiniteGroup& require_finite(const Group& group, std::string_view what);
const TruncatedGroup& require_truncated(const Group& group, std::string_view what);

}  // namespace walkharm
