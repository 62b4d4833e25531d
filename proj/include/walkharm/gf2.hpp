#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace walkharm {

// Affine linear system over GF(2), built one equation at a time.
//
// Rows are kept in echelon form keyed by their highest set variable, so each
// pivot variable is a function of lower-indexed variables only. Reading the
// solution in increasing variable order with free variables set to zero then
// yields the lexicographically smallest solution (variable 0 most significant).
class Gf2System {
 public:
  explicit Gf2System(std::size_t variables);

  std::size_t variables() const { return variables_; }
  std::size_t rank() const { return rank_; }
  bool consistent() const { return consistent_; }

  // Adds sum_{v in vars} x_v = rhs. Repeated variables cancel.
  void add_equation(const std::vector<std::size_t>& vars, bool rhs);

  std::optional<std::vector<bool>> lex_smallest_solution() const;

 private:
  using Row = std::vector<std::uint64_t>;

  static bool test(const Row& row, std::size_t v) { return (row[v / 64] >> (v % 64)) & 1U; }
  std::optional<std::size_t> highest_bit(const Row& row) const;

  std::size_t variables_;
  std::size_t words_;
  // pivot_rows_[v] holds the row whose highest variable is v, if any.
  std::vector<Row> pivot_rows_;
  std::vector<bool> pivot_rhs_;
  std::vector<bool> has_pivot_;
  std::size_t rank_ = 0;
  bool consistent_ = true;
};

}  // namespace walkharm
