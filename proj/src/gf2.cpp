#include "walkharm/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace walkharm {

Gf2System::Gf2System(std::size_t variables)
    : variables_(variables),
      words_((variables + 63) / 64),
      pivot_rows_(variables),
      pivot_rhs_(variables, false),
      has_pivot_(variables, false) {}

std::optional<std::size_t> Gf2System::highest_bit(const Row& row) const {
  for (std::size_t w = words_; w-- > 0;) {
    if (row[w] != 0) return w * 64 + (63 - static_cast<std::size_t>(std::countl_zero(row[w])));
  }
  return std::nullopt;
}

void Gf2System::add_equation(const std::vector<std::size_t>& vars, bool rhs) {
  Row row(words_, 0);
  for (auto v : vars) {
    if (v >= variables_) throw std::out_of_range("Gf2System: variable index out of range");
    row[v / 64] ^= std::uint64_t{1} << (v % 64);
  }
  while (auto top = highest_bit(row)) {
    if (!has_pivot_[*top]) {
      pivot_rows_[*top] = std::move(row);
      pivot_rhs_[*top] = rhs;
      has_pivot_[*top] = true;
      ++rank_;
      return;
    }
    const Row& p = pivot_rows_[*top];
    for (std::size_t w = 0; w < words_; ++w) row[w] ^= p[w];
    rhs = rhs != pivot_rhs_[*top];
  }
  if (rhs) consistent_ = false;
}

std::optional<std::vector<bool>> Gf2System::lex_smallest_solution() const {
  if (!consistent_) return std::nullopt;
  std::vector<bool> x(variables_, false);
  for (std::size_t v = 0; v < variables_; ++v) {
    if (!has_pivot_[v]) continue;
    bool value = pivot_rhs_[v];
    const Row& row = pivot_rows_[v];
    for (std::size_t u = 0; u < v; ++u) {
      if (test(row, u) && x[u]) value = !value;
    }
    x[v] = value;
  }
  return x;
}

}  // namespace walkharm
