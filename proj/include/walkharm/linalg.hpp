#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "walkharm/scalar.hpp"

namespace walkharm {

// Dense row-major matrix over Rational, double or Complex.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const S& fill = S(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<S> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const S> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<S>& data() const { return data_; }

  std::vector<S> apply(std::span<const S> v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
    std::vector<S> out(rows_, S(0));
    for (std::size_t r = 0; r < rows_; ++r) {
      S acc(0);
      for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
      out[r] = acc;
    }
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (aik == S(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    a.check_same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    a.check_same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend Matrix operator*(const S& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <class To, class From>
Matrix<To> matrix_cast(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = scalar_cast<To>(m(r, c));
  return out;
}

// Largest absolute entry.
template <class S>
double max_abs(std::span<const S> v) {
  double best = 0.0;
  for (const auto& x : v) best = std::max(best, ScalarTraits<S>::magnitude(x));
  return best;
}

// In-place reduction to reduced row echelon form; returns the pivot columns.
// Exact scalars pivot on the first nonzero entry, floating ones on the largest
// magnitude and treat |x| <= tol as zero.
template <class S>
std::vector<std::size_t> row_reduce(Matrix<S>& m, double tol) {
  using Tr = ScalarTraits<S>;
  std::vector<std::size_t> pivots;
  std::size_t lead_row = 0;
  for (std::size_t col = 0; col < m.cols() && lead_row < m.rows(); ++col) {
    std::size_t best = m.rows();
    double best_mag = 0.0;
    for (std::size_t r = lead_row; r < m.rows(); ++r) {
      if (Tr::is_zero(m(r, col), tol)) continue;
      if constexpr (Tr::exact) {
        best = r;
        break;
      } else {
        const double mag = Tr::magnitude(m(r, col));
        if (mag > best_mag) {
          best_mag = mag;
          best = r;
        }
      }
    }
    if (best == m.rows()) {
      if constexpr (!Tr::exact) {
        for (std::size_t r = lead_row; r < m.rows(); ++r) m(r, col) = S(0);
      }
      continue;
    }
    if (best != lead_row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(best, c), m(lead_row, c));
    }
    const S inv = S(1) / m(lead_row, col);
    for (std::size_t c = col; c < m.cols(); ++c) m(lead_row, c) *= inv;
    m(lead_row, col) = S(1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row) continue;
      const S factor = m(r, col);
      if (factor == S(0)) continue;
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= factor * m(lead_row, c);
      m(r, col) = S(0);
    }
    pivots.push_back(col);
    ++lead_row;
  }
  return pivots;
}

// Canonical basis of span(vectors): the nonzero rows of the reduced row
// echelon form. Every returned vector has first nonzero entry 1, and that
// position is zero in every other basis vector.
template <class S>
std::vector<std::vector<S>> canonical_basis(const std::vector<std::vector<S>>& vectors, double tol) {
  if (vectors.empty()) return {};
  const std::size_t n = vectors.front().size();
  Matrix<S> m(vectors.size(), n);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != n) throw std::invalid_argument("basis vectors of unequal length");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = vectors[i][j];
  }
  const auto pivots = row_reduce(m, tol);
  std::vector<std::vector<S>> out;
  out.reserve(pivots.size());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    auto r = m.row(i);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

namespace detail {

template <class S>
std::vector<std::vector<S>> rref_nullspace(Matrix<S> a, double tol) {
  const auto pivots = row_reduce(a, tol);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<S>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<S> v(a.cols(), S(0));
    v[free] = S(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace detail

// Canonical basis (see canonical_basis) of {x : a x = 0}. Exact for Rational;
// the floating specializations use an SVD and count singular values
// <= tol * max(1, sigma_max) as zero.
template <class S>
std::vector<std::vector<S>> nullspace(const Matrix<S>& a, double tol) {
  return canonical_basis(detail::rref_nullspace(a, tol), tol);
}

template <>
std::vector<std::vector<double>> nullspace(const Matrix<double>& a, double tol);
template <>
std::vector<std::vector<Complex>> nullspace(const Matrix<Complex>& a, double tol);

// Coefficients c with sum_i c_i basis[i] = v, or nullopt when v is outside
// the span (residual above tol on the floating path).
template <class S>
std::optional<std::vector<S>> coordinates(const std::vector<std::vector<S>>& basis, const std::vector<S>& v,
                                          double tol) {
  const std::size_t d = basis.size();
  const std::size_t n = v.size();
  Matrix<S> aug(n, d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) aug(i, j) = basis[j][i];
    aug(i, d) = v[i];
  }
  const auto pivots = row_reduce(aug, tol);
  if (!pivots.empty() && pivots.back() == d) return std::nullopt;
  if (pivots.size() != d) throw std::invalid_argument("coordinates: basis vectors are linearly dependent");
  std::vector<S> c(d, S(0));
  for (std::size_t i = 0; i < d; ++i) c[i] = aug(i, d);
  if constexpr (!ScalarTraits<S>::exact) {
    for (std::size_t i = 0; i < n; ++i) {
      S acc(0);
      for (std::size_t j = 0; j < d; ++j) acc += c[j] * basis[j][i];
      if (ScalarTraits<S>::magnitude(acc - v[i]) > tol * std::max(1.0, max_abs<S>(v))) return std::nullopt;
    }
  }
  return c;
}

// Orthogonal projection of v onto span(basis) for the standard real inner
// product (basis need not be orthogonal).
template <class S>
std::vector<S> orthogonal_projection(const std::vector<std::vector<S>>& basis, const std::vector<S>& v, double tol) {
  const std::size_t d = basis.size();
  std::vector<S> out(v.size(), S(0));
  if (d == 0) return out;
  Matrix<S> gram(d, d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      S acc(0);
      for (std::size_t k = 0; k < v.size(); ++k) acc += basis[i][k] * basis[j][k];
      gram(i, j) = acc;
    }
    S acc(0);
    for (std::size_t k = 0; k < v.size(); ++k) acc += basis[i][k] * v[k];
    gram(i, d) = acc;
  }
  const auto pivots = row_reduce(gram, tol);
  if (pivots.size() != d) throw std::invalid_argument("orthogonal_projection: degenerate basis");
  for (std::size_t i = 0; i < d; ++i) {
    const S coef = gram(i, d);
    for (std::size_t k = 0; k < v.size(); ++k) out[k] += coef * basis[i][k];
  }
  return out;
}

}  // namespace walkharm
