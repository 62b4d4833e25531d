#include "walkharm/linalg.hpp"

#include <Eigen/SVD>

namespace walkharm {

namespace {

template <class S, class EigenMat>
std::vector<std::vector<S>> svd_nullspace(const Matrix<S>& a, double tol) {
  const auto rows = static_cast<Eigen::Index>(a.rows());
  const auto cols = static_cast<Eigen::Index>(a.cols());
  if (cols == 0) return {};
  // Pad to square so the full V is always available.
  const Eigen::Index n = std::max(rows, cols);
  EigenMat m = EigenMat::Zero(n, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = a(r, c);
  Eigen::JacobiSVD<EigenMat> svd(m, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double scale = std::max(1.0, sigma.size() > 0 ? static_cast<double>(sigma(0)) : 0.0);
  std::vector<std::vector<S>> basis;
  for (Eigen::Index k = 0; k < cols; ++k) {
    const double s = k < sigma.size() ? static_cast<double>(sigma(k)) : 0.0;
    if (s > tol * scale) continue;
    std::vector<S> v(static_cast<std::size_t>(cols));
    for (Eigen::Index i = 0; i < cols; ++i) v[static_cast<std::size_t>(i)] = svd.matrixV()(i, k);
    basis.push_back(std::move(v));
  }
  // Echelon pivots on well-scaled orthonormal vectors; a loose pivot
  // threshold keeps round-off from creating spurious basis vectors.
  return canonical_basis(basis, 1e-8);
}

}  // namespace

template <>
std::vector<std::vector<double>> nullspace(const Matrix<double>& a, double tol) {
  return svd_nullspace<double, Eigen::MatrixXd>(a, tol);
}

template <>
std::vector<std::vector<Complex>> nullspace(const Matrix<Complex>& a, double tol) {
  return svd_nullspace<Complex, Eigen::MatrixXcd>(a, tol);
}

}  // namespace walkharm
