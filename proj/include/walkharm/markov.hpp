#pragma once

#include <string_view>
#include <vector>

#include "walkharm/linalg.hpp"
#include "walkharm/measure.hpp"

namespace walkharm {

// right: f -> f * mu, (f * mu)(g) = sum_h mu(h) f(gh).
// left:  f -> mu * f, (mu * f)(g) = sum_h mu(h) f(hg).
enum class Side { right, left };

std::string_view to_string(Side side);

template <class S>
struct GroupFunction {
  GroupPtr group;
  std::vector<S> values;

  GroupFunction() = default;
  GroupFunction(GroupPtr g, std::vector<S> v);

  std::size_t size() const { return values.size(); }
  S& operator[](Element g) { return values[g]; }
  const S& operator[](Element g) const { return values[g]; }

  friend bool operator==(const GroupFunction& a, const GroupFunction& b) {
    return a.group == b.group && a.values == b.values;
  }
};

template <class S>
GroupFunction<S> constant_function(GroupPtr group, const S& c) {
  const auto n = group->size();
  return GroupFunction<S>(std::move(group), std::vector<S>(n, c));
}

template <class S>
double sup_norm(const GroupFunction<S>& f) {
  return max_abs<S>(f.values);
}

// Stochastic array of a convolution operator on a finite group:
// right entries[g][x] = mu(g^-1 x), left entries[g][x] = mu(x g^-1).
template <class S>
class ConvolutionOperator {
 public:
  ConvolutionOperator(Measure<S> mu, Side side);

  const Group& group() const { return mu_.group(); }
  const GroupPtr& group_ptr() const { return mu_.group_ptr(); }
  const Measure<S>& measure() const { return mu_; }
  Side side() const { return side_; }
  const Matrix<S>& entries() const { return entries_; }

 private:
  Measure<S> mu_;
  Side side_;
  Matrix<S> entries_;
};

template <class S>
ConvolutionOperator<S> right_operator(const Measure<S>& mu) {
  return ConvolutionOperator<S>(mu, Side::right);
}

template <class S>
ConvolutionOperator<S> left_operator(const Measure<S>& mu) {
  return ConvolutionOperator<S>(mu, Side::left);
}

// Array-vector product.
template <class S>
GroupFunction<S> apply(const ConvolutionOperator<S>& op, const GroupFunction<S>& f);

// Convolution by direct summation over the support (finite groups).
template <class S>
GroupFunction<S> convolve_function(const GroupFunction<S>& f, const Measure<S>& mu, Side side);

// mu * f * mu.
template <class S>
GroupFunction<S> biconvolve(const GroupFunction<S>& f, const Measure<S>& mu) {
  return convolve_function(convolve_function(f, mu, Side::right), mu, Side::left);
}

// Function known on a subset of a (possibly truncated) group.
template <class S>
struct PartialFunction {
  GroupPtr group;
  std::vector<S> values;
  std::vector<bool> defined;

  static PartialFunction total(const GroupFunction<S>& f) {
    return {f.group, f.values, std::vector<bool>(f.values.size(), true)};
  }
};

template <class S>
struct TruncatedApply {
  PartialFunction<S> result;
  // Points g where every neighbour g*h (right) or h*g (left), h in supp(mu),
  // exists and carries a defined input value. Sorted.
  std::vector<Element> interior;
};

// Convolution evaluated exactly on the interior of a truncation (or on every
// point of a finite group). mu must be supported on word length <= 1 when the
// group is a truncation.
template <class S>
TruncatedApply<S> apply_truncated(const Measure<S>& mu, const PartialFunction<S>& f, Side side);

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kPeripheralGap = 1e-8;
inline constexpr double kClusterRadius = 1e-7;

struct EigenvalueRecord {
  Complex value;
  int multiplicity = 1;
  // max ||Pv - lambda v||_2 / ||v||_2 over the eigenvectors in the cluster.
  double residual = 0.0;
};

struct SpectralReport {
  std::vector<EigenvalueRecord> eigenvalues;
  std::vector<EigenvalueRecord> peripheral;
  double tol = kDefaultTolerance;
  double peripheral_threshold = 1.0 - kPeripheralGap;
};

// Full spectrum with residual certificates. Eigenvalues within kClusterRadius
// are merged; ordering is by descending real part, then imaginary part.
// Throws ComputationError if the eigensolver fails or a residual exceeds tol.
SpectralReport matrix_spectrum(const Matrix<double>& m, double tol = kDefaultTolerance);

template <class S>
SpectralReport spectrum(const ConvolutionOperator<S>& op, double tol = kDefaultTolerance) {
  return matrix_spectrum(matrix_cast<double>(op.entries()), tol);
}

// Canonical basis of ker(m - lambda I) on the floating path.
std::vector<std::vector<Complex>> matrix_eigenspace(const Matrix<double>& m, Complex lambda, double tol);

template <class S>
std::vector<GroupFunction<Complex>> eigenspace(const ConvolutionOperator<S>& op, Complex lambda,
                                               double tol = kDefaultTolerance);

// Basis of ker(P - sign I), sign in {+1, -1}: exact rational nullspace on
// the Rational path, SVD nullspace on the double path. Basis vectors are in
// reduced echelon form (first nonzero entry 1, identity entry first).
template <class S>
std::vector<GroupFunction<S>> signed_eigenspace(const ConvolutionOperator<S>& op, int sign,
                                                double tol = kDefaultTolerance);

// ----------------------------------------------------------- operator level

inline constexpr std::size_t kMaxSuperoperatorOrder = 12;

// Markov operator on n x n arrays:
//   right: T -> sum_g mu(g) rho_g T rho_g^*,  (rho_g T rho_g^*)[x][y] = T[xg][yg]
//   left:  T -> sum_g mu(g) lambda_g^* T lambda_g, entry T[gx][gy].
// Restricted to diagonal arrays M_f these reproduce f * mu and mu * f.
class OperatorOnMatrices {
 public:
  OperatorOnMatrices(RealMeasure mu, Side side);

  const FiniteGroup& group() const { return *group_; }
  const RealMeasure& measure() const { return mu_; }
  Side side() const { return side_; }
  std::size_t order() const { return group_->size(); }

  template <class T>
  Matrix<T> apply(const Matrix<T>& t) const;

  // n^2 x n^2 array acting on row-major vec(T) (index x * n + y).
  Matrix<double> materialize() const;

 private:
  const FiniteGroup* group_;
  RealMeasure mu_;
  Side side_;
};

template <class S>
OperatorOnMatrices superoperator(const Measure<S>& mu, Side side) {
  return OperatorOnMatrices(mu.to_real(), side);
}

template <class T>
Matrix<T> super_apply(const OperatorOnMatrices& op, const Matrix<T>& t) {
  return op.apply(t);
}

// lambda_g[x][y] = 1 iff x = g y;  rho_g[x][y] = 1 iff y = x g.
Matrix<double> left_regular(const FiniteGroup& group, Element g);
Matrix<double> right_regular(const FiniteGroup& group, Element g);

// Diagonal of T as a function.
template <class T>
std::vector<T> conditional_expectation(const Matrix<T>& t);

// E(T lambda_g^*), i.e. x -> T[x][g^-1 x].
template <class T>
std::vector<T> fourier_coefficient(const FiniteGroup& group, const Matrix<T>& t, Element g);

struct EigenOperatorWitness {
  Element g = 0;
  GroupFunction<Complex> coefficient;
  // ||f * mu - lambda f||_inf / ||f||_inf.
  double residual = 0.0;
};

// From a right-side eigen-operator S(T) = lambda T, picks the element g whose
// Fourier coefficient has the largest sup norm (first in element order on
// ties) and returns that coefficient, an eigenfunction of f -> f * mu.
// Throws ValidationError for T = 0 or a violated eigen-relation.
EigenOperatorWitness eigen_operator_to_function(const OperatorOnMatrices& op, const Matrix<Complex>& t,
                                                Complex lambda, double tol = kDefaultTolerance);

// ------------------------------------------------------------ template bodies

template <class T>
Matrix<T> OperatorOnMatrices::apply(const Matrix<T>& t) const {
  const std::size_t n = order();
  if (t.rows() != n || t.cols() != n) throw std::invalid_argument("super_apply: array dimension mismatch");
  Matrix<T> out(n, n);
  for (const auto& [g, w] : mu_.entries()) {
    const T weight(w);
    for (Element x = 0; x < n; ++x) {
      const Element xs = side_ == Side::right ? group_->mul(x, g) : group_->mul(g, x);
      for (Element y = 0; y < n; ++y) {
        const Element ys = side_ == Side::right ? group_->mul(y, g) : group_->mul(g, y);
        out(x, y) += weight * t(xs, ys);
      }
    }
  }
  return out;
}

template <class T>
std::vector<T> conditional_expectation(const Matrix<T>& t) {
  if (t.rows() != t.cols()) throw std::invalid_argument("conditional_expectation: array is not square");
  std::vector<T> d(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) d[i] = t(i, i);
  return d;
}

template <class T>
std::vector<T> fourier_coefficient(const FiniteGroup& group, const Matrix<T>& t, Element g) {
  if (t.rows() != group.size() || t.cols() != group.size()) {
    throw std::invalid_argument("fourier_coefficient: array dimension mismatch");
  }
  const Element ginv = group.inverse(g);
  std::vector<T> f(group.size());
  for (Element x = 0; x < group.size(); ++x) f[x] = t(x, group.mul(ginv, x));
  return f;
}

}  // namespace walkharm
