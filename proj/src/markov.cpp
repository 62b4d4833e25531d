#include "walkharm/markov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "walkharm/errors.hpp"

namespace walkharm {

std::string_view to_string(Side side) { return side == Side::right ? "right" : "left"; }

template <class S>
GroupFunction<S>::GroupFunction(GroupPtr g, std::vector<S> v) : group(std::move(g)), values(std::move(v)) {
  if (!group) throw ValidationError("group function without a group");
  if (values.size() != group->size()) {
    throw ValidationError("group function has " + std::to_string(values.size()) + " values, group " +
                          group->label() + " has " + std::to_string(group->size()) + " elements");
  }
}

template <class S>
ConvolutionOperator<S>::ConvolutionOperator(Measure<S> mu, Side side) : mu_(std::move(mu)), side_(side) {
  const auto& g = require_finite(mu_.group(), "convolution operator (use apply_truncated on truncations)");
  const std::size_t n = g.size();
  entries_ = Matrix<S>(n, n);
  for (Element x = 0; x < n; ++x) {
    for (const auto& [h, w] : mu_.entries()) {
      const Element y = side_ == Side::right ? g.mul(x, h) : g.mul(h, x);
      entries_(x, y) += w;
    }
  }
}

template <class S>
GroupFunction<S> apply(const ConvolutionOperator<S>& op, const GroupFunction<S>& f) {
  if (f.group.get() != &op.group()) throw ValidationError("apply: function and operator live on different groups");
  return GroupFunction<S>(f.group, op.entries().apply(f.values));
}

template <class S>
GroupFunction<S> convolve_function(const GroupFunction<S>& f, const Measure<S>& mu, Side side) {
  const auto& g = require_finite(mu.group(), "convolve_function");
  if (f.group.get() != &g) throw ValidationError("convolve_function: function and measure live on different groups");
  std::vector<S> out(g.size(), S(0));
  for (Element x = 0; x < g.size(); ++x) {
    S acc(0);
    for (const auto& [h, w] : mu.entries()) acc += w * f.values[side == Side::right ? g.mul(x, h) : g.mul(h, x)];
    out[x] = acc;
  }
  return GroupFunction<S>(f.group, std::move(out));
}

template <class S>
TruncatedApply<S> apply_truncated(const Measure<S>& mu, const PartialFunction<S>& f, Side side) {
  const Group& group = mu.group();
  if (f.group.get() != &group) throw ValidationError("apply_truncated: function and measure live on different groups");
  if (f.values.size() != group.size() || f.defined.size() != group.size()) {
    throw ValidationError("apply_truncated: function size does not match the group");
  }
  if (const auto* t = dynamic_cast<const TruncatedGroup*>(&group)) {
    for (auto h : mu.support()) {
      if (t->length(h) > 1) throw ValidationError("apply_truncated: measure must be supported on word length <= 1");
    }
  }
  TruncatedApply<S> out;
  out.result.group = f.group;
  out.result.values.assign(group.size(), S(0));
  out.result.defined.assign(group.size(), false);
  for (Element x = 0; x < group.size(); ++x) {
    S acc(0);
    bool ok = true;
    for (const auto& [h, w] : mu.entries()) {
      const auto y = side == Side::right ? group.multiply(x, h) : group.multiply(h, x);
      if (!y || !f.defined[*y]) {
        ok = false;
        break;
      }
      acc += w * f.values[*y];
    }
    if (!ok) continue;
    out.result.values[x] = acc;
    out.result.defined[x] = true;
    out.interior.push_back(x);
  }
  return out;
}

// ------------------------------------------------------------------ spectra

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
  return e;
}

bool is_symmetric_matrix(const Eigen::MatrixXd& m) {
  return m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-14;
}

struct RawPair {
  Complex value;
  double residual;
};

bool spectral_order(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

}  // namespace

SpectralReport matrix_spectrum(const Matrix<double>& m, double tol) {
  if (m.rows() != m.cols()) throw ValidationError("spectrum: matrix is not square");
  if (!(tol > 0)) throw ValidationError("spectrum: tolerance must be positive");
  const Eigen::MatrixXd a = to_eigen(m);
  std::vector<RawPair> raw;
  if (a.rows() == 0) return {};
  if (is_symmetric_matrix(a)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw ComputationError("spectrum: symmetric eigensolver did not converge");
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
      const double lambda = solver.eigenvalues()(k);
      const Eigen::VectorXd v = solver.eigenvectors().col(k);
      raw.push_back({{lambda, 0.0}, (a * v - lambda * v).norm() / v.norm()});
    }
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw ComputationError("spectrum: eigensolver did not converge");
    const Eigen::MatrixXcd ac = a.cast<Complex>();
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
      const Complex lambda = solver.eigenvalues()(k);
      const Eigen::VectorXcd v = solver.eigenvectors().col(k);
      raw.push_back({lambda, (ac * v - lambda * v).norm() / v.norm()});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const RawPair& x, const RawPair& y) { return spectral_order(x.value, y.value); });

  struct Cluster {
    Complex anchor;
    Complex sum;
    int count;
    double residual;
  };
  std::vector<Cluster> clusters;
  for (const auto& p : raw) {
    auto it = std::find_if(clusters.begin(), clusters.end(),
                           [&](const Cluster& c) { return std::abs(c.anchor - p.value) <= kClusterRadius; });
    if (it == clusters.end()) {
      clusters.push_back({p.value, p.value, 1, p.residual});
    } else {
      it->sum += p.value;
      ++it->count;
      it->residual = std::max(it->residual, p.residual);
    }
  }

  SpectralReport report;
  report.tol = tol;
  report.peripheral_threshold = 1.0 - std::max(tol, kPeripheralGap);
  for (const auto& c : clusters) {
    Complex value = c.sum / static_cast<double>(c.count);
    if (std::abs(value.imag()) <= 1e-14) value = {value.real(), 0.0};
    if (c.residual > tol) {
      std::ostringstream msg;
      msg << "spectrum: eigenpair residual " << c.residual << " exceeds tolerance " << tol << " at lambda = " << value;
      throw ComputationError(msg.str());
    }
    report.eigenvalues.push_back({value, c.count, c.residual});
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const EigenvalueRecord& x, const EigenvalueRecord& y) { return spectral_order(x.value, y.value); });
  for (const auto& e : report.eigenvalues) {
    if (std::abs(e.value) >= report.peripheral_threshold) report.peripheral.push_back(e);
  }
  return report;
}

std::vector<std::vector<Complex>> matrix_eigenspace(const Matrix<double>& m, Complex lambda, double tol) {
  if (m.rows() != m.cols()) throw ValidationError("eigenspace: matrix is not square");
  Matrix<Complex> shifted = matrix_cast<Complex>(m);
  for (std::size_t i = 0; i < m.rows(); ++i) shifted(i, i) -= lambda;
  // Eigenvalues arrive from an eigensolver with ~1e-12 error; the nullspace
  // threshold is therefore looser than the residual certificate below.
  auto basis = nullspace(shifted, std::max(tol, 1e-7));
  for (const auto& v : basis) {
    const auto r = shifted.apply(v);
    double rn = 0;
    double vn = 0;
    for (const auto& x : r) rn += std::norm(x);
    for (const auto& x : v) vn += std::norm(x);
    if (std::sqrt(rn) > tol * std::sqrt(vn) * std::max(1.0, std::abs(lambda))) {
      std::ostringstream msg;
      msg << "eigenspace: basis vector residual " << std::sqrt(rn / vn) << " exceeds tolerance " << tol;
      throw ComputationError(msg.str());
    }
  }
  return basis;
}

template <class S>
std::vector<GroupFunction<Complex>> eigenspace(const ConvolutionOperator<S>& op, Complex lambda, double tol) {
  std::vector<GroupFunction<Complex>> out;
  for (auto& v : matrix_eigenspace(matrix_cast<double>(op.entries()), lambda, tol)) {
    out.emplace_back(op.group_ptr(), std::move(v));
  }
  return out;
}

template <class S>
std::vector<GroupFunction<S>> signed_eigenspace(const ConvolutionOperator<S>& op, int sign, double tol) {
  if (sign != 1 && sign != -1) throw ValidationError("signed_eigenspace: sign must be +1 or -1");
  Matrix<S> shifted = op.entries();
  for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) -= S(sign);
  std::vector<GroupFunction<S>> out;
  for (auto& v : nullspace(shifted, tol)) {
    if constexpr (!ScalarTraits<S>::exact) {
      const auto r = shifted.apply(v);
      if (max_abs<S>(r) > tol * std::max(1.0, max_abs<S>(v))) {
        throw ComputationError("signed_eigenspace: basis vector residual exceeds tolerance");
      }
    }
    out.emplace_back(op.group_ptr(), std::move(v));
  }
  return out;
}

// ----------------------------------------------------------- operator level

OperatorOnMatrices::OperatorOnMatrices(RealMeasure mu, Side side)
    : group_(&require_finite(mu.group(), "operator-level Markov map")), mu_(std::move(mu)), side_(side) {
  if (group_->size() > kMaxSuperoperatorOrder) {
    throw ValidationError("operator-level Markov map: group order " + std::to_string(group_->size()) +
                          " exceeds " + std::to_string(kMaxSuperoperatorOrder));
  }
}

Matrix<double> OperatorOnMatrices::materialize() const {
  const std::size_t n = order();
  Matrix<double> out(n * n, n * n);
  for (const auto& [g, w] : mu_.entries()) {
    for (Element x = 0; x < n; ++x) {
      const Element xs = side_ == Side::right ? group_->mul(x, g) : group_->mul(g, x);
      for (Element y = 0; y < n; ++y) {
        const Element ys = side_ == Side::right ? group_->mul(y, g) : group_->mul(g, y);
        out(x * n + y, xs * n + ys) += w;
      }
    }
  }
  return out;
}

Matrix<double> left_regular(const FiniteGroup& group, Element g) {
  Matrix<double> m(group.size(), group.size());
  for (Element y = 0; y < group.size(); ++y) m(group.mul(g, y), y) = 1.0;
  return m;
}

Matrix<double> right_regular(const FiniteGroup& group, Element g) {
  Matrix<double> m(group.size(), group.size());
  for (Element x = 0; x < group.size(); ++x) m(x, group.mul(x, g)) = 1.0;
  return m;
}

EigenOperatorWitness eigen_operator_to_function(const OperatorOnMatrices& op, const Matrix<Complex>& t,
                                                Complex lambda, double tol) {
  if (op.side() != Side::right) {
    throw ValidationError("eigen_operator_to_function: Fourier expansion applies to the right-side operator");
  }
  const auto& group = op.group();
  const double tnorm = max_abs<Complex>(t.data());
  if (tnorm == 0.0) throw ValidationError("eigen_operator_to_function: zero operator");
  const auto image = op.apply(t);
  double defect = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) defect = std::max(defect, std::abs(image(i, j) - lambda * t(i, j)));
  if (defect > tol * tnorm) {
    std::ostringstream msg;
    msg << "eigen_operator_to_function: eigen-relation violated (defect " << defect / tnorm << ")";
    throw ValidationError(msg.str());
  }
  EigenOperatorWitness best;
  double best_norm = 0.0;
  for (Element g = 0; g < group.size(); ++g) {
    auto f = fourier_coefficient(group, t, g);
    const double nrm = max_abs<Complex>(f);
    if (nrm > best_norm) {
      best_norm = nrm;
      best.g = g;
      best.coefficient = GroupFunction<Complex>(op.measure().group_ptr(), std::move(f));
    }
  }
  if (best_norm == 0.0) throw ValidationError("eigen_operator_to_function: zero operator");
  std::vector<Complex> image_f(group.size(), Complex(0.0));
  for (Element x = 0; x < group.size(); ++x)
    for (const auto& [h, w] : op.measure().entries()) image_f[x] += w * best.coefficient[group.mul(x, h)];
  double res = 0.0;
  for (Element x = 0; x < group.size(); ++x) res = std::max(res, std::abs(image_f[x] - lambda * best.coefficient[x]));
  best.residual = res / best_norm;
  if (best.residual > tol) {
    throw ComputationError("eigen_operator_to_function: Fourier coefficient fails the eigen-relation");
  }
  return best;
}

#define WALKHARM_INSTANTIATE_MARKOV(S)                                                                       \
  template struct GroupFunction<S>;                                                                          \
  template class ConvolutionOperator<S>;                                                                     \
  template GroupFunction<S> apply<S>(const ConvolutionOperator<S>&, const GroupFunction<S>&);                \
  template GroupFunction<S> convolve_function<S>(const GroupFunction<S>&, const Measure<S>&, Side);          \
  template TruncatedApply<S> apply_truncated<S>(const Measure<S>&, const PartialFunction<S>&, Side);         \
  template std::vector<GroupFunction<Complex>> eigenspace<S>(const ConvolutionOperator<S>&, Complex, double); \
  template std::vector<GroupFunction<S>> signed_eigenspace<S>(const ConvolutionOperator<S>&, int, double);

WALKHARM_INSTANTIATE_MARKOV(Rational)
WALKHARM_INSTANTIATE_MARKOV(double)
template struct GroupFunction<Complex>;

}  // namespace walkharm
