#include "walkharm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "walkharm/errors.hpp"

namespace walkharm {

namespace {

std::string format_number(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

Matrix<double> from_eigen(const Eigen::MatrixXd& e) {
  Matrix<double> m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

std::string short_label(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupKind::cyclic: return "Z" + std::to_string(spec.n);
    case GroupKind::dihedral: return "D" + std::to_string(spec.n);
    case GroupKind::symmetric: return "S" + std::to_string(spec.n);
    case GroupKind::alternating: return "A" + std::to_string(spec.n);
    case GroupKind::quaternion8: return "Q8";
    default: return spec.label();
  }
}

bool index_two_free(const GroupSpec& spec) {
  return (spec.kind == GroupKind::cyclic && spec.n % 2 == 1) ||
         (spec.kind == GroupKind::alternating && spec.n >= 4);
}

// Greedy generating set in element order, closed under inverses.
std::vector<Element> canonical_generators(const FiniteGroup& g) {
  if (g.size() == 1) return {0};
  std::vector<Element> gens;
  std::vector<Element> reached{0};
  for (Element x = 1; x < g.size() && reached.size() < g.size(); ++x) {
    if (std::binary_search(reached.begin(), reached.end(), x)) continue;
    gens.push_back(x);
    std::vector<Element> sym = gens;
    for (auto y : gens) sym.push_back(g.inverse(y));
    reached = closure(g, sym);
  }
  std::set<Element> out;
  for (auto y : gens) {
    out.insert(y);
    out.insert(g.inverse(y));
  }
  return {out.begin(), out.end()};
}

// Integer weights -> reduced rationals; nullopt when the total exceeds 64.
std::optional<RationalMeasure> integer_weighted(const GroupPtr& group, const std::map<Element, int>& weights) {
  int total = 0;
  for (const auto& [x, w] : weights) total += w;
  if (total > 64) return std::nullopt;
  std::vector<std::pair<Element, Rational>> entries;
  for (const auto& [x, w] : weights) {
    Rational r(w, total);
    r.canonicalize();
    entries.emplace_back(x, r);
  }
  return make_measure<Rational>(group, entries);
}

template <class S>
GroupFunction<S> negated(GroupFunction<S> f) {
  for (auto& x : f.values) x = -x;
  return f;
}

template <class S>
bool is_constant(const GroupFunction<S>& f) {
  return std::all_of(f.values.begin(), f.values.end(), [&](const S& x) { return x == f.values.front(); });
}

// Deterministic per-fixture stream, independent of the standard library's hash.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

template <class F>
void guarded(VerificationReport& report, const std::string& fixture, const std::string& quantity, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report.check(fixture, quantity, false, std::string("exception: ") + e.what());
  }
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

Eigen::MatrixXd random_stochastic(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (int j = 0; j < n; ++j) s += m(i, j) = u(rng);
    m.row(i) /= s;
  }
  return m;
}

Eigen::MatrixXd random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, p[i]) = 1.0;
  return m;
}

Eigen::MatrixXd block_diagonal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

// Spectral-norm contraction of one of three shapes, chosen by `kind`.
Eigen::MatrixXd random_contraction(std::mt19937_64& rng, int n, int kind) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (kind % 3) {
    case 0: {  // doubly stochastic: convex combination of permutations
      const double a = u(rng);
      const double b = (1 - a) * u(rng);
      return a * random_permutation(rng, n) + b * random_permutation(rng, n) +
             (1 - a - b) * random_permutation(rng, n);
    }
    case 1: {  // general matrix rescaled into the unit ball
      std::normal_distribution<double> g(0.0, 1.0);
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(rng);
      return m * ((0.5 + 0.5 * u(rng)) / spectral_norm(m));
    }
    default: {  // symmetric with spectrum in [-1, 1]
      std::normal_distribution<double> g(0.0, 1.0);
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(rng);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
      const Eigen::MatrixXd q = qr.householderQ();
      Eigen::VectorXd d(n);
      for (int i = 0; i < n; ++i) d(i) = 2 * u(rng) - 1;
      d(0) = 1.0;
      return q * d.asDiagonal() * q.transpose();
    }
  }
}

}  // namespace

// ------------------------------------------------------------------- report

bool VerificationReport::pass() const {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return !r.pass; }));
}

void VerificationReport::check_le(std::string fixture, std::string quantity, double value, double threshold,
                                  std::string note) {
  records.push_back({std::move(fixture), std::move(quantity), value, threshold, value <= threshold, std::move(note)});
}

void VerificationReport::check(std::string fixture, std::string quantity, bool ok, std::string note) {
  records.push_back({std::move(fixture), std::move(quantity), ok ? 0.0 : 1.0, 0.0, ok, std::move(note)});
}

void VerificationReport::append(const VerificationReport& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
}

std::string VerificationReport::summary() const {
  std::ostringstream out;
  for (const auto& r : records) {
    out << (r.pass ? "PASS " : "FAIL ") << r.fixture << ' ' << r.quantity << " value=" << format_number(r.value)
        << " threshold=" << format_number(r.threshold);
    if (!r.note.empty()) out << ' ' << r.note;
    out << '\n';
  }
  return out.str();
}

// ------------------------------------------------------------------- Foguel

template <class S>
FoguelResult foguel_decay(const Measure<S>& mu, double eps, int n_max) {
  const auto& g = require_finite(mu.group(), "foguel_decay");
  if (n_max < 1) throw ValidationError("foguel_decay: N_max must be >= 1");
  const auto real = mu.to_real();
  FoguelResult r;
  r.observation_mode = !mu.contains(g.identity());
  std::vector<double> cur(g.size(), 0.0);
  for (const auto& [x, w] : real.entries()) cur[x] = w;
  std::vector<double> next(g.size());
  for (int n = 1; n <= n_max; ++n) {
    std::fill(next.begin(), next.end(), 0.0);
    for (Element h = 0; h < g.size(); ++h) {
      if (cur[h] == 0.0) continue;
      for (const auto& [s, w] : real.entries()) next[g.mul(h, s)] += cur[h] * w;
    }
    double d = 0.0;
    for (Element h = 0; h < g.size(); ++h) d += std::abs(cur[h] - next[h]);
    d = std::min(1.0, 0.5 * d);
    r.distances.push_back(d);
    if (!r.first_below && d <= eps) r.first_below = n;
    std::swap(cur, next);
  }
  return r;
}

// ------------------------------------------------------------ roots of unity

template <class S>
VerificationReport root_of_unity_check(const Measure<S>& mu, double tol, int cap, const std::string& fixture) {
  const auto& g = require_finite(mu.group(), "root_of_unity_check");
  if (!is_generating(mu)) throw ValidationError("root_of_unity_check: support does not generate " + g.label());
  VerificationReport report;
  report.suite = "roots";
  const auto k = min_return(mu, cap);
  if (!k) throw ComputationError("root_of_unity_check: no return to the identity within " + std::to_string(cap));
  const auto spec = spectrum(right_operator(mu.to_real()), std::max(tol, kDefaultTolerance));
  double worst = 0.0;
  for (const auto& e : spec.peripheral) worst = std::max(worst, std::abs(std::pow(e.value, *k) - Complex(1, 0)));
  report.check_le(fixture, "root_of_unity", worst, tol,
                  "k=" + std::to_string(*k) + " peripheral=" + std::to_string(spec.peripheral.size()));
  return report;
}

// ------------------------------------------------------- commuting contractions

double linf_operator_norm(const Eigen::MatrixXd& t) { return t.cwiseAbs().rowwise().sum().maxCoeff(); }

double spectral_norm(const Eigen::MatrixXd& t) {
  if (t.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
  return svd.singularValues()(0);
}

VerificationReport revuz_check(const Eigen::MatrixXd& t1, const Eigen::MatrixXd& t2, double a, double tol,
                               const std::string& fixture) {
  if (t1.rows() != t1.cols() || t1.rows() != t2.rows() || t2.rows() != t2.cols() || t1.rows() == 0) {
    throw ValidationError("revuz_check: T1 and T2 must be square of equal size");
  }
  if (!(a > 0.0 && a < 1.0)) throw ValidationError("revuz_check: a must lie in (0, 1)");
  const double bound = 1.0 + 1e-12;
  for (const auto* t : {&t1, &t2}) {
    if (linf_operator_norm(*t) > bound && spectral_norm(*t) > bound) {
      throw ValidationError("revuz_check: operator is not a contraction");
    }
  }
  if (max_abs_diff(t1 * t2, t2 * t1) > 1e-12) throw ValidationError("revuz_check: T1 and T2 do not commute");

  VerificationReport report;
  report.suite = "revuz";
  const Eigen::Index n = t1.rows();
  const Eigen::MatrixXd blend = a * t1 + (1.0 - a) * t2 - Eigen::MatrixXd::Identity(n, n);
  const auto fixed = nullspace(from_eigen(blend), 1e-9);
  double r1 = 0.0;
  double r2 = 0.0;
  for (const auto& v : fixed) {
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.data(), n);
    r1 = std::max(r1, (t1 * x - x).norm() / x.norm());
    r2 = std::max(r2, (t2 * x - x).norm() / x.norm());
  }
  const std::string note = fixed.empty() ? "no fixed points" : "fixed_dim=" + std::to_string(fixed.size());
  report.check_le(fixture, "revuz_T1_residual", r1, tol, note);
  report.check_le(fixture, "revuz_T2_residual", r2, tol, note);
  return report;
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a) { return a.exp(); }

double log_two_c(int n) {
  const double nn = static_cast<double>(n);
  return std::log(2.0) + nn * std::log(nn) - nn - std::lgamma(nn + 1.0);
}

ExpBound exp_bound_check(const Eigen::MatrixXd& t, int n) {
  if (n < 1 || n > kMaxExpBoundPower) {
    throw ValidationError("exp_bound_check: n must lie in [1, " + std::to_string(kMaxExpBoundPower) + "]");
  }
  if (t.rows() != t.cols()) throw ValidationError("exp_bound_check: T must be square");
  if (spectral_norm(t) > 1.0 + 1e-12) throw ValidationError("exp_bound_check: ||T|| exceeds 1");
  const Eigen::MatrixXd gap = Eigen::MatrixXd::Identity(t.rows(), t.cols()) - t;
  const Eigen::MatrixXd e = matrix_exponential(-static_cast<double>(n) * gap);
  ExpBound b;
  b.lhs = spectral_norm(gap * e);
  b.rhs = std::exp(log_two_c(n));
  b.pass = b.lhs <= b.rhs + 1e-10;
  return b;
}

double stirling_ratio(int n) { return std::exp(log_two_c(n)) * std::sqrt(2.0 * std::numbers::pi * n) / 2.0; }

// --------------------------------------------------------------- fixtures

std::vector<GroupSpec> default_corpus_groups() {
  std::vector<GroupSpec> out;
  for (std::size_t n = 2; n <= 16; ++n) out.push_back(GroupSpec::cyclic(n));
  for (std::size_t n = 3; n <= 8; ++n) out.push_back(GroupSpec::dihedral(n));
  out.push_back(GroupSpec::symmetric(3));
  out.push_back(GroupSpec::symmetric(4));
  out.push_back(GroupSpec::quaternion8());
  out.push_back(GroupSpec::alternating(4));
  return out;
}

RationalMeasure random_symmetric_generating_measure(const GroupPtr& group, std::mt19937_64& rng) {
  const auto& g = require_finite(*group, "random measure");
  const auto n = static_cast<Element>(g.size());
  if (n == 1) return delta<Rational>(group, 0);
  while (true) {
    std::set<Element> orbit_reps;
    const int picks = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < picks; ++i) orbit_reps.insert(1 + static_cast<Element>(rng() % (n - 1)));
    const bool lazy = rng() % 3 == 0;
    std::vector<Element> support;
    for (auto x : orbit_reps) {
      support.push_back(x);
      support.push_back(g.inverse(x));
    }
    if (lazy) support.push_back(0);
    if (closure(g, support).size() != n) continue;
    std::map<Element, int> weights;
    for (auto x : orbit_reps) {
      const int w = 1 + static_cast<int>(rng() % 4);
      weights[x] = w;
      weights[g.inverse(x)] = w;
    }
    if (lazy) weights[0] = 1 + static_cast<int>(rng() % 4);
    if (auto mu = integer_weighted(group, weights)) return *mu;
  }
}

RationalMeasure random_generating_measure(const GroupPtr& group, std::mt19937_64& rng) {
  const auto& g = require_finite(*group, "random measure");
  const auto n = static_cast<Element>(g.size());
  if (n <= 2) throw ValidationError("random_generating_measure: every measure on " + g.label() + " is symmetric");
  while (true) {
    std::map<Element, int> weights;
    const int picks = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < picks; ++i) weights[1 + static_cast<Element>(rng() % (n - 1))] = 1 + static_cast<int>(rng() % 6);
    if (rng() % 4 == 0) weights[0] = 1 + static_cast<int>(rng() % 6);
    auto mu = integer_weighted(group, weights);
    if (mu && is_generating(*mu) && !is_symmetric(*mu)) return *mu;
  }
}

std::vector<Fixture> symmetric_corpus(std::uint64_t seed, int per_group, const std::vector<GroupSpec>& groups) {
  std::vector<Fixture> out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto group = build_group(groups[i]);
    const auto& g = require_finite(*group, "corpus");
    const auto name = short_label(groups[i]);
    const bool free_of_index_two = index_two_free(groups[i]);
    out.push_back({name + "/canonical", uniform<Rational>(group, canonical_generators(g)), free_of_index_two});
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    for (int k = 0; k < per_group; ++k) {
      std::ostringstream id;
      id << name << "/r" << std::setw(2) << std::setfill('0') << k;
      out.push_back({id.str(), random_symmetric_generating_measure(group, rng), free_of_index_two});
    }
  }
  return out;
}

std::vector<Fixture> nonsymmetric_corpus(std::uint64_t seed, int random_count) {
  struct Hand {
    std::string id;
    GroupSpec spec;
    std::map<Element, int> weights;
  };
  const std::vector<Hand> hand{
      {"Z5/delta1", GroupSpec::cyclic(5), {{1, 1}}},
      {"Z6/uniform12", GroupSpec::cyclic(6), {{1, 1}, {2, 1}}},
      {"Z4/delta1", GroupSpec::cyclic(4), {{1, 1}}},
      {"Z7/delta3", GroupSpec::cyclic(7), {{3, 1}}},
      {"Z8/w12", GroupSpec::cyclic(8), {{1, 1}, {2, 2}}},
      {"Z9/w13", GroupSpec::cyclic(9), {{1, 1}, {3, 1}}},
      {"Z10/lazy", GroupSpec::cyclic(10), {{0, 1}, {1, 1}}},
      {"Z12/w14", GroupSpec::cyclic(12), {{1, 1}, {4, 3}}},
      {"S3/transposition_cycle", GroupSpec::symmetric(3), {{1, 1}, {3, 1}}},
      {"D4/rotation_reflection", GroupSpec::dihedral(4), {{1, 1}, {4, 1}}},
      {"Q8/ij", GroupSpec::quaternion8(), {{2, 1}, {4, 1}}},
      {"A4/two_cycles", GroupSpec::alternating(4), {{1, 1}, {4, 1}}},
  };
  std::vector<Fixture> out;
  for (const auto& h : hand) {
    const auto group = build_group(h.spec);
    auto mu = integer_weighted(group, h.weights);
    if (!mu || !is_generating(*mu) || is_symmetric(*mu)) {
      throw ComputationError("fixture " + h.id + " is not a non-symmetric generating measure");
    }
    out.push_back({h.id, *mu, index_two_free(h.spec)});
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x6e73u};
  std::mt19937_64 rng(seq);
  const auto groups = default_corpus_groups();
  for (int k = 0; k < random_count; ++k) {
    GroupSpec spec;
    do {
      spec = groups[rng() % groups.size()];
    } while (spec.kind == GroupKind::cyclic && spec.n <= 2);
    const auto group = build_group(spec);
    std::ostringstream id;
    id << short_label(spec) << "/n" << std::setw(2) << std::setfill('0') << k;
    out.push_back({id.str(), random_generating_measure(group, rng), index_two_free(spec)});
  }
  return out;
}

// ------------------------------------------------------------------ suites

VerificationReport biharmonic_operator_check(const RationalMeasure& nu, const std::string& fixture, double tol) {
  const auto& g = require_finite(nu.group(), "operator-level check");
  if (!nu.contains(g.identity())) throw ValidationError("operator-level check: identity not in supp(nu)");
  const auto real = nu.to_real();
  const Eigen::MatrixXd r = to_eigen(OperatorOnMatrices(real, Side::right).materialize());
  const Eigen::MatrixXd l = to_eigen(OperatorOnMatrices(real, Side::left).materialize());
  const Eigen::Index dim = r.rows();
  const auto fixed = nullspace(from_eigen(r * l - Eigen::MatrixXd::Identity(dim, dim)), 1e-9);
  double worst_r = 0.0;
  double worst_l = 0.0;
  for (const auto& v : fixed) {
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.data(), dim);
    const double scale = x.cwiseAbs().maxCoeff();
    worst_r = std::max(worst_r, (r * x - x).cwiseAbs().maxCoeff() / scale);
    worst_l = std::max(worst_l, (l * x - x).cwiseAbs().maxCoeff() / scale);
  }
  VerificationReport report;
  report.suite = "operator";
  const std::string note = "solutions=" + std::to_string(fixed.size());
  report.check_le(fixture, "operator_right_fixed", worst_r, tol, note);
  report.check_le(fixture, "operator_left_fixed", worst_l, tol, note);
  return report;
}

VerificationReport eigen_operator_check(const Fixture& fixture, double tol) {
  const OperatorOnMatrices sop(fixture.mu.to_real(), Side::right);
  const auto big = sop.materialize();
  const auto spec = matrix_spectrum(big, kDefaultTolerance);
  const std::size_t n = sop.order();
  double worst = 0.0;
  std::size_t operators = 0;
  for (const auto& e : spec.peripheral) {
    for (const auto& v : matrix_eigenspace(big, e.value, kDefaultTolerance)) {
      Matrix<Complex> t(n, n);
      for (std::size_t i = 0; i < n * n; ++i) t(i / n, i % n) = v[i];
      const auto w = eigen_operator_to_function(sop, t, e.value, tol);
      worst = std::max(worst, w.residual);
      ++operators;
    }
  }
  VerificationReport report;
  report.suite = "operator";
  report.check_le(fixture.id, "eigen_operator_residual", worst, tol, "eigen_operators=" + std::to_string(operators));
  return report;
}

VerificationReport run_theorem_suite(const std::vector<Fixture>& fixtures, const TheoremSuiteOptions& options) {
  VerificationReport report;
  report.suite = "theorems";
  const double tol = options.tol;
  for (const auto& fx : fixtures) {
    const auto& id = fx.id;
    const auto& mu = fx.mu;
    const auto group = mu.group_ptr();
    const auto& g = require_finite(*group, "theorem suite");
    const bool symmetric = is_symmetric(mu);
    if (!is_generating(mu)) throw ValidationError("fixture " + id + ": measure does not generate the group");

    if (!symmetric) {
      guarded(report, id, "root_of_unity", [&] {
        report.append(root_of_unity_check(mu, 1e-6, static_cast<int>(2 * g.size()), id));
      });
      continue;
    }

    std::optional<SpectralReport> spec;
    guarded(report, id, "peripheral_pm1", [&] {
      spec = spectrum(right_operator(mu.to_real()), kDefaultTolerance);
      double dev = 0.0;
      for (const auto& e : spec->peripheral) dev = std::max(dev, std::min(std::abs(e.value - 1.0), std::abs(e.value + 1.0)));
      report.check_le(id, "peripheral_pm1", dev, tol, "peripheral=" + std::to_string(spec->peripheral.size()));
    });
    guarded(report, id, "root_of_unity", [&] {
      report.append(root_of_unity_check(mu, tol, static_cast<int>(2 * g.size()), id));
    });

    std::vector<GroupFunction<Rational>> biharmonic;
    guarded(report, id, "biharmonic_split", [&] {
      biharmonic = jointly_biharmonic_space(mu);
      std::size_t bad = 0;
      for (const auto& f : biharmonic) {
        const auto d = decompose(f, mu);
        const bool ok = d.constant && is_constant(d.harmonic) && d.harmonic.values.front() == *d.constant &&
                        convolve_function(d.anti_harmonic, mu, Side::right) == negated(d.anti_harmonic) &&
                        convolve_function(d.anti_harmonic, mu, Side::left) == negated(d.anti_harmonic);
        bad += ok ? 0 : 1;
      }
      report.check(id, "biharmonic_split", bad == 0, "biharmonic_dim=" + std::to_string(biharmonic.size()));
    });

    std::vector<GroupFunction<Rational>> anti;
    std::optional<Character> chi;
    guarded(report, id, "anti_character", [&] {
      anti = anti_harmonic_space(mu, Side::right);
      const auto har = harmonic_space(mu, Side::right);
      chi = find_anti_character(mu);
      bool ok = anti.empty() != chi.has_value();
      if (chi) {
        ok = ok && is_character(*chi) && anti.size() == har.size();
        for (auto s : mu.support()) ok = ok && chi->values[s] == -1;
        for (const auto& f : anti) {
          const auto f1 = factor_anti_harmonic(f, *chi, mu);
          ok = ok && convolve_function(f1, mu, Side::right) == f1;
          auto back = f1;
          for (Element x = 0; x < g.size(); ++x) back[x] *= chi->values[x];
          ok = ok && back == f;
        }
      }
      if (spec) {
        bool minus_one = false;
        for (const auto& e : spec->peripheral) minus_one = minus_one || std::abs(e.value + 1.0) <= tol;
        ok = ok && minus_one == chi.has_value();
      }
      report.check(id, "anti_character", ok,
                   "anti_dim=" + std::to_string(anti.size()) + " har_dim=" + std::to_string(har.size()) +
                       " character=" + (chi ? "yes" : "no"));
    });

    if (fx.index_two_free) {
      const bool ok = anti.empty() && biharmonic.size() == 1 && is_constant(biharmonic.front());
      report.check(id, "no_index_two", ok, "anti_dim=" + std::to_string(anti.size()));
    }

    if (options.operator_level && g.size() <= kOperatorLevelMaxOrder) {
      guarded(report, id, "operator_fixed", [&] {
        report.append(biharmonic_operator_check(convolve(mu, mu), id + "[nu=mu*mu]", tol));
        if (mu.contains(g.identity())) report.append(biharmonic_operator_check(mu, id + "[nu=mu]", tol));
      });
      guarded(report, id, "eigen_operator_residual", [&] { report.append(eigen_operator_check(fx, tol)); });
    }

    if (options.boundary && chi) {
      guarded(report, id, "boundary", [&] {
        const auto b = peripheral_boundary(mu);
        const std::size_t dim = b.dimension();
        const auto one = constant_function<Rational>(group, Rational(1));
        bool ok = dim == 2 * harmonic_space(mu, Side::right).size();
        auto element = [&](const std::vector<Rational>& coeffs) {
          std::vector<Rational> v(g.size(), Rational(0));
          for (std::size_t k = 0; k < dim; ++k)
            for (Element x = 0; x < g.size(); ++x) v[x] += coeffs[k] * b.basis[k][x];
          return GroupFunction<Rational>(group, std::move(v));
        };
        for (std::size_t i = 0; i < dim; ++i) {
          ok = ok && diamond(one, 1, b.basis[i], b.eigenvalues[i], mu) == b.basis[i];
          for (std::size_t j = 0; j < dim; ++j) {
            ok = ok && b.table[i][j] == b.table[j][i];
            const int lij = b.eigenvalues[i] * b.eigenvalues[j];
            for (std::size_t k = 0; k < dim; ++k) {
              const int ljk = b.eigenvalues[j] * b.eigenvalues[k];
              ok = ok && diamond(element(b.table[i][j]), lij, b.basis[k], b.eigenvalues[k], mu) ==
                             diamond(b.basis[i], b.eigenvalues[i], element(b.table[j][k]), ljk, mu);
            }
          }
        }
        const auto c = chi->as_function<Rational>();
        ok = ok && diamond(c, -1, c, -1, mu) == one;
        report.check(id, "boundary", ok, "dim=" + std::to_string(dim));
      });
    }

    guarded(report, id, "monotone_abs", [&] {
      bool ok = true;
      for (auto f : anti) {
        Rational peak(0);
        for (const auto& x : f.values) peak = std::max(peak, Rational(abs(x)));
        for (auto& x : f.values) x /= peak;
        ok = ok && monotone_abs_check(f, mu, options.monotone_steps).all_monotone();
      }
      report.check(id, "monotone_abs", ok, "functions=" + std::to_string(anti.size()));
    });

    guarded(report, id, "jensen", [&] {
      std::mt19937_64 rng(fnv1a(id));
      std::vector<Rational> v(g.size());
      for (auto& x : v) {
        x = Rational(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 7));
        x.canonicalize();
      }
      const auto r = jensen_check(GroupFunction<Rational>(group, v), mu);
      report.check_le(id, "jensen", r.max_excess.get_d(), 0.0);
    });
  }
  return report;
}

VerificationReport run_foguel_suite(std::uint64_t seed) {
  VerificationReport report;
  report.suite = "foguel";
  const double eps = 1e-6;
  const int n_max = 500;
  for (const auto& fx : symmetric_corpus(seed)) {
    if (!fx.mu.contains(0)) continue;
    const auto r = foguel_decay(fx.mu, eps, n_max);
    report.check(fx.id, "foguel_decay", r.first_below.has_value(),
                 r.first_below ? "first_n=" + std::to_string(*r.first_below) : "no n <= 500");
  }
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto control = foguel_decay(uniform<Rational>(z4, {1, 3}), eps, n_max);
  double dev = 0.0;
  for (double d : control.distances) dev = std::max(dev, std::abs(d - 1.0));
  report.check_le("Z4/uniform13", "foguel_negative_control", dev, 1e-12,
                  control.observation_mode ? "observation mode" : "unexpected convergence mode");
  return report;
}

VerificationReport run_revuz_suite(std::uint64_t seed, int trials) {
  VerificationReport report;
  report.suite = "revuz";
  const double tol = 1e-7;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x7265u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.1, 0.9);
  for (int t = 0; t < trials; ++t) {
    const int dim = 2 + static_cast<int>(rng() % 11);
    Eigen::MatrixXd t1;
    Eigen::MatrixXd t2;
    double a = unit(rng);
    switch (t % 4) {
      case 0:
        t2 = random_stochastic(rng, dim);
        t1 = 0.5 * (t2 + t2 * t2);
        a = 1.0 / 3.0;
        break;
      case 1: {
        const int split = 1 + static_cast<int>(rng() % static_cast<unsigned>(dim - 1));
        t2 = block_diagonal(random_stochastic(rng, split), random_stochastic(rng, dim - split));
        t1 = 0.2 * t2 + 0.5 * t2 * t2 + 0.3 * t2 * t2 * t2;
        break;
      }
      case 2: {
        t2 = random_permutation(rng, dim);
        t1 = t2;
        for (int k = static_cast<int>(rng() % 4); k > 0; --k) t1 = t1 * t2;
        break;
      }
      default: {
        const Eigen::MatrixXd p = random_permutation(rng, dim);
        t2 = 0.5 * (p + p.transpose());
        t1 = t2 * t2;
        break;
      }
    }
    std::ostringstream id;
    id << "trial" << std::setw(3) << std::setfill('0') << t;
    guarded(report, id.str(), "revuz", [&] { report.append(revuz_check(t1, t2, a, tol, id.str())); });
  }
  const auto z4 = build_group(GroupSpec::cyclic(4));
  const auto mu = uniform<Rational>(z4, {1, 3});
  report.append(revuz_check(to_eigen(matrix_cast<double>(right_operator(mu).entries())),
                            to_eigen(matrix_cast<double>(left_operator(mu).entries())), 0.5, tol, "Z4/uniform13"));
  report.append(revuz_check(Eigen::MatrixXd::Identity(5, 5), Eigen::MatrixXd::Identity(5, 5), 0.25, tol, "identity"));
  for (const auto& fx : symmetric_corpus(seed, 3)) {
    if (!fx.mu.contains(0)) continue;
    const auto real = fx.mu.to_real();
    report.append(revuz_check(to_eigen(right_operator(real).entries()), to_eigen(left_operator(real).entries()), 0.5,
                              tol, fx.id + "[R,L]"));
  }
  return report;
}

VerificationReport run_stirling_suite(std::uint64_t seed, int trials) {
  VerificationReport report;
  report.suite = "stirling";
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x7374u};
  std::mt19937_64 rng(seq);
  for (int n : {1, 10, 100}) {
    double worst = -1e300;
    int failures = 0;
    for (int t = 0; t < trials; ++t) {
      const int dim = 2 + static_cast<int>(rng() % 11);
      const auto b = exp_bound_check(random_contraction(rng, dim, t), n);
      worst = std::max(worst, b.lhs - b.rhs);
      failures += b.pass ? 0 : 1;
    }
    report.check_le("contractions[n=" + std::to_string(n) + "]", "exp_bound_excess", worst, 1e-10,
                    "trials=" + std::to_string(trials) + " failures=" + std::to_string(failures));
  }
  const auto id = exp_bound_check(Eigen::MatrixXd::Identity(4, 4), 10);
  report.check_le("identity", "exp_bound_lhs", id.lhs, 0.0);
  Eigen::MatrixXd flip = Eigen::MatrixXd::Zero(2, 2);
  flip(0, 0) = 1.0;
  flip(1, 1) = -1.0;
  const auto fb = exp_bound_check(flip, 4);
  report.check_le("diag(1,-1)[n=4]", "exp_bound_closed_form", std::abs(fb.lhs - 2.0 * std::exp(-8.0)), 1e-14,
                  "rhs=" + format_number(fb.rhs));
  double previous = 1e300;
  for (int n : {10, 50, 100, 200}) {
    const double ratio = stirling_ratio(n);
    const double dev = std::abs(ratio - 1.0);
    report.check("stirling[n=" + std::to_string(n) + "]", "stirling_trend", dev < previous,
                 "ratio=" + format_number(ratio));
    previous = dev;
  }
  const double r200 = stirling_ratio(200);
  report.check("stirling[n=200]", "stirling_ratio_in_band", r200 >= 0.9 && r200 <= 1.1, "ratio=" + format_number(r200));
  return report;
}

namespace {

// f -> -f on the one-step interior of the ball of radius R, and mu * f * mu = f
// on the points of length <= R - 1, evaluated on the ball of radius R + 1 so
// that both convolutions see f where they need it.
void check_truncated_example(VerificationReport& report, const std::string& name, const GroupSpec& ball,
                             const GroupSpec& wider, std::size_t expected_interior) {
  for (const auto& spec : {ball, wider}) {
    const auto group = build_group(spec);
    const auto& t = require_truncated(*group, "examples suite");
    const auto mu = uniform<Rational>(group, t.generators());
    std::vector<Rational> v(group->size());
    for (Element g = 0; g < group->size(); ++g) v[g] = t.length(g) % 2 == 0 ? 1 : -1;
    const auto f = PartialFunction<Rational>::total(GroupFunction<Rational>(group, v));
    if (spec.radius == ball.radius) {
      for (auto side : {Side::right, Side::left}) {
        const auto out = apply_truncated(mu, f, side);
        std::size_t bad = 0;
        for (auto g : out.interior) bad += out.result.values[g] == -v[g] ? 0 : 1;
        const std::string q = side == Side::right ? "f*mu=-f" : "mu*f=-f";
        report.check(name, q, bad == 0 && out.interior.size() == expected_interior,
                     "interior=" + std::to_string(out.interior.size()) + " mismatches=" + std::to_string(bad));
      }
    } else {
      const auto once = apply_truncated(mu, f, Side::right);
      const auto twice = apply_truncated(mu, once.result, Side::left);
      std::size_t bad = 0;
      std::size_t points = 0;
      for (auto g : twice.interior) {
        if (t.length(g) > ball.radius - 1) continue;
        ++points;
        bad += twice.result.values[g] == v[g] ? 0 : 1;
      }
      report.check(name, "mu*f*mu=f", bad == 0 && points == expected_interior,
                   "interior=" + std::to_string(points) + " mismatches=" + std::to_string(bad));
    }
  }
}

}  // namespace

VerificationReport run_examples_suite() {
  VerificationReport report;
  report.suite = "examples";
  check_truncated_example(report, "Z[r=50]", GroupSpec::lattice(1, 50), GroupSpec::lattice(1, 51), 99);
  check_truncated_example(report, "F2[r=6]", GroupSpec::free(2, 6), GroupSpec::free(2, 7),
                          ball_size(Family::free, 2, 5));
  return report;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"all", "theorems", "foguel", "revuz", "stirling", "examples"};
  return names;
}

VerificationReport run_suite(const std::string& name, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.suite = name;
  const bool all = name == "all";
  if (!all && std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end()) {
    throw ValidationError("unknown suite '" + name + "'");
  }
  if (all || name == "theorems") {
    report.append(run_theorem_suite(symmetric_corpus(seed)));
    report.append(run_theorem_suite(nonsymmetric_corpus(seed)));
  }
  if (all || name == "foguel") report.append(run_foguel_suite(seed));
  if (all || name == "revuz") report.append(run_revuz_suite(seed));
  if (all || name == "stirling") report.append(run_stirling_suite(seed));
  if (all || name == "examples") report.append(run_examples_suite());
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

template FoguelResult foguel_decay<Rational>(const Measure<Rational>&, double, int);
template FoguelResult foguel_decay<double>(const Measure<double>&, double, int);
template VerificationReport root_of_unity_check<Rational>(const Measure<Rational>&, double, int, const std::string&);
template VerificationReport root_of_unity_check<double>(const Measure<double>&, double, int, const std::string&);

}  // namespace walkharm
