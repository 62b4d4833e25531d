#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "walkharm/harmonic.hpp"

namespace walkharm {

struct CheckRecord {
  std::string fixture;
  std::string quantity;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
  std::string note;
};

struct VerificationReport {
  std::string suite;
  std::vector<CheckRecord> records;
  // Wall-clock seconds; informational only, never serialized into reports
  // that must be reproducible.
  double runtime_seconds = 0.0;

  bool pass() const;
  std::size_t failures() const;

  // value <= threshold.
  void check_le(std::string fixture, std::string quantity, double value, double threshold, std::string note = {});
  void check(std::string fixture, std::string quantity, bool ok, std::string note = {});
  void append(const VerificationReport& other);

  // One line per check: "PASS|FAIL <fixture> <quantity> value=<v> threshold=<t> [note]".
  std::string summary() const;
};

// ------------------------------------------------------------------- Foguel

struct FoguelResult {
  // distances[n - 1] = tv(mu^n, mu^(n+1)), n = 1..n_max.
  std::vector<double> distances;
  std::optional<int> first_below;
  // The identity is not in supp(mu): decay is not guaranteed, the sequence
  // is only reported.
  bool observation_mode = false;
};

template <class S>
FoguelResult foguel_decay(const Measure<S>& mu, double eps, int n_max);

// ------------------------------------------------------------ roots of unity

// k = min_return(mu, cap) and |lambda^k - 1| <= tol for every peripheral
// eigenvalue. mu must generate its finite group.
template <class S>
VerificationReport root_of_unity_check(const Measure<S>& mu, double tol, int cap, const std::string& fixture = "mu");

// ------------------------------------------------------- commuting contractions

// Operator norms used for the contraction preconditions.
double linf_operator_norm(const Eigen::MatrixXd& t);
double spectral_norm(const Eigen::MatrixXd& t);

// T1, T2 commuting contractions (in the l-infinity or the l2 operator norm),
// 0 < a < 1. Every fixed vector of a T1 + (1 - a) T2 must be fixed by both.
VerificationReport revuz_check(const Eigen::MatrixXd& t1, const Eigen::MatrixXd& t2, double a, double tol,
                               const std::string& fixture = "pair");

// exp(A): Pade approximant with scaling and squaring (Eigen MatrixFunctions).
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a);

struct ExpBound {
  double lhs = 0.0;  // ||(I - T) exp(-n (I - T))||_2
  double rhs = 0.0;  // 2 n^n / (e^n n!)
  bool pass = false;
};

inline constexpr int kMaxExpBoundPower = 500;

// log of 2 n^n / (e^n n!), via lgamma.
double log_two_c(int n);

// Requires ||T||_2 <= 1 + 1e-12 and 1 <= n <= 500.
ExpBound exp_bound_check(const Eigen::MatrixXd& t, int n);

// 2 c_{n,n} sqrt(2 pi n) / 2, which tends to 1.
double stirling_ratio(int n);

// --------------------------------------------------------------- fixtures

struct Fixture {
  std::string id;
  RationalMeasure mu;
  // The group is known to have no subgroup of index 2.
  bool index_two_free = false;
};

// Z2..Z16, D3..D8, S3, S4, Q8, A4.
std::vector<GroupSpec> default_corpus_groups();

// Sorted support closed under inverses, generating, with rational weights of
// denominator <= 64 that agree on inverse pairs.
RationalMeasure random_symmetric_generating_measure(const GroupPtr& group, std::mt19937_64& rng);

// Generating, not symmetric, denominators <= 64.
RationalMeasure random_generating_measure(const GroupPtr& group, std::mt19937_64& rng);

// For each corpus group: the uniform measure on a canonical symmetric
// generating set, then `per_group` seeded random symmetric generating
// measures.
std::vector<Fixture> symmetric_corpus(std::uint64_t seed, int per_group = 20,
                                      const std::vector<GroupSpec>& groups = default_corpus_groups());

// Hand-picked non-symmetric generating fixtures (Z5 with delta_1, Z6 with
// uniform{1,2}, ...) followed by `random_count` seeded random ones.
std::vector<Fixture> nonsymmetric_corpus(std::uint64_t seed, int random_count = 10);

// ------------------------------------------------------------------ suites

inline constexpr std::size_t kOperatorLevelMaxOrder = 8;

struct TheoremSuiteOptions {
  double tol = 1e-8;
  bool operator_level = true;
  bool boundary = true;
  int monotone_steps = 50;
};

// Per fixture: peripheral spectrum in {+1, -1}, roots of unity, the
// bi-harmonic decomposition, anti-harmonic characters and factorization, the
// index-2 corollary, operator-level fixed points (order <= 8), the diamond
// product and the |f| monotonicity.
VerificationReport run_theorem_suite(const std::vector<Fixture>& fixtures, const TheoremSuiteOptions& options = {});

// Every peripheral eigen-operator of the right operator-level map yields an
// eigenfunction via a Fourier coefficient.
VerificationReport eigen_operator_check(const Fixture& fixture, double tol = 1e-8);

// Both one-sided operators fix every solution of P_nu P°_nu T = T.
VerificationReport biharmonic_operator_check(const RationalMeasure& nu, const std::string& fixture, double tol = 1e-8);

VerificationReport run_foguel_suite(std::uint64_t seed);
VerificationReport run_revuz_suite(std::uint64_t seed, int trials = 100);
VerificationReport run_stirling_suite(std::uint64_t seed, int trials = 100);
VerificationReport run_examples_suite();

// all, theorems, foguel, revuz, stirling, examples. ValidationError otherwise.
VerificationReport run_suite(const std::string& name, std::uint64_t seed);

const std::vector<std::string>& suite_names();

}  // namespace walkharm
