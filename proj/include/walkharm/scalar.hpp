#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace walkharm {

using Rational = mpq_class;
using Complex = std::complex<double>;

// Per-scalar behaviour shared by the exact (Rational) and floating
// (double, Complex) code paths. `tol` is ignored on the exact path.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& x, double /*tol*/) { return sgn(x) == 0; }
  static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
  static Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static double magnitude(double x) { return std::abs(x); }
  static Complex to_complex(double x) { return {x, 0.0}; }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static bool is_zero(const Complex& x, double tol) { return std::abs(x) <= tol; }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex to_complex(const Complex& x) { return x; }
};

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(double x) { return x; }

inline Rational absolute(const Rational& x) { return abs(x); }
inline double absolute(double x) { return std::abs(x); }

// Converts between scalar kinds; Rational -> double is the only lossy one.
template <class To, class From>
To scalar_cast(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<From, Rational>) {
    return To(x.get_d());
  } else {
    return To(x);
  }
}

// Parses "p/q", "p" or "-p/q" into a canonical rational. Throws
// ValidationError on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, or "p" for integers.
std::string to_string(const Rational& x);

}  // namespace walkharm
