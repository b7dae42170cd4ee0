#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <type_traits>

#include <gmpxx.h>
#include <Eigen/Core>

#include "ratioref/errors.hpp"

namespace ratioref {

/// Exact rational scalar (canonical GMP fraction).
using Rational = mpq_class;

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

template <class S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw DomainError("zero denominator");
  Rational r(num, 1);
  r /= Rational(den, 1);
  r.canonicalize();
  return r;
}

/// Parses "p/q", an integer, or an exact decimal ("0.3", "-1.5e-2").
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text, or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Shortest round-trip is not required here; 15 significant digits is the
/// documented float output format.
inline std::string to_string(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double v) { return v; }

inline int sign(const Rational& r) { return sgn(r); }
inline int sign(double v) { return (v > 0) - (v < 0); }

/// Relative tolerance used for float tie detection and identity checks.
struct Tolerance {
  double rel = 1e-12;
};

/// Equality under the backend's policy: exact for rationals, relative
/// |a - b| <= rel * max(|a|, |b|) for floats.
template <class S>
bool ties(const S& a, const S& b, const Tolerance& tol = {}) {
  if constexpr (std::is_floating_point_v<S>) {
    if (a == b) return true;
    return std::abs(a - b) <= tol.rel * std::max(std::abs(a), std::abs(b));
  } else {
    (void)tol;
    return a == b;
  }
}

/// Strictly less under the backend's tie policy.
template <class S>
bool strictly_less(const S& a, const S& b, const Tolerance& tol = {}) {
  return a < b && !ties(a, b, tol);
}

/// x^n for a nonnegative integer n by repeated squaring.
template <class S>
S integer_power(S x, unsigned long n) {
  S result(1);
  while (n > 0) {
    if (n & 1UL) result *= x;
    n >>= 1;
    if (n > 0) x *= x;
  }
  return result;
}

/// Exact square root of a nonnegative rational, when it is rational.
bool exact_sqrt(const Rational& r, Rational& root);

/// Exact k-th root of a positive rational, when it is rational.
bool exact_root(const Rational& r, unsigned long k, Rational& root);

}  // namespace ratioref

namespace Eigen {

template <>
struct NumTraits<ratioref::Rational> : GenericNumTraits<ratioref::Rational> {
  using Real = ratioref::Rational;
  using NonInteger = ratioref::Rational;
  using Nested = ratioref::Rational;
  using Literal = ratioref::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
