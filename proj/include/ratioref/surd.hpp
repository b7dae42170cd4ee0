#pragma once

#include <string>
#include <type_traits>

#include "ratioref/scalar.hpp"

namespace ratioref {

/// An exact element p + q*sqrt(d) of a real quadratic field Q(sqrt d).
///
/// The rational backend needs this for closed forms with one square root:
/// sublevel endpoints, geometric-mean boundaries sqrt(y_i y_{i+1}) and the
/// balance point sqrt(a c). The radicand is kept as given unless it is a
/// perfect rational square, in which case the value collapses to a rational.
/// Arithmetic between surds requires the radicands to differ by a rational
/// square factor; ordering works between any two surds.
class QuadSurd {
 public:
  QuadSurd() = default;
  QuadSurd(const Rational& r) : p_(r) {}  // NOLINT(google-explicit-constructor)
  QuadSurd(long v) : p_(v) {}             // NOLINT(google-explicit-constructor)
  QuadSurd(const Rational& p, const Rational& q, const Rational& d);

  static QuadSurd sqrt(const Rational& d) { return QuadSurd(0, 1, d); }

  const Rational& rational_part() const { return p_; }
  const Rational& surd_coefficient() const { return q_; }
  const Rational& radicand() const { return d_; }

  bool is_rational() const { return sgn(q_) == 0; }
  /// Precondition: is_rational().
  const Rational& to_rational() const;

  double to_double() const;
  int sign() const;
  QuadSurd conjugate() const { return QuadSurd(p_, -q_, d_); }

  QuadSurd& operator+=(const QuadSurd& o);
  QuadSurd& operator-=(const QuadSurd& o);
  QuadSurd& operator*=(const QuadSurd& o);
  QuadSurd& operator/=(const QuadSurd& o);

  friend QuadSurd operator+(QuadSurd a, const QuadSurd& b) { return a += b; }
  friend QuadSurd operator-(QuadSurd a, const QuadSurd& b) { return a -= b; }
  friend QuadSurd operator*(QuadSurd a, const QuadSurd& b) { return a *= b; }
  friend QuadSurd operator/(QuadSurd a, const QuadSurd& b) { return a /= b; }
  friend QuadSurd operator-(const QuadSurd& a) { return QuadSurd(-a.p_, -a.q_, a.d_); }

  friend int compare(const QuadSurd& a, const QuadSurd& b);
  friend bool operator==(const QuadSurd& a, const QuadSurd& b) { return compare(a, b) == 0; }
  friend bool operator!=(const QuadSurd& a, const QuadSurd& b) { return compare(a, b) != 0; }
  friend bool operator<(const QuadSurd& a, const QuadSurd& b) { return compare(a, b) < 0; }
  friend bool operator>(const QuadSurd& a, const QuadSurd& b) { return compare(a, b) > 0; }
  friend bool operator<=(const QuadSurd& a, const QuadSurd& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const QuadSurd& a, const QuadSurd& b) { return compare(a, b) >= 0; }

 private:
  void normalize();
  // Rewrites o's surd term over this->d_; throws when the fields differ.
  Rational rescaled_coefficient(const QuadSurd& o) const;

  Rational p_{0};
  Rational q_{0};
  Rational d_{0};
};

/// "p/q" for rationals, otherwise e.g. "2+sqrt(3)", "-1/2*sqrt(5)".
std::string to_string(const QuadSurd& s);
inline double to_double(const QuadSurd& s) { return s.to_double(); }
inline int sign(const QuadSurd& s) { return s.sign(); }

/// Sign of A + B*sqrt(d1) + C*sqrt(d2), exactly.
int sign_of_surd_sum(const Rational& A, const Rational& B, const Rational& d1, const Rational& C,
                     const Rational& d2);

/// The smallest exact field holding square roots of backend values:
/// QuadSurd for rationals, the scalar itself for floats.
template <class S>
struct root_field {
  using type = S;
};
template <>
struct root_field<Rational> {
  using type = QuadSurd;
};
template <class S>
using Root = typename root_field<S>::type;

/// sqrt(x) in the backend's root field.
template <class S>
Root<S> root_sqrt(const S& x) {
  if constexpr (is_exact_v<S>)
    return QuadSurd::sqrt(x);
  else
    return std::sqrt(x);
}

template <class S>
Root<S> lift(const S& x) {
  return Root<S>(x);
}

}  // namespace ratioref

namespace Eigen {

template <>
struct NumTraits<ratioref::QuadSurd> : GenericNumTraits<ratioref::QuadSurd> {
  using Real = ratioref::QuadSurd;
  using NonInteger = ratioref::QuadSurd;
  using Nested = ratioref::QuadSurd;
  using Literal = ratioref::QuadSurd;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 18,
    AddCost = 400,
    MulCost = 600
  };
  static inline Real epsilon() { return 0L; }
  static inline Real dummy_precision() { return 0L; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
