#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "ratioref/scalar.hpp"
#include "ratioref/surd.hpp"

namespace ratioref {

/// Exponent a > 0 selecting J_a(x) = cosh(a log x) - 1 from the d'Alembert
/// family. a = 1 is the canonical penalty J(x) = (x - 1)^2 / (2x).
class PenaltyParam {
 public:
  PenaltyParam() = default;
  explicit PenaltyParam(double a) : a_(a) {
    if (!(a > 0) || !std::isfinite(a)) throw DomainError("penalty exponent must be positive, got " + to_string(a));
  }

  double a() const { return a_; }
  bool is_canonical() const { return a_ == 1.0; }

  /// The exponent as a positive integer, if it is one. Exact backends need
  /// this: J_a is a rational function of x only for integral a.
  std::optional<unsigned long> integer_exponent() const {
    if (a_ != std::floor(a_) || a_ > 1024) return std::nullopt;
    return static_cast<unsigned long>(a_);
  }

 private:
  double a_ = 1.0;
};

template <class S>
bool is_positive(const S& x) {
  if constexpr (std::is_floating_point_v<S>)
    return x > 0 && std::isfinite(x);
  else
    return sign(x) > 0;
}

namespace detail {
inline unsigned long require_integer_exponent(const PenaltyParam& p) {
  auto n = p.integer_exponent();
  if (!n) throw DomainError("exact backend needs an integer penalty exponent, got a = " + to_string(p.a()));
  return *n;
}
}  // namespace detail

/// J_a(x). Exact on Rational and QuadSurd for integer a; float path uses
/// 2 sinh^2(a log(x) / 2), which keeps full relative accuracy near x = 1.
template <class S>
S eval(const S& x, const PenaltyParam& p = {}) {
  if (!is_positive(x)) throw DomainError("penalty argument must be positive");
  if constexpr (std::is_floating_point_v<S>) {
    const double h = std::sinh(0.5 * p.a() * std::log(x));
    return 2.0 * h * h;
  } else {
    const S y = integer_power(S(x), detail::require_integer_exponent(p));
    const S m = y - S(1);
    return m * m / (S(2) * y);
  }
}

/// J(xy) + J(x/y) - 2J(x) - 2J(y) - 2J(x)J(y); identically zero.
template <class S>
S dalembert_residual(const S& x, const S& y, const PenaltyParam& p = {}) {
  if (!is_positive(x) || !is_positive(y)) throw DomainError("d'Alembert arguments must be positive");
  const S jx = eval(x, p);
  const S jy = eval(y, p);
  return eval(S(x * y), p) + eval(S(x / y), p) - S(2) * jx - S(2) * jy - S(2) * jx * jy;
}

/// Residual divided by the magnitude of the terms it cancels (>= 1).
double dalembert_relative_residual(double x, double y, const PenaltyParam& p = {});

/// {x : J(x) <= level} = [lo, hi] with lo * hi = 1.
template <class V>
struct SublevelInterval {
  V lo;
  V hi;
  V level;
};

/// Sublevel interval of J_a at `level`. Rational input yields exact surd
/// endpoints (a = 1 only); floats use b = exp(arcosh(level + 1) / a).
template <class S>
SublevelInterval<Root<S>> sublevel(const S& level, const PenaltyParam& p = {}) {
  if (sign(level) < 0) throw DomainError("sublevel level must be nonnegative");
  if constexpr (is_exact_v<S>) {
    if (!p.is_canonical()) throw DomainError("exact sublevel endpoints exist only for a = 1; use the float backend");
    const Rational centre = 1 + level;
    const Rational disc = level * (2 + level);
    return {QuadSurd(centre, -1, disc), QuadSurd(centre, 1, disc), QuadSurd(level)};
  } else {
    double hi;
    if (p.is_canonical())
      hi = (1.0 + level) + std::sqrt(level * (2.0 + level));
    else
      hi = std::exp(std::acosh(level + 1.0) / p.a());
    return {1.0 / hi, hi, level};
  }
}

/// J_a(e^t) = cosh(a t) - 1.
inline double log_form(double t, const PenaltyParam& p = {}) {
  const double h = std::sinh(0.5 * p.a() * t);
  return 2.0 * h * h;
}

struct QuadraticBounds {
  double lower;
  double upper;
};

/// t^2/2 <= cosh(t) - 1 <= t^2/2 + (t^4/24) cosh|t| for the canonical penalty.
inline QuadraticBounds quadratic_bounds(double t) {
  const double t2 = t * t;
  return {0.5 * t2, 0.5 * t2 + t2 * t2 / 24.0 * std::cosh(std::abs(t))};
}

}  // namespace ratioref
