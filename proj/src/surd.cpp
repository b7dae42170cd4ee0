#include "ratioref/surd.hpp"

#include <cmath>

namespace ratioref {

QuadSurd::QuadSurd(const Rational& p, const Rational& q, const Rational& d) : p_(p), q_(q), d_(d) {
  normalize();
}

void QuadSurd::normalize() {
  if (sgn(d_) < 0) throw DomainError("negative radicand in quadratic surd");
  if (sgn(q_) == 0 || sgn(d_) == 0) {
    q_ = 0;
    d_ = 0;
    return;
  }
  Rational root;
  if (exact_sqrt(d_, root)) {
    p_ += q_ * root;
    q_ = 0;
    d_ = 0;
  }
}

const Rational& QuadSurd::to_rational() const {
  if (!is_rational()) throw DomainError("value " + ratioref::to_string(*this) + " is irrational");
  return p_;
}

double QuadSurd::to_double() const {
  if (is_rational()) return p_.get_d();
  return p_.get_d() + q_.get_d() * std::sqrt(d_.get_d());
}

int QuadSurd::sign() const { return sign_of_surd_sum(p_, q_, d_, 0, 0); }

Rational QuadSurd::rescaled_coefficient(const QuadSurd& o) const {
  if (o.d_ == d_) return o.q_;
  Rational ratio = o.d_ / d_;
  Rational r;
  if (!exact_sqrt(ratio, r))
    throw DomainError("cannot combine sqrt(" + o.d_.get_str() + ") with sqrt(" + d_.get_str() + ")");
  return o.q_ * r;
}

QuadSurd& QuadSurd::operator+=(const QuadSurd& o) {
  p_ += o.p_;
  if (o.is_rational()) return *this;
  if (is_rational()) {
    q_ = o.q_;
    d_ = o.d_;
    return *this;
  }
  q_ += rescaled_coefficient(o);
  normalize();
  return *this;
}

QuadSurd& QuadSurd::operator-=(const QuadSurd& o) { return *this += -o; }

QuadSurd& QuadSurd::operator*=(const QuadSurd& o) {
  if (o.is_rational()) {
    p_ *= o.p_;
    q_ *= o.p_;
    normalize();
    return *this;
  }
  if (is_rational()) {
    Rational k = p_;
    *this = QuadSurd(k * o.p_, k * o.q_, o.d_);
    return *this;
  }
  Rational oq = rescaled_coefficient(o);
  Rational np = p_ * o.p_ + q_ * oq * d_;
  Rational nq = p_ * oq + q_ * o.p_;
  p_ = np;
  q_ = nq;
  normalize();
  return *this;
}

QuadSurd& QuadSurd::operator/=(const QuadSurd& o) {
  if (o.is_rational()) {
    if (sgn(o.p_) == 0) throw DomainError("division by zero");
    p_ /= o.p_;
    q_ /= o.p_;
    normalize();
    return *this;
  }
  // Norm is nonzero: o is irrational, so o != 0 and d is not a square.
  Rational norm = o.p_ * o.p_ - o.q_ * o.q_ * o.d_;
  *this *= o.conjugate();
  p_ /= norm;
  q_ /= norm;
  normalize();
  return *this;
}

int compare(const QuadSurd& a, const QuadSurd& b) {
  return sign_of_surd_sum(a.p_ - b.p_, a.q_, a.d_, -b.q_, b.d_);
}

int sign_of_surd_sum(const Rational& A, const Rational& B, const Rational& d1, const Rational& C,
                     const Rational& d2) {
  const int sb = sgn(d1) == 0 ? 0 : sgn(B);
  const int sc = sgn(d2) == 0 ? 0 : sgn(C);
  const Rational b2 = B * B * d1;
  const Rational c2 = C * C * d2;

  // Sign of X = B sqrt(d1) + C sqrt(d2).
  int sx;
  if (sb == 0)
    sx = sc;
  else if (sc == 0 || sb == sc)
    sx = sb;
  else
    sx = b2 > c2 ? sb : (b2 < c2 ? sc : 0);

  const int sa = sgn(A);
  if (sa == 0) return sx;
  if (sx == 0 || sx == sa) return sa;

  // Opposite signs: compare A^2 with X^2 = b2 + c2 + 2BC sqrt(d1 d2).
  if (sb == 0 || sc == 0) {
    const Rational diff = A * A - b2 - c2;
    return sgn(diff) > 0 ? sa : (sgn(diff) < 0 ? sx : 0);
  }
  const QuadSurd diff(A * A - b2 - c2, -2 * B * C, d1 * d2);
  const int sd = diff.sign();
  return sd > 0 ? sa : (sd < 0 ? sx : 0);
}

std::string to_string(const QuadSurd& s) {
  if (s.is_rational()) return s.rational_part().get_str();
  std::string out;
  const Rational& p = s.rational_part();
  const Rational& q = s.surd_coefficient();
  if (sgn(p) != 0) out = p.get_str();
  if (sgn(q) < 0)
    out += "-";
  else if (!out.empty())
    out += "+";
  Rational mag = abs(q);
  if (mag != 1) out += mag.get_str() + "*";
  out += "sqrt(" + s.radicand().get_str() + ")";
  return out;
}

}  // namespace ratioref
