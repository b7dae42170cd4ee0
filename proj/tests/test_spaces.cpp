#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ratioref/spaces.hpp"

using namespace ratioref;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("scales must be positive") {
  CHECK_THROWS_AS(Scale<Rational>(q(0)), DomainError);
  CHECK_THROWS_AS(Scale<double>(-2.0), DomainError);
  CHECK_THROWS_AS(Scale<double>(std::nan("")), DomainError);
  CHECK_THROWS_AS((ScaleVector<Rational>{q(1), q(-1)}), DomainError);
  CHECK_THROWS_AS(ScaleVector<double>(Eigen::VectorXd(0)), ValidationError);
  CHECK(Scale<Rational>(q(3, 7)).value() == q(3, 7));
}

TEST_CASE("finite dictionary validation") {
  CHECK_THROWS_AS(FiniteDictionary<Rational>({}), ValidationError);
  CHECK_THROWS_AS(FiniteDictionary<Rational>::from_scales({q(1), q(0)}), DomainError);

  Vector<Rational> one(1), two(2);
  one << q(1);
  two << q(1), q(2);
  CHECK_THROWS_AS(FiniteDictionary<Rational>({{"a", one}, {"b", two}}), ValidationError);
  CHECK_THROWS_AS(FiniteDictionary<Rational>({{"a", one}, {"a", one}}), ValidationError);

  const auto d = FiniteDictionary<Rational>::from_scales({q(1, 4), q(1), q(4)});
  CHECK(d.size() == 3);
  CHECK(d.dim() == 1);
  CHECK(d.items()[2].id == "o3");
  CHECK(d.find("o2") == 1u);
  CHECK_FALSE(d.find("zz").has_value());
}

TEST_CASE("repeated scales are allowed") {
  const auto d = FiniteDictionary<Rational>::from_scales({q(2), q(2), q(3)});
  CHECK(d.size() == 3);
  CHECK(d.scale(0) == d.scale(1));
}

TEST_CASE("product dictionary") {
  const auto a = FiniteDictionary<Rational>::from_scales({q(1), q(2)});
  const auto b = FiniteDictionary<Rational>::from_scales({q(3), q(5), q(7)});
  const auto p = FiniteDictionary<Rational>::product({a, b});
  CHECK(p.size() == 6);
  CHECK(p.dim() == 2);
  CHECK(p.items()[0].id == "(o1,o1)");
  CHECK(p.items()[5].id == "(o2,o3)");
  CHECK(p.items()[5].scale[0] == q(2));
  CHECK(p.items()[5].scale[1] == q(7));
  CHECK_THROWS_AS(FiniteDictionary<Rational>::product({p, a}), ValidationError);
}

TEST_CASE("interval dictionary") {
  CHECK_THROWS_AS(IntervalDictionary<Rational>(Scale<Rational>(q(5)), Scale<Rational>(q(2))), ValidationError);
  const IntervalDictionary<Rational> iv(Scale<Rational>(q(2)), Scale<Rational>(q(2)));
  CHECK(iv.lo() == iv.hi());
}

TEST_CASE("log box") {
  CHECK_THROWS_AS(LogBox(vec2(1, 0), vec2(0, 1)), ValidationError);
  CHECK_THROWS_AS(LogBox(vec2(0, 0), Eigen::VectorXd::Ones(3)), ValidationError);
  const LogBox box(vec2(-1, -1), vec2(1, 1));
  CHECK(box.clamp(vec2(3, -0.5)).isApprox(vec2(1, -0.5)));
  CHECK(box.contains(vec2(0.5, -1)));
  CHECK_FALSE(box.contains(vec2(1.5, 0)));
}

TEST_CASE("empty polytopes are rejected") {
  Eigen::MatrixXd n(2, 1);
  n << 1, -1;
  CHECK_THROWS_AS(LogPolytope(n, vec2(-1, -1)), ValidationError);

  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 2);
  Eigen::VectorXd neg(1);
  neg << -1;
  CHECK_THROWS_AS(LogPolytope(zero, neg), ValidationError);
}

TEST_CASE("polytope feasibility agrees with a grid probe") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(-1, 1), off(-1.5, 1.5);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::MatrixXd n(4, 2);
    Eigen::VectorXd c(4);
    for (int i = 0; i < 4; ++i) {
      n(i, 0) = coef(rng);
      n(i, 1) = coef(rng);
      c[i] = off(rng);
    }
    bool grid_hit = false;
    for (int i = 0; i <= 200 && !grid_hit; ++i)
      for (int j = 0; j <= 200 && !grid_hit; ++j) {
        const Eigen::VectorXd u = vec2(-20 + 0.2 * i, -20 + 0.2 * j);
        grid_hit = ((n * u - c).array() <= 0).all();
      }
    bool constructed = true;
    try {
      LogPolytope poly(n, c);
      ++feasible;
    } catch (const ValidationError&) {
      constructed = false;
      ++infeasible;
    }
    if (grid_hit) CHECK(constructed);
  }
  CHECK(feasible > 0);
  CHECK(infeasible > 0);
}

TEST_CASE("polytope projection is the nearest feasible point") {
  Eigen::MatrixXd n(3, 2);
  n << 1, 1, -1, 0, 0, -1;
  Eigen::VectorXd c(3);
  c << 1, 2, 2;
  const LogPolytope poly(n, c);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-6, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd u = vec2(coord(rng), coord(rng));
    const Eigen::VectorXd p = poly.project(u);
    CHECK(poly.max_violation(p) <= 1e-9);
    const double d = (u - p).norm();
    for (int i = 0; i <= 60; ++i)
      for (int j = 0; j <= 60; ++j) {
        const Eigen::VectorXd g = vec2(-3 + 0.1 * i, -3 + 0.1 * j);
        if (poly.contains(g, 0.0)) CHECK(d <= (u - g).norm() + 1e-9);
      }
  }
  CHECK(poly.project(vec2(0, 0)).isApprox(vec2(0, 0)));
}

TEST_CASE("reference cost") {
  const Scale<Rational> s(q(3, 10)), o(q(1, 4));
  CHECK(ref_cost(s, o) == q(1, 60));
  CHECK(intrinsic_cost(Scale<Rational>(q(2))) == q(1, 4));
  const ScaleVector<Rational> a{q(1), q(2)}, b{q(2), q(2)}, c{q(1)};
  CHECK(ref_cost_vec(a, b) == q(1, 4));
  CHECK(intrinsic_cost(a) == q(1, 4));
  CHECK_THROWS_AS(ref_cost_vec(a, c), ValidationError);
}

TEST_CASE("reference cost symmetry and permutation equivariance") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> term(1, 50);
  for (int trial = 0; trial < 2000; ++trial) {
    const Rational x = make_rational(term(rng), term(rng)), y = make_rational(term(rng), term(rng));
    CHECK(ratio_cost(x, y) == ratio_cost(y, x));
    // Invariant under a common rescaling.
    const Rational k = make_rational(term(rng), term(rng));
    CHECK(ratio_cost(Rational(k * x), Rational(k * y)) == ratio_cost(x, y));

    Vector<Rational> s(3), o(3);
    for (int i = 0; i < 3; ++i) {
      s[i] = make_rational(term(rng), term(rng));
      o[i] = make_rational(term(rng), term(rng));
    }
    std::array<int, 3> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    Vector<Rational> sp(3), op(3);
    for (int i = 0; i < 3; ++i) {
      sp[i] = s[perm[i]];
      op[i] = o[perm[i]];
    }
    CHECK(ref_cost_vec(ScaleVector<Rational>(s), ScaleVector<Rational>(o)) ==
          ref_cost_vec(ScaleVector<Rational>(sp), ScaleVector<Rational>(op)));
  }
}

TEST_CASE("dictionary variant helpers") {
  Dictionary<double> finite = FiniteDictionary<double>::from_scales({1.0, 2.0});
  Dictionary<double> box = LogBox(vec2(-1, -1), vec2(1, 1));
  CHECK(variant_name(finite) == "finite");
  CHECK(variant_name(box) == "logbox");
  CHECK(dimension(box) == 2);
  CHECK(dimension(finite) == 1);
}
