#include <doctest.h>

#include <cmath>
#include <random>

#include "ratioref/multidim.hpp"
#include "ratioref/oracle.hpp"

using namespace ratioref;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

// Bounded random polytope: box |u_i| <= 3 plus `extra` halfspaces through a
// feasible anchor point with nonnegative slack.
LogPolytope random_polytope(std::mt19937_64& rng, int extra) {
  std::uniform_real_distribution<double> coef(-1, 1), anchor(-2, 2), slack(0, 1);
  Eigen::MatrixXd n(4 + extra, 2);
  Eigen::VectorXd c(4 + extra);
  n.topRows(4) << 1, 0, -1, 0, 0, 1, 0, -1;
  c.head(4).setConstant(3);
  const Eigen::VectorXd a = vec2(anchor(rng), anchor(rng));
  for (int i = 0; i < extra; ++i) {
    n.row(4 + i) << coef(rng), coef(rng);
    c[4 + i] = n.row(4 + i).dot(a) + slack(rng);
  }
  return LogPolytope(n, c);
}

}  // namespace

TEST_CASE("finite d-D meaning is a full scan") {
  const auto d1 = FiniteDictionary<Rational>::from_scales({q(1, 4), q(1), q(4)});
  const auto prod = FiniteDictionary<Rational>::product({d1, d1});
  const auto m = mean_md(ScaleVector<Rational>{q(3, 10), q(3)}, prod);
  CHECK(m.minimizers == std::vector<std::string>{"(o1,o3)"});
  CHECK(m.optimal_cost == q(1, 60) + q(1, 24));
  REQUIRE(m.margin.is_finite());
  CHECK(m.margin.value == q(5, 8));
  CHECK_THROWS_AS(mean_md(ScaleVector<Rational>{q(1)}, prod), ValidationError);
}

TEST_CASE("coordinatewise factorization") {
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    auto g = oracle::InstanceGenerator::for_trial(83, trial);
    const std::vector<FiniteDictionary<Rational>> factors{g.square_dictionary(6), g.dictionary(6), g.dictionary(4)};
    const ScaleVector<Rational> s{g.rational(), g.rational(), g.rational()};
    CHECK(coordinatewise_equiv_check(s, factors));
  }
}

TEST_CASE("log-box meaning is the coordinatewise clamp") {
  const LogBox box(vec2(-1, -1), vec2(1, 1));
  const auto m = mean_md(ScaleVector<double>{std::exp(2.0), std::exp(0.5)}, box);
  REQUIRE(m.scales.size() == 1);
  CHECK(std::log(m.scales[0][0]) == doctest::Approx(1.0));
  CHECK(std::log(m.scales[0][1]) == doctest::Approx(0.5));
  CHECK(m.optimal_cost == doctest::Approx(std::cosh(1.0) - 1).epsilon(1e-14));
  CHECK(m.minimizers.empty());
}

TEST_CASE("log-box agrees with 1-D interval composition exactly") {
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    const double l0 = u(rng), l1 = u(rng);
    const Eigen::VectorXd lo = vec2(std::min(l0, l1), std::min(l0, l1) - 0.5);
    const Eigen::VectorXd hi = vec2(std::max(l0, l1), std::max(l0, l1) + 0.5);
    const LogBox box(lo, hi);
    const ScaleVector<double> s{std::exp(u(rng) * 2), std::exp(u(rng) * 2)};
    const auto joint = mean_md(s, box);
    double cost = 0;
    for (Eigen::Index k = 0; k < 2; ++k) {
      const double t = std::log(s[k]);
      const double clamped = std::clamp(t, lo[k], hi[k]);
      CHECK(std::log(joint.scales[0][k]) == doctest::Approx(clamped).epsilon(1e-15));
      cost += log_form(t - clamped);
    }
    CHECK(joint.optimal_cost == cost);
  }
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> coord(-3, 3);
  for (double a : {0.5, 1.0, 2.0}) {
    const PenaltyParam p(a);
    for (int trial = 0; trial < 300; ++trial) {
      const LogPoint t = vec2(coord(rng), coord(rng)), u = vec2(coord(rng), coord(rng));
      const LogPoint g = log_gradient(t, u, p);
      for (Eigen::Index i = 0; i < 2; ++i) {
        const double h = 1e-5;
        LogPoint up = u, down = u;
        up[i] += h;
        down[i] -= h;
        const double fd = (log_objective(t, up, p) - log_objective(t, down, p)) / (2 * h);
        CHECK(std::abs(fd - g[i]) <= 1e-6 * std::max(1.0, std::abs(g[i])));
      }
    }
  }
}

TEST_CASE("polytope descent matches the grid oracle") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> coord(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const LogPolytope poly = random_polytope(rng, 3);
    const Eigen::Vector2d t(coord(rng), coord(rng));
    const auto sol = solve_log_polytope(t, poly);
    CHECK(sol.converged);
    CHECK(poly.contains(sol.u));
    const Eigen::Vector2d grid = oracle::grid_mean_polytope(t, poly, 3.0);
    CHECK((sol.u - grid).lpNorm<Eigen::Infinity>() <= 2e-3);
    CHECK(std::abs(sol.cost - log_objective(t, grid)) <= 1e-5);
  }
}

TEST_CASE("polytope minimizer does not depend on the start") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> coord(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const LogPolytope poly = random_polytope(rng, 2);
    const LogPoint t = vec2(coord(rng), coord(rng));
    const auto a = solve_log_polytope(t, poly, {}, vec2(coord(rng), coord(rng)));
    const auto b = solve_log_polytope(t, poly, {}, vec2(coord(rng), coord(rng)));
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK((a.u - b.u).lpNorm<Eigen::Infinity>() <= 1e-7);
  }
}

TEST_CASE("interior target is its own minimizer") {
  Eigen::MatrixXd n(1, 2);
  n << 1, 1;
  Eigen::VectorXd c(1);
  c << 1;
  const LogPolytope half(n, c);
  const auto sol = solve_log_polytope(vec2(-1, 0.5), half);
  CHECK(sol.converged);
  CHECK(sol.cost == doctest::Approx(0).epsilon(1e-12));
  CHECK(sol.iterations == 0);

  // Projection onto u1 + u2 <= 1 from (2, 2) lands at (1/2, 1/2) by symmetry.
  const auto sym = solve_log_polytope(vec2(2, 2), half);
  CHECK(sym.u[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sym.u[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("minimizer moves continuously with the target") {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> coord(-4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const Dictionary<double> poly = random_polytope(rng, 3);
    const LogPoint t = vec2(coord(rng), coord(rng));
    const double small = continuity_probe(t, poly, 1e-3);
    CHECK(small <= 1e-3 * 10);
    const double smaller = continuity_probe(t, poly, 1e-5);
    CHECK(smaller <= 1e-5 * 10 + 1e-8);
  }
  const Dictionary<double> box = LogBox(vec2(-1, -1), vec2(1, 1));
  CHECK(continuity_probe(vec2(0, 5), box, 0.1) == doctest::Approx(0.1));
  CHECK_THROWS_AS(continuity_probe(vec2(0, 0), Dictionary<double>(FiniteDictionary<double>::from_scales({1.0})), 0.1),
                  ValidationError);
}

TEST_CASE("dictionary dispatch") {
  const Dictionary<double> box = LogBox(vec2(-1, -1), vec2(1, 1));
  CHECK(mean_md(ScaleVector<double>{1.0, 1.0}, box).optimal_cost == 0);
  CHECK_THROWS_AS(mean_md(ScaleVector<double>{1.0}, box), ValidationError);
  const Dictionary<Rational> iv = IntervalDictionary<Rational>(Scale<Rational>(q(2)), Scale<Rational>(q(5)));
  CHECK(mean_md(ScaleVector<Rational>{q(10)}, iv).scales[0][0] == q(5));
}
