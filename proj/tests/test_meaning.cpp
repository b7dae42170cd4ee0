#include <doctest.h>

#include <algorithm>
#include <random>

#include "ratioref/meaning.hpp"
#include "ratioref/oracle.hpp"

using namespace ratioref;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

const FiniteDictionary<Rational>& three() {
  static const auto d = FiniteDictionary<Rational>::from_scales({q(1, 4), q(1), q(4)});
  return d;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("worked three-object table") {
  struct Row {
    Rational x;
    std::array<Rational, 3> costs;
    std::string meaning;
    Rational margin;
  };
  const Row rows[] = {
      {q(3, 10), {q(1, 60), q(49, 60), q(1369, 240)}, "o1", q(4, 5)},
      {q(3, 2), {q(25, 12), q(1, 12), q(25, 48)}, "o2", q(7, 16)},
      {q(3), {q(121, 24), q(2, 3), q(1, 24)}, "o3", q(5, 8)},
  };
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < 3; ++i) CHECK(ratio_cost(row.x, three().scale(i)) == row.costs[i]);
    const auto m = mean(Scale<Rational>(row.x), three());
    REQUIRE(m.minimizers.size() == 1);
    CHECK(m.minimizers[0] == row.meaning);
    CHECK(m.optimal_cost == *std::min_element(row.costs.begin(), row.costs.end()));
    REQUIRE(m.margin.is_finite());
    CHECK(m.margin.value == row.margin);
  }
}

TEST_CASE("boundary input yields a two-way tie") {
  const auto m = mean(Scale<Rational>(q(1, 2)), three());
  CHECK(m.minimizers == std::vector<std::string>{"o1", "o2"});
  CHECK(m.optimal_cost == q(1, 4));
  REQUIRE(m.margin.is_finite());
  CHECK(m.margin.value == q(45, 16));

  const auto at2 = mean(Scale<Rational>(q(2)), three());
  CHECK(at2.minimizers == std::vector<std::string>{"o2", "o3"});
}

TEST_CASE("fibers return every item sharing the optimal scale") {
  const auto d = FiniteDictionary<Rational>::from_scales({q(2), q(5), q(2)});
  const auto m = mean(Scale<Rational>(q(2)), d);
  CHECK(sorted(m.minimizers) == std::vector<std::string>{"o1", "o3"});
  CHECK(m.optimal_cost == 0);
  CHECK(m.scales.size() == 1);
}

TEST_CASE("single-scale dictionary has infinite margin") {
  const auto d = FiniteDictionary<Rational>::from_scales({q(7), q(7)});
  const auto m = mean(Scale<Rational>(q(1)), d);
  CHECK(m.minimizers.size() == 2);
  CHECK(m.margin.is_infinite());
}

TEST_CASE("interval meaning is the clamp") {
  const IntervalDictionary<Rational> iv(Scale<Rational>(q(2)), Scale<Rational>(q(5)));
  CHECK(mean(Scale<Rational>(q(1)), iv).scales[0][0] == q(2));
  CHECK(mean(Scale<Rational>(q(3)), iv).scales[0][0] == q(3));
  CHECK(mean(Scale<Rational>(q(3)), iv).optimal_cost == 0);
  CHECK(mean(Scale<Rational>(q(10)), iv).scales[0][0] == q(5));
  CHECK(mean(Scale<Rational>(q(10)), iv).optimal_cost == q(1, 4));
  CHECK(mean(Scale<Rational>(q(10)), iv).minimizers.empty());
  CHECK_FALSE(mean(Scale<Rational>(q(10)), iv).margin.is_finite());
}

TEST_CASE("log-coordinate dictionaries are rejected by the 1-D solver") {
  Eigen::VectorXd lo(1), hi(1);
  lo << -1;
  hi << 1;
  const Dictionary<double> box = LogBox(lo, hi);
  CHECK_THROWS_AS(mean(Scale<double>(1.0), box), ValidationError);
}

TEST_CASE("multi-dimensional finite dictionary needs mean_md") {
  const auto d = FiniteDictionary<Rational>::product({three(), three()});
  CHECK_THROWS_AS(mean(Scale<Rational>(q(1)), d), ValidationError);
}

TEST_CASE("solver agrees with the full scan on random instances") {
  for (std::uint64_t trial = 0; trial < 3000; ++trial) {
    auto g = oracle::InstanceGenerator::for_trial(42, trial);
    const auto d = trial % 2 ? g.dictionary() : g.square_dictionary();
    const Rational s = trial % 3 ? g.rational() : d.scale(static_cast<std::size_t>(g.integer(0, long(d.size()) - 1)));
    const auto got = mean(Scale<Rational>(s), d);
    const auto want = oracle::brute_mean_finite(s, d);
    CHECK(sorted(got.minimizers) == sorted(want.minimizers));
    CHECK(got.optimal_cost == want.optimal_cost);
    CHECK(got.margin.kind == want.margin.kind);
    if (want.margin.is_finite()) CHECK(got.margin.value == want.margin.value);
  }
}

TEST_CASE("float backend agrees with the exact backend off the boundaries") {
  for (std::uint64_t trial = 0; trial < 2000; ++trial) {
    auto g = oracle::InstanceGenerator::for_trial(7, trial);
    const auto d = g.dictionary();
    const Rational s = g.rational();
    std::vector<double> scales;
    for (std::size_t i = 0; i < d.size(); ++i) scales.push_back(to_double(d.scale(i)));
    const auto exact = mean(Scale<Rational>(s), d);
    const auto fl = mean(Scale<double>(to_double(s)), FiniteDictionary<double>::from_scales(scales));
    if (exact.margin.is_finite() && to_double(exact.margin.value) < 1e-9) continue;
    CHECK(sorted(exact.minimizers) == sorted(fl.minimizers));
    CHECK(fl.optimal_cost == doctest::Approx(to_double(exact.optimal_cost)).epsilon(1e-12));
  }
}

TEST_CASE("decision margin of explicit costs") {
  const std::vector<Rational> costs{q(3), q(1), q(2), q(1)};
  const auto m = decision_margin<Rational>(costs);
  REQUIRE(m.is_finite());
  CHECK(m.value == 1);
  const std::vector<Rational> flat{q(1), q(1)};
  CHECK(decision_margin<Rational>(flat).is_infinite());
  CHECK_THROWS_AS(decision_margin<Rational>(std::vector<Rational>{}), ValidationError);
}

TEST_CASE("total-cost meaning") {
  const Dictionary<Rational> d = three();
  const auto m = mean_total(Scale<Rational>(q(1)), d);
  CHECK(m.minimizers == std::vector<std::string>{"o2"});
  CHECK(m.optimal_cost == QuadSurd(q(0)));
  REQUIRE(m.margin.is_finite());
  CHECK(m.margin.value == QuadSurd(q(9, 4)));

  const Dictionary<Rational> iv = IntervalDictionary<Rational>(Scale<Rational>(q(2)), Scale<Rational>(q(5)));
  const auto inside = mean_total(Scale<Rational>(q(9)), iv);
  CHECK(inside.scales[0][0] == QuadSurd(q(3)));
  CHECK(inside.optimal_cost == QuadSurd(q(44, 9)));
  const auto clamped = mean_total(Scale<Rational>(q(2)), iv);
  CHECK(clamped.scales[0][0] == QuadSurd(q(2)));
  CHECK(clamped.optimal_cost == QuadSurd(q(1, 2)));

  // sqrt(3) lies inside [1, 2]: the minimizer is irrational and exact.
  const Dictionary<Rational> unit = IntervalDictionary<Rational>(Scale<Rational>(q(1)), Scale<Rational>(q(2)));
  CHECK(mean_total(Scale<Rational>(q(3)), unit).scales[0][0] == QuadSurd::sqrt(q(3)));
}

TEST_CASE("total-cost meaning beats a grid on an interval") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> logu(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const double lo = std::exp(logu(rng)), hi = lo * std::exp(std::abs(logu(rng)) + 0.01);
    const double s = std::exp(logu(rng) * 2);
    const Dictionary<double> iv = IntervalDictionary<double>(Scale<double>(lo), Scale<double>(hi));
    const auto m = mean_total(Scale<double>(s), iv);
    for (int j = 0; j <= 400; ++j) {
      const double y = lo * std::pow(hi / lo, j / 400.0);
      CHECK(m.optimal_cost <= eval(s) + eval(y) + eval(s / y) + 1e-12);
    }
  }
}

TEST_CASE("symbol predicate") {
  // s = 3/10 means o1 (scale 1/4); J(3/10) = 49/60 < J(1/4) = 9/8.
  CHECK(is_symbol(Scale<Rational>(q(3, 10)), "o1", three()));
  CHECK_FALSE(is_symbol(Scale<Rational>(q(3, 10)), "o2", three()));
  // s = 1/5 means o1 but J(1/5) = 8/5 > 9/8.
  CHECK_FALSE(is_symbol(Scale<Rational>(q(1, 5)), "o1", three()));
  CHECK_THROWS_AS(is_symbol(Scale<Rational>(q(1)), "nope", three()), ValidationError);
}

TEST_CASE("scale windows") {
  const auto low = low_cost_window(Scale<Rational>(q(2)), q(1, 4));
  CHECK(low.lo == QuadSurd(q(1)));
  CHECK(low.hi == QuadSurd(q(4)));
  CHECK_THROWS_AS(low_cost_window(Scale<Rational>(q(4)), q(1, 4)), PreconditionError);

  const auto near = near_balance_window(q(1, 4));
  CHECK(near.lo == QuadSurd(q(1, 4)));
  CHECK(near.hi == QuadSurd(q(4)));

  const auto bb = backbone_window(q(1, 2));
  CHECK(bb.lo == QuadSurd(q(1, 4)));
  CHECK(bb.hi == QuadSurd(q(3)));
  CHECK_THROWS_AS(backbone_window(q(0)), DomainError);
  CHECK_THROWS_AS(backbone_window(q(1)), DomainError);

  const auto fl = backbone_window(0.5);
  CHECK(fl.lo == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(fl.hi == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("backbone window holds every near-balanced meaning") {
  for (const Rational& delta : {q(1, 10), q(1, 4), q(1, 2)}) {
    const auto window = backbone_window(delta);
    for (std::uint64_t trial = 0; trial < 300; ++trial) {
      auto g = oracle::InstanceGenerator::for_trial(delta.get_den().get_ui(), trial);
      const auto d = g.dictionary_with_one();
      const Rational s = 1 - delta + 2 * delta * make_rational(g.integer(1, 999), 1000);
      for (const auto& y : mean(Scale<Rational>(s), d).scales) CHECK(window.contains(QuadSurd(y[0])));
    }
  }
}

TEST_CASE("capacity bound counts items inside the backbone window") {
  const auto d = FiniteDictionary<Rational>::from_scales({q(1, 8), q(1, 4), q(1), q(2), q(3), q(4)});
  CHECK(capacity_bound(d, q(1, 2)) == 4);
  const Dictionary<Rational> iv = IntervalDictionary<Rational>(Scale<Rational>(q(1)), Scale<Rational>(q(2)));
  CHECK_THROWS_AS(capacity_bound(iv, q(1, 2)), ValidationError);
}
