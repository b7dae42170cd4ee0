#include <doctest.h>

#include "ratioref/oracle.hpp"

using namespace ratioref;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

}  // namespace

TEST_CASE("brute-force meaning on the three-object dictionary") {
  const auto d = FiniteDictionary<Rational>::from_scales({q(1, 4), q(1), q(4)});
  const auto m = oracle::brute_mean_finite(q(3, 10), d);
  CHECK(m.minimizers == std::vector<std::string>{"o1"});
  CHECK(m.optimal_cost == q(1, 60));
  CHECK(m.margin.value == q(4, 5));
  const auto tie = oracle::brute_mean_finite(q(1, 2), d);
  CHECK(tie.minimizers == std::vector<std::string>{"o1", "o2"});
  CHECK(tie.margin.value == q(45, 16));
}

TEST_CASE("brute-force mediation") {
  const auto d = FiniteDictionary<Rational>::from_scales({q(3)});
  const auto plan = oracle::brute_mediate(q(5), q(5), d);
  CHECK(plan.total_cost == QuadSurd(q(4, 15)));
  CHECK(plan.chosen_ids == std::vector<std::string>{"o1"});
}

TEST_CASE("1-D grid oracle lands next to the clamp") {
  CHECK(oracle::grid_mean_continuous(10, 2, 5, 1001) == doctest::Approx(5));
  CHECK(oracle::grid_mean_continuous(0.1, 2, 5, 1001) == doctest::Approx(2));
  CHECK(oracle::grid_mean_continuous(3, 2, 5, 100001) == doctest::Approx(3).epsilon(1e-4));
  CHECK_THROWS_AS(oracle::grid_mean_continuous(1, 2, 1, 10), DomainError);
  CHECK_THROWS_AS(oracle::grid_mean_continuous(1, 1, 2, 1), DomainError);
}

TEST_CASE("generators are reproducible") {
  auto a = oracle::InstanceGenerator::for_trial(5, 9), b = oracle::InstanceGenerator::for_trial(5, 9);
  for (int i = 0; i < 20; ++i) CHECK(a.rational() == b.rational());
  auto c = oracle::InstanceGenerator::for_trial(5, 10);
  bool differs = false;
  for (int i = 0; i < 20; ++i) differs = differs || a.rational() != c.rational();
  CHECK(differs);
}

TEST_CASE("generated dictionaries respect their contracts") {
  for (std::uint64_t trial = 0; trial < 500; ++trial) {
    auto g = oracle::InstanceGenerator::for_trial(1, trial);
    const auto d = g.dictionary(20);
    CHECK(d.size() >= 1);
    CHECK(d.size() <= 20);
    const auto one = g.dictionary_with_one();
    CHECK(one.find("o1").has_value());
    bool has_one = false;
    for (std::size_t i = 0; i < one.size(); ++i) has_one = has_one || one.scale(i) == 1;
    CHECK(has_one);
    const auto sq = g.square_dictionary();
    Rational root;
    for (std::size_t i = 0; i < sq.size(); ++i) CHECK(exact_sqrt(sq.scale(i), root));
  }
}

TEST_CASE("verification suite passes at reduced scale") {
  const auto report = oracle::run_verification(oracle::InstanceGenerator::kDefaultSeed, 0.05);
  CHECK(report.checks.size() == 8);
  for (const auto& c : report.checks) {
    INFO(c.name << ": " << c.first_failure);
    CHECK(c.failures == 0);
    CHECK(c.trials > 0);
  }
  CHECK(report.passed());
}
