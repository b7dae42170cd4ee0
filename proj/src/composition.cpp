#include "ratioref/composition.hpp"

#include <algorithm>
#include <random>

namespace ratioref {

bool chain_optimality_check(double a, double c, unsigned long k, int trials, std::uint64_t seed,
                            const PenaltyParam& p) {
  if (k == 0) throw DomainError("chain needs k >= 1");
  if (!(a > 0 && c > 0)) throw DomainError("chain needs positive scales");
  const double optimum = chain(a, c, k, p).total_cost;
  if (k == 1) return true;

  const double t = std::log(a / c);
  const double spread = std::max(std::abs(t) / static_cast<double>(k), 1.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> width(1e-6, 2.0);
  std::vector<double> increments(k);
  for (int trial = 0; trial < trials; ++trial) {
    const double w = spread * width(rng);
    double sum = 0;
    for (auto& u : increments) {
      u = w * noise(rng);
      sum += u;
    }
    // Shift so the increments add up to t exactly (up to rounding).
    const double shift = (t - sum) / static_cast<double>(k);
    double total = 0;
    for (auto& u : increments) total += log_form(u + shift, p);
    if (total < optimum - 1e-12 * std::max(1.0, optimum)) return false;
  }
  return true;
}

}  // namespace ratioref
