#pragma once

// Deliberately naive reference implementations. They share nothing with the
// solvers except penalty evaluation.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ratioref/composition.hpp"
#include "ratioref/meaning.hpp"
#include "ratioref/multidim.hpp"

namespace ratioref::oracle {

/// Full scan of sum_k J(s_k / y_k) over every item, with exact tie set and margin.
template <class S>
MeaningResult<S> brute_mean_finite(const Vector<S>& s, const FiniteDictionary<S>& dict, const PenaltyParam& p = {},
                                   const Tolerance& tol = {}) {
  if (s.size() != dict.dim()) throw ValidationError("oracle: dimension mismatch");
  std::vector<S> costs;
  for (const auto& item : dict.items()) {
    S c(0);
    for (Eigen::Index k = 0; k < s.size(); ++k) c += eval(S(s[k] / item.scale[k]), p);
    costs.push_back(c);
  }
  S best = costs[0];
  for (const S& c : costs)
    if (c < best) best = c;

  MeaningResult<S> out;
  out.optimal_cost = best;
  bool have_rival = false;
  S rival(0);
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (ties(costs[i], best, tol)) {
      out.minimizers.push_back(dict.items()[i].id);
      out.scales.push_back(dict.items()[i].scale);
    } else if (!have_rival || costs[i] < rival) {
      rival = costs[i];
      have_rival = true;
    }
  }
  out.margin = have_rival ? Margin<S>::finite(S(rival - best)) : Margin<S>::infinite();
  return out;
}

template <class S>
MeaningResult<S> brute_mean_finite(const S& s, const FiniteDictionary<S>& dict, const PenaltyParam& p = {},
                                   const Tolerance& tol = {}) {
  Vector<S> v(1);
  v[0] = s;
  return brute_mean_finite(v, dict, p, tol);
}

/// Full scan of J(a / b) + J(b / c) over a finite mediator set.
template <class S>
MediationPlan<S> brute_mediate(const S& a, const S& c, const FiniteDictionary<S>& mediators, const PenaltyParam& p = {},
                               const Tolerance& tol = {}) {
  mediators.require_one_dimensional();
  std::vector<S> totals;
  for (std::size_t i = 0; i < mediators.size(); ++i)
    totals.push_back(eval(S(a / mediators.scale(i)), p) + eval(S(mediators.scale(i) / c), p));
  S best = totals[0];
  for (const S& t : totals)
    if (t < best) best = t;

  MediationPlan<S> plan;
  plan.source = a;
  plan.target = c;
  plan.balance_point = root_sqrt(S(a * c));
  std::vector<S> chosen;
  for (std::size_t i = 0; i < totals.size(); ++i) {
    if (!ties(totals[i], best, tol)) continue;
    plan.chosen_ids.push_back(mediators.items()[i].id);
    bool seen = false;
    for (const S& b : chosen) seen = seen || b == mediators.scale(i);
    if (!seen) chosen.push_back(mediators.scale(i));
  }
  std::sort(chosen.begin(), chosen.end());
  for (const S& b : chosen) plan.chosen.push_back(Root<S>(b));
  plan.hop_costs = {Root<S>(eval(S(a / chosen[0]), p)), Root<S>(eval(S(chosen[0] / c), p))};
  plan.total_cost = Root<S>(best);
  plan.direct_cost = eval(S(a / c), p);
  plan.gain = Root<S>(S(plan.direct_cost - best));
  return plan;
}

/// Best point of a log-spaced grid of `steps` points on [lo, hi].
double grid_mean_continuous(double s, double lo, double hi, int steps, const PenaltyParam& p = {});

/// Grid search for argmin G_t over a 2-D log-polytope inside [-radius, radius]^2.
/// Scans a 2-D grid of spacing `coarse` and a 1-D grid along every constraint
/// line (a minimizer off the interior lies on one), each refined by repeated
/// 10x zooms around its best feasible point down to spacing `fine`, and the
/// feasible vertices.
Eigen::Vector2d grid_mean_polytope(const Eigen::Vector2d& t, const LogPolytope& poly, double radius,
                                   double coarse = 0.02, double fine = 2e-6, const PenaltyParam& p = {});

/// Reproducible random instances: rational scales p/q with p, q in [1, 64].
class InstanceGenerator {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0x5EED;

  explicit InstanceGenerator(std::uint64_t seed = kDefaultSeed) : rng_(seed) {}
  /// Generator for trial `index` of a suite seeded with `seed`.
  static InstanceGenerator for_trial(std::uint64_t seed, std::uint64_t index);

  Rational rational(long max_term = 64);
  /// 1-D dictionary with 1..max_size items (duplicates allowed).
  FiniteDictionary<Rational> dictionary(std::size_t max_size = 20, long max_term = 64);
  /// Same, with an item of scale 1 inserted at a random position.
  FiniteDictionary<Rational> dictionary_with_one(std::size_t max_size = 20, long max_term = 64);
  /// 1-D dictionary whose scales are rational squares, so every geometric
  /// mean of two scales is rational and boundary ties are reachable.
  FiniteDictionary<Rational> square_dictionary(std::size_t max_size = 20, long max_term = 12);
  double uniform(double lo, double hi);
  long integer(long lo, long hi);
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct CheckResult {
  std::string name;
  long trials = 0;
  long failures = 0;
  std::string first_failure;
};

struct VerificationReport {
  std::uint64_t seed = InstanceGenerator::kDefaultSeed;
  std::vector<CheckResult> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (c.failures != 0) return false;
    return true;
  }
};

/// Runs the solver-vs-oracle suite. `scale` multiplies the default trial counts.
VerificationReport run_verification(std::uint64_t seed = InstanceGenerator::kDefaultSeed, double scale = 1.0);

}  // namespace ratioref::oracle
