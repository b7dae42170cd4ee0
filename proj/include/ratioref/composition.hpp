#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ratioref/meaning.hpp"

namespace ratioref {

/// Binary product of reference structures: the summed cost over d1 x d2
/// factorizes, so its argmin is the Cartesian product of the two meanings.
template <class S>
std::pair<MeaningResult<S>, MeaningResult<S>> product_mean(const Scale<S>& s1, const Scale<S>& s2,
                                                           const Dictionary<S>& d1, const Dictionary<S>& d2,
                                                           const PenaltyParam& p = {}, const Tolerance& tol = {}) {
  return {mean(s1, d1, p, tol), mean(s2, d2, p, tol)};
}

/// Id pairs of the product meaning set.
template <class V>
std::vector<std::pair<std::string, std::string>> product_meaning_set(const MeaningResult<V>& first,
                                                                     const MeaningResult<V>& second) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& a : first.minimizers)
    for (const auto& b : second.minimizers) out.emplace_back(a, b);
  return out;
}

template <class S>
struct MediationPlan {
  S source{};
  S target{};
  /// b_geo = sqrt(source * target).
  Root<S> balance_point{};
  /// Every optimal mediator scale, ascending.
  std::vector<Root<S>> chosen;
  /// Ids of optimal mediators (finite mediator sets only).
  std::vector<std::string> chosen_ids;
  /// [J(a / b), J(b / c)] for the first chosen mediator.
  std::vector<Root<S>> hop_costs;
  Root<S> total_cost{};
  S direct_cost{};
  Root<S> gain{};
};

/// Optimal two-hop mediation a -> b -> c over a constrained mediator set.
///
/// J(a/b) + J(b/c) is increasing in |log b - log b_geo|, so finite sets are
/// ranked by max(r, 1/r) with r = b^2 / (ac) and intervals clamp b_geo.
template <class S>
MediationPlan<S> mediate(const Scale<S>& a, const Scale<S>& c, const Dictionary<S>& mediators,
                         const PenaltyParam& p = {}, const Tolerance& tol = {}) {
  using V = Root<S>;
  MediationPlan<S> plan;
  plan.source = a.value();
  plan.target = c.value();
  const S ac = a.value() * c.value();
  plan.balance_point = root_sqrt(ac);

  if (const auto* f = std::get_if<FiniteDictionary<S>>(&mediators)) {
    f->require_one_dimensional();
    auto key = [&](const S& b) {
      const S r = b * b / ac;
      return r < S(1) ? S(S(1) / r) : r;
    };
    S best = key(f->scale(0));
    for (std::size_t i = 1; i < f->size(); ++i) best = std::min(best, key(f->scale(i)));
    std::vector<S> scales;
    for (std::size_t i = 0; i < f->size(); ++i) {
      if (!ties(key(f->scale(i)), best, tol)) continue;
      plan.chosen_ids.push_back(f->items()[i].id);
      if (std::find(scales.begin(), scales.end(), f->scale(i)) == scales.end()) scales.push_back(f->scale(i));
    }
    std::sort(scales.begin(), scales.end());
    for (const S& b : scales) plan.chosen.push_back(V(b));
  } else if (const auto* iv = std::get_if<IntervalDictionary<S>>(&mediators)) {
    plan.chosen.push_back(detail::clamp_scale(plan.balance_point, V(iv->lo()), V(iv->hi())));
  } else {
    throw ValidationError("mediator sets must be finite or interval dictionaries");
  }

  const V& b = plan.chosen.front();
  plan.hop_costs = {ratio_cost(V(a.value()), b, p), ratio_cost(b, V(c.value()), p)};
  plan.total_cost = plan.hop_costs[0] + plan.hop_costs[1];
  plan.direct_cost = ratio_cost(a.value(), c.value(), p);
  plan.gain = V(plan.direct_cost) - plan.total_cost;
  return plan;
}

/// Product form 2 cosh(a t / 2) cosh(a (log b - log b_geo)) - 2 of the two-hop cost.
inline double mediation_closed_form(double a, double c, double b, const PenaltyParam& p = {}) {
  if (!(a > 0 && c > 0 && b > 0)) throw DomainError("mediation needs positive scales");
  const double t = std::log(a / c);
  const double offset = std::log(b) - 0.5 * (std::log(a) + std::log(c));
  return 2.0 * std::cosh(0.5 * p.a() * t) * std::cosh(p.a() * offset) - 2.0;
}

/// J(x) - 2 J(sqrt x): saving from routing x through its balance point.
template <class S>
Root<S> mediation_gain(const S& x, const PenaltyParam& p = {}) {
  if (!is_positive(x)) throw DomainError("mediation gain needs x > 0");
  return Root<S>(eval(x, p)) - Root<S>(2L) * eval(root_sqrt(x), p);
}

template <class V>
struct ChainPlan {
  unsigned long steps = 1;
  /// Common hop ratio e^{t/k}.
  V hop_ratio{};
  /// Intermediate scales b_1, ..., b_{k-1}.
  std::vector<V> ratios;
  V per_step_cost{};
  V total_cost{};
};

/// Equal-log-increment k-step chain from a to c: total k (cosh(a t / k) - 1).
inline ChainPlan<double> chain(double a, double c, unsigned long k, const PenaltyParam& p = {}) {
  if (k == 0) throw DomainError("chain needs k >= 1");
  if (!(a > 0 && c > 0)) throw DomainError("chain needs positive scales");
  const double t = std::log(a / c);
  const double step = t / static_cast<double>(k);
  ChainPlan<double> plan;
  plan.steps = k;
  plan.hop_ratio = std::exp(step);
  for (unsigned long j = 1; j < k; ++j) plan.ratios.push_back(a * std::exp(-static_cast<double>(j) * step));
  plan.per_step_cost = log_form(step, p);
  plan.total_cost = static_cast<double>(k) * plan.per_step_cost;
  return plan;
}

/// Exact chain when (a / c)^{1/k} is rational and the exponent integral.
inline std::optional<ChainPlan<Rational>> chain_exact(const Rational& a, const Rational& c, unsigned long k,
                                                      const PenaltyParam& p = {}) {
  if (k == 0) throw DomainError("chain needs k >= 1");
  if (sgn(a) <= 0 || sgn(c) <= 0) throw DomainError("chain needs positive scales");
  if (!p.integer_exponent()) return std::nullopt;
  Rational r;
  if (!exact_root(Rational(a / c), k, r)) return std::nullopt;
  ChainPlan<Rational> plan;
  plan.steps = k;
  plan.hop_ratio = r;
  Rational b = a;
  for (unsigned long j = 1; j < k; ++j) {
    b /= r;
    plan.ratios.push_back(b);
  }
  plan.per_step_cost = eval(r, p);
  plan.total_cost = Rational(k) * plan.per_step_cost;
  return plan;
}

/// Randomized check that no k-step chain with the same total log-ratio beats
/// equal increments. Returns false on the first violation beyond 1e-12.
bool chain_optimality_check(double a, double c, unsigned long k, int trials, std::uint64_t seed = 0x5EED,
                            const PenaltyParam& p = {});

}  // namespace ratioref
