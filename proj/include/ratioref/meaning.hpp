#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ratioref/penalty.hpp"
#include "ratioref/spaces.hpp"
#include "ratioref/surd.hpp"

namespace ratioref {

/// Decision margin: gap between the optimal cost and the best non-optimal
/// cost. Infinite when every candidate is optimal; not applicable for
/// continuous dictionaries.
template <class V>
struct Margin {
  enum class Kind { Finite, Infinite, NotApplicable };

  Kind kind = Kind::NotApplicable;
  V value{};

  static Margin finite(V v) { return {Kind::Finite, std::move(v)}; }
  static Margin infinite() { return {Kind::Infinite, V{}}; }
  static Margin not_applicable() { return {Kind::NotApplicable, V{}}; }

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_infinite() const { return kind == Kind::Infinite; }
};

template <class V>
struct MeaningResult {
  /// Object ids for finite dictionaries; empty for continuous ones.
  std::vector<std::string> minimizers;
  /// Scale (vector) of each minimizer, or the single continuous minimizer.
  std::vector<Vector<V>> scales;
  V optimal_cost{};
  Margin<V> margin;
};

/// Closed window [lo, hi] of admissible object scales.
template <class V>
struct ScaleWindow {
  V lo;
  V hi;
  bool contains(const V& x) const { return lo <= x && x <= hi; }
};

/// Margin of an explicit cost list: min over non-optimal entries of
/// (cost - optimum), +inf when all entries tie.
template <class V>
Margin<V> decision_margin(std::span<const V> costs, const Tolerance& tol = {}) {
  if (costs.empty()) throw ValidationError("decision margin of an empty cost list");
  V best = *std::min_element(costs.begin(), costs.end());
  bool found = false;
  V gap{};
  for (const V& c : costs) {
    if (ties(c, best, tol)) continue;
    V d = c - best;
    if (!found || d < gap) gap = d;
    found = true;
  }
  return found ? Margin<V>::finite(gap) : Margin<V>::infinite();
}

namespace detail {

template <class S>
struct Fiber {
  S scale;
  std::vector<std::size_t> items;
};

/// Distinct scales of a 1-D dictionary in increasing order, with the items
/// carrying each scale.
template <class S>
std::vector<Fiber<S>> sorted_fibers(const FiniteDictionary<S>& dict) {
  std::vector<std::size_t> order(dict.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return dict.scale(i) < dict.scale(j); });
  std::vector<Fiber<S>> fibers;
  for (std::size_t idx : order) {
    if (fibers.empty() || fibers.back().scale != dict.scale(idx))
      fibers.push_back({dict.scale(idx), {}});
    fibers.back().items.push_back(idx);
  }
  return fibers;
}

template <class S>
Vector<S> as_vector(const S& x) {
  Vector<S> v(1);
  v[0] = x;
  return v;
}

template <class S>
S clamp_scale(const S& x, const S& lo, const S& hi) {
  if (x < lo) return lo;
  if (hi < x) return hi;
  return x;
}

}  // namespace detail

/// Meaning set of `s` over a finite 1-D dictionary.
///
/// Costs J(x / y) are unimodal along the sorted scales and adjacent scales
/// tie exactly at x^2 = y_i y_{i+1}, so the optimal fiber is located by
/// binary search on those products; the margin only needs the two fibers
/// adjacent to the optimal block.
template <class S>
MeaningResult<S> mean(const Scale<S>& s, const FiniteDictionary<S>& dict, const PenaltyParam& p = {},
                      const Tolerance& tol = {}) {
  dict.require_one_dimensional();
  const auto fibers = detail::sorted_fibers(dict);
  const std::size_t n = fibers.size();
  const S& x = s.value();
  const S x2 = x * x;

  std::size_t lo = 0, hi = n - 1;
  while (lo < hi) {  // first boundary i with x^2 <= y_i y_{i+1}
    const std::size_t mid = lo + (hi - lo) / 2;
    if (x2 > S(fibers[mid].scale * fibers[mid + 1].scale))
      lo = mid + 1;
    else
      hi = mid;
  }
  const std::size_t cell = lo;

  auto cost = [&](std::size_t i) { return ratio_cost(x, fibers[i].scale, p); };
  std::size_t first = cell > 0 ? cell - 1 : cell;
  std::size_t last = std::min(cell + 1, n - 1);
  std::size_t arg = cell;
  S best = cost(cell);
  for (std::size_t i = first; i <= last; ++i) {
    S c = cost(i);
    if (c < best) {
      best = c;
      arg = i;
    }
  }
  first = arg;
  last = arg;
  while (first > 0 && ties(cost(first - 1), best, tol)) --first;
  while (last + 1 < n && ties(cost(last + 1), best, tol)) ++last;

  MeaningResult<S> result;
  result.optimal_cost = best;
  for (std::size_t f = first; f <= last; ++f) {
    for (std::size_t item : fibers[f].items) result.minimizers.push_back(dict.items()[item].id);
    result.scales.push_back(detail::as_vector(fibers[f].scale));
  }
  std::vector<S> rivals;
  if (first > 0) rivals.push_back(cost(first - 1));
  if (last + 1 < n) rivals.push_back(cost(last + 1));
  if (rivals.empty())
    result.margin = Margin<S>::infinite();
  else
    result.margin = Margin<S>::finite(S(*std::min_element(rivals.begin(), rivals.end()) - best));
  return result;
}

/// Unique meaning over a closed interval: the projection of s onto [lo, hi].
template <class S>
MeaningResult<S> mean(const Scale<S>& s, const IntervalDictionary<S>& dict, const PenaltyParam& p = {},
                      const Tolerance& = {}) {
  const S y = detail::clamp_scale(s.value(), dict.lo(), dict.hi());
  MeaningResult<S> result;
  result.scales.push_back(detail::as_vector(y));
  result.optimal_cost = ratio_cost(s.value(), y, p);
  result.margin = Margin<S>::not_applicable();
  return result;
}

template <class S>
MeaningResult<S> mean(const Scale<S>& s, const Dictionary<S>& dict, const PenaltyParam& p = {},
                      const Tolerance& tol = {}) {
  if (const auto* f = std::get_if<FiniteDictionary<S>>(&dict)) return mean(s, *f, p, tol);
  if (const auto* i = std::get_if<IntervalDictionary<S>>(&dict)) return mean(s, *i, p, tol);
  throw ValidationError("log-coordinate dictionaries are solved by mean_md");
}

/// Minimizers of the total cost J(s) + J(y) + J(s / y).
template <class S>
MeaningResult<Root<S>> mean_total(const Scale<S>& s, const Dictionary<S>& dict, const PenaltyParam& p = {},
                                  const Tolerance& tol = {}) {
  using V = Root<S>;
  const S js = eval(s.value(), p);
  MeaningResult<V> result;
  if (const auto* f = std::get_if<FiniteDictionary<S>>(&dict)) {
    f->require_one_dimensional();
    std::vector<V> totals;
    totals.reserve(f->size());
    for (std::size_t i = 0; i < f->size(); ++i)
      totals.push_back(V(S(js + eval(f->scale(i), p) + ratio_cost(s.value(), f->scale(i), p))));
    const V best = *std::min_element(totals.begin(), totals.end());
    for (std::size_t i = 0; i < f->size(); ++i)
      if (ties(totals[i], best, tol)) {
        result.minimizers.push_back(f->items()[i].id);
        result.scales.push_back(detail::as_vector(V(f->scale(i))));
      }
    result.optimal_cost = best;
    result.margin = decision_margin<V>(totals, tol);
    return result;
  }
  if (const auto* iv = std::get_if<IntervalDictionary<S>>(&dict)) {
    // Convex in log y with stationary point y = sqrt(s).
    const V y = detail::clamp_scale(root_sqrt(s.value()), V(iv->lo()), V(iv->hi()));
    result.scales.push_back(detail::as_vector(y));
    result.optimal_cost = V(js) + eval(y, p) + ratio_cost(V(s.value()), y, p);
    result.margin = Margin<V>::not_applicable();
    return result;
  }
  throw ValidationError("mean_total supports finite and interval dictionaries");
}

/// Grounding predicate: o is a meaning of s and J(s) < J(o) strictly.
template <class S>
bool is_symbol(const Scale<S>& s, const std::string& object_id, const FiniteDictionary<S>& dict,
               const PenaltyParam& p = {}, const Tolerance& tol = {}) {
  dict.require_one_dimensional();
  const auto idx = dict.find(object_id);
  if (!idx) throw ValidationError("unknown object id '" + object_id + "'");
  const auto m = mean(s, dict, p, tol);
  if (std::find(m.minimizers.begin(), m.minimizers.end(), object_id) == m.minimizers.end()) return false;
  return eval(s.value(), p) < eval(dict.scale(*idx), p);
}

/// Object-scale window [s / b_eps, s / a_eps] holding every meaning of s over
/// any dictionary that contains scale 1, provided J(s) <= eps.
template <class S>
ScaleWindow<Root<S>> low_cost_window(const Scale<S>& s, const S& eps, const PenaltyParam& p = {}) {
  if (sign(eps) < 0) throw DomainError("eps must be nonnegative");
  if (eps < eval(s.value(), p))
    throw PreconditionError("low-cost window needs J(s) <= eps, but J(s) = " + to_string(eval(s.value(), p)));
  const auto sub = sublevel(eps, p);
  const Root<S> x(s.value());
  return {x * sub.lo, x * sub.hi};
}

/// [1 / b_eps^2, b_eps^2].
template <class S>
ScaleWindow<Root<S>> near_balance_window(const S& eps, const PenaltyParam& p = {}) {
  const auto sub = sublevel(eps, p);
  return {sub.lo * sub.lo, sub.hi * sub.hi};
}

/// Window I_delta = [(1 - delta) / b, (1 + delta) / a] at eps = J(1 - delta).
template <class S>
ScaleWindow<Root<S>> backbone_window(const S& delta, const PenaltyParam& p = {}) {
  if (!(sign(delta) > 0 && delta < S(1))) throw DomainError("backbone window needs 0 < delta < 1");
  const S below = S(1) - delta;
  const S above = S(1) + delta;
  const auto sub = sublevel(eval(below, p), p);
  return {Root<S>(below) * sub.lo, Root<S>(above) * sub.hi};
}

/// Number of dictionary items (not distinct scales) inside I_delta.
template <class S>
std::size_t capacity_bound(const FiniteDictionary<S>& dict, const S& delta, const PenaltyParam& p = {}) {
  dict.require_one_dimensional();
  const auto window = backbone_window(delta, p);
  std::size_t count = 0;
  for (std::size_t i = 0; i < dict.size(); ++i)
    if (window.contains(Root<S>(dict.scale(i)))) ++count;
  return count;
}

template <class S>
std::size_t capacity_bound(const Dictionary<S>& dict, const S& delta, const PenaltyParam& p = {}) {
  const auto* f = std::get_if<FiniteDictionary<S>>(&dict);
  if (!f) throw ValidationError("capacity bound needs a finite dictionary, got " + variant_name(dict));
  return capacity_bound(*f, delta, p);
}

}  // namespace ratioref
