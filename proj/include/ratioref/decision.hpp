#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ratioref/meaning.hpp"

namespace ratioref {

/// Sorted distinct scales y_0 < ... < y_{N-1} of a finite 1-D dictionary.
/// Boundary i separates cells i and i+1 and sits at sqrt(y_i y_{i+1}); it is
/// stored through its square so the rational backend never rounds it.
template <class S>
class BoundarySet {
 public:
  explicit BoundarySet(FiniteDictionary<S> dict) : dict_(std::move(dict)) {
    dict_.require_one_dimensional();
    order_.resize(dict_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return dict_.scale(a) < dict_.scale(b); });
    for (std::size_t i = 1; i < order_.size(); ++i)
      if (dict_.scale(order_[i - 1]) == dict_.scale(order_[i]))
        throw ValidationError("decision boundaries need pairwise distinct scales; '" + dict_.items()[order_[i - 1]].id +
                              "' and '" + dict_.items()[order_[i]].id + "' coincide");
  }

  /// Number of cells N.
  std::size_t size() const { return order_.size(); }
  std::size_t boundary_count() const { return order_.size() - 1; }

  const S& scale(std::size_t cell) const { return dict_.scale(order_[cell]); }
  const std::string& id(std::size_t cell) const { return dict_.items()[order_[cell]].id; }

  /// m_i^2 = y_i y_{i+1}.
  S boundary_squared(std::size_t i) const { return S(scale(i) * scale(i + 1)); }
  /// m_i = sqrt(y_i y_{i+1}), exact surd on the rational backend.
  Root<S> boundary(std::size_t i) const { return root_sqrt(boundary_squared(i)); }

  const FiniteDictionary<S>& dictionary() const { return dict_; }

 private:
  FiniteDictionary<S> dict_;
  std::vector<std::size_t> order_;
};

template <class S>
BoundarySet<S> boundaries(const FiniteDictionary<S>& dict) {
  return BoundarySet<S>(dict);
}

/// Meaning cell of a scale: cell k (0-based, sorted order), or the tie
/// between cells k and k+1 when x sits exactly on boundary k.
struct Cell {
  std::size_t index = 0;
  std::optional<std::size_t> tie_with;

  bool is_tie() const { return tie_with.has_value(); }
  friend bool operator==(const Cell&, const Cell&) = default;
};

template <class S>
Cell classify(const Scale<S>& x, const BoundarySet<S>& b, const Tolerance& tol = {}) {
  const S x2 = x.value() * x.value();
  std::size_t lo = 0, hi = b.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (x2 > b.boundary_squared(mid))
      lo = mid + 1;
    else
      hi = mid;
  }
  const std::size_t k = lo;
  if (k + 1 < b.size() && ties(x2, b.boundary_squared(k), tol)) return {k, k + 1};
  if (k > 0 && ties(x2, b.boundary_squared(k - 1), tol)) return {k - 1, k};
  return {k, std::nullopt};
}

template <class S>
struct StabilityCertificate {
  bool stable = false;
  /// Distance from x to the nearest boundary (m_0 = 0, m_N = inf); 0 on a boundary.
  Root<S> radius{};
  Margin<S> margin;
  /// Open bound: perturbations strictly below this keep the argmin (Delta / 2).
  Margin<S> max_perturbation;
};

template <class S>
StabilityCertificate<S> stability_radius(const Scale<S>& x, const BoundarySet<S>& b, const PenaltyParam& p = {},
                                         const Tolerance& tol = {}) {
  using V = Root<S>;
  StabilityCertificate<S> cert;
  const Cell cell = classify(x, b, tol);
  const auto m = mean(x, b.dictionary(), p, tol);
  cert.margin = m.margin;
  if (m.margin.is_finite())
    cert.max_perturbation = Margin<S>::finite(S(m.margin.value / S(2)));
  else
    cert.max_perturbation = m.margin;
  if (cell.is_tie()) {
    cert.stable = false;
    cert.radius = V(0L);
    return cert;
  }
  const V xv(x.value());
  V radius = cell.index > 0 ? V(xv - b.boundary(cell.index - 1)) : xv;
  if (cell.index + 1 < b.size()) {
    V right = b.boundary(cell.index) - xv;
    if (right < radius) radius = right;
  }
  cert.radius = radius;
  cert.stable = sign(radius) > 0;
  return cert;
}

/// Delta(costs) > 2 eta, with Delta = +inf when all costs tie.
template <class V>
bool robust_under(std::span<const V> costs, const V& eta, const Tolerance& tol = {}) {
  if (sign(eta) < 0) throw DomainError("perturbation bound must be nonnegative");
  const Margin<V> margin = decision_margin(costs, tol);
  if (margin.is_infinite()) return true;
  return margin.value > V(eta * V(2));
}

struct SweepRow {
  double x = 0;
  Cell cell;
  Margin<double> margin;
  /// One cost per dictionary item, in dictionary order.
  std::vector<double> costs;
};

/// Log-spaced scan of [x_lo, x_hi] with `points_per_decade` samples per
/// factor of ten (both ends included).
inline std::vector<SweepRow> sweep(const FiniteDictionary<double>& dict, double x_lo, double x_hi,
                                   int points_per_decade = 512, const PenaltyParam& p = {},
                                   const Tolerance& tol = {}) {
  if (!(x_lo > 0) || !(x_hi >= x_lo)) throw DomainError("sweep needs 0 < lo <= hi");
  if (points_per_decade < 1) throw DomainError("sweep needs at least one point per decade");
  const BoundarySet<double> b(dict);
  const double decades = std::log10(x_hi / x_lo);
  const auto n = static_cast<std::size_t>(std::ceil(decades * points_per_decade)) + 1;
  std::vector<SweepRow> rows;
  rows.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = n == 1 ? x_lo : x_lo * std::pow(x_hi / x_lo, static_cast<double>(j) / static_cast<double>(n - 1));
    SweepRow row;
    row.x = x;
    row.cell = classify(Scale<double>(x), b, tol);
    row.margin = mean(Scale<double>(x), dict, p, tol).margin;
    for (std::size_t i = 0; i < dict.size(); ++i) row.costs.push_back(ratio_cost(x, dict.scale(i), p));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ratioref
