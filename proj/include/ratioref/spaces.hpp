#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "ratioref/penalty.hpp"
#include "ratioref/scalar.hpp"

namespace ratioref {

/// A strictly positive scale value iota(c).
template <class S>
class Scale {
 public:
  explicit Scale(S value) : value_(std::move(value)) {
    if (!is_positive(value_)) throw DomainError("scale must be positive");
  }
  const S& value() const { return value_; }

 private:
  S value_;
};

/// A d-dimensional scale with every coordinate positive.
template <class S>
class ScaleVector {
 public:
  explicit ScaleVector(Vector<S> coords) : coords_(std::move(coords)) {
    if (coords_.size() == 0) throw ValidationError("scale vector must have at least one coordinate");
    for (Eigen::Index i = 0; i < coords_.size(); ++i)
      if (!is_positive(coords_[i])) throw DomainError("scale vector coordinates must be positive");
  }
  ScaleVector(std::initializer_list<S> coords) : ScaleVector(from_list(coords)) {}

  Eigen::Index size() const { return coords_.size(); }
  const S& operator[](Eigen::Index i) const { return coords_[i]; }
  const Vector<S>& coords() const { return coords_; }

 private:
  static Vector<S> from_list(std::initializer_list<S> coords) {
    Vector<S> v(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (const S& c : coords) v[i++] = c;
    return v;
  }
  Vector<S> coords_;
};

template <class S>
struct FiniteItem {
  std::string id;
  Vector<S> scale;
};

/// Finite feasible set of objects with (possibly repeated) scales.
/// Repeated scales form one fiber; ids must be unique.
template <class S>
class FiniteDictionary {
 public:
  explicit FiniteDictionary(std::vector<FiniteItem<S>> items) : items_(std::move(items)) {
    if (items_.empty()) throw ValidationError("finite dictionary must be nonempty");
    dim_ = items_.front().scale.size();
    if (dim_ == 0) throw ValidationError("dictionary scales must have at least one coordinate");
    for (std::size_t i = 0; i < items_.size(); ++i) {
      const auto& item = items_[i];
      if (item.scale.size() != dim_) throw ValidationError("dictionary item '" + item.id + "' has mismatched dimension");
      for (Eigen::Index k = 0; k < dim_; ++k)
        if (!is_positive(item.scale[k])) throw DomainError("dictionary item '" + item.id + "' has a nonpositive scale");
      for (std::size_t j = 0; j < i; ++j)
        if (items_[j].id == item.id) throw ValidationError("duplicate dictionary id '" + item.id + "'");
    }
  }

  /// 1-D dictionary with ids o1..oN.
  static FiniteDictionary from_scales(const std::vector<S>& scales) {
    std::vector<FiniteItem<S>> items;
    items.reserve(scales.size());
    for (std::size_t i = 0; i < scales.size(); ++i) {
      Vector<S> v(1);
      v[0] = scales[i];
      items.push_back({"o" + std::to_string(i + 1), std::move(v)});
    }
    return FiniteDictionary(std::move(items));
  }

  /// Cartesian product of 1-D dictionaries; ids are "(a,b,...)".
  static FiniteDictionary product(const std::vector<FiniteDictionary>& factors) {
    if (factors.empty()) throw ValidationError("product of zero dictionaries");
    std::vector<FiniteItem<S>> acc{{"", Vector<S>(0)}};
    for (const auto& f : factors) {
      if (f.dim() != 1) throw ValidationError("product factors must be one-dimensional");
      std::vector<FiniteItem<S>> next;
      next.reserve(acc.size() * f.size());
      for (const auto& prefix : acc)
        for (const auto& item : f.items()) {
          Vector<S> v(prefix.scale.size() + 1);
          for (Eigen::Index k = 0; k < prefix.scale.size(); ++k) v[k] = prefix.scale[k];
          v[prefix.scale.size()] = item.scale[0];
          next.push_back({prefix.id.empty() ? item.id : prefix.id + "," + item.id, std::move(v)});
        }
      acc = std::move(next);
    }
    for (auto& item : acc) item.id = "(" + item.id + ")";
    return FiniteDictionary(std::move(acc));
  }

  const std::vector<FiniteItem<S>>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  Eigen::Index dim() const { return dim_; }

  /// Scale of item i in a 1-D dictionary.
  const S& scale(std::size_t i) const { return items_[i].scale[0]; }

  std::optional<std::size_t> find(const std::string& id) const {
    for (std::size_t i = 0; i < items_.size(); ++i)
      if (items_[i].id == id) return i;
    return std::nullopt;
  }

  void require_one_dimensional() const {
    if (dim_ != 1) throw ValidationError("operation needs a one-dimensional dictionary, got d = " + std::to_string(dim_));
  }

 private:
  std::vector<FiniteItem<S>> items_;
  Eigen::Index dim_ = 0;
};

/// Closed interval [lo, hi] inside (0, inf).
template <class S>
class IntervalDictionary {
 public:
  IntervalDictionary(Scale<S> lo, Scale<S> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_.value() < lo_.value()) throw ValidationError("interval dictionary needs lo <= hi");
  }
  const S& lo() const { return lo_.value(); }
  const S& hi() const { return hi_.value(); }

 private:
  Scale<S> lo_;
  Scale<S> hi_;
};

/// Closed box {u : lo <= u <= hi} in log-coordinates.
class LogBox {
 public:
  LogBox(Eigen::VectorXd lo, Eigen::VectorXd hi);
  const Eigen::VectorXd& lo() const { return lo_; }
  const Eigen::VectorXd& hi() const { return hi_; }
  Eigen::Index dim() const { return lo_.size(); }
  Eigen::VectorXd clamp(const Eigen::VectorXd& u) const { return u.cwiseMax(lo_).cwiseMin(hi_); }
  bool contains(const Eigen::VectorXd& u) const;

 private:
  Eigen::VectorXd lo_;
  Eigen::VectorXd hi_;
};

/// Closed convex polyhedron {u : normals * u <= offsets} in log-coordinates.
/// Construction rejects empty sets.
class LogPolytope {
 public:
  LogPolytope(Eigen::MatrixXd normals, Eigen::VectorXd offsets);

  const Eigen::MatrixXd& normals() const { return normals_; }
  const Eigen::VectorXd& offsets() const { return offsets_; }
  Eigen::Index dim() const { return normals_.cols(); }

  /// Largest constraint violation max_i (n_i . u - c_i), or 0 when feasible.
  double max_violation(const Eigen::VectorXd& u) const;
  bool contains(const Eigen::VectorXd& u, double tol = 1e-9) const { return max_violation(u) <= tol; }

  /// Euclidean projection, solved as a least-distance program.
  Eigen::VectorXd project(const Eigen::VectorXd& u) const;

 private:
  std::optional<Eigen::VectorXd> least_distance(const Eigen::VectorXd& u) const;

  Eigen::MatrixXd normals_;
  Eigen::VectorXd offsets_;
};

template <class S>
using Dictionary = std::variant<FiniteDictionary<S>, IntervalDictionary<S>, LogBox, LogPolytope>;

template <class S>
Eigen::Index dimension(const Dictionary<S>& dict) {
  return std::visit(
      [](const auto& d) -> Eigen::Index {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, IntervalDictionary<S>>)
          return 1;
        else
          return d.dim();
      },
      dict);
}

template <class S>
std::string variant_name(const Dictionary<S>& dict) {
  switch (dict.index()) {
    case 0: return "finite";
    case 1: return "interval";
    case 2: return "logbox";
    default: return "logpolytope";
  }
}

/// Name, feasible scale set and penalty of one side of a reference.
template <class S>
struct CostedSpace {
  std::string name;
  Dictionary<S> dict;
  PenaltyParam penalty;
};

/// Admissible reference cost J(s / o) for raw positive values.
template <class V>
V ratio_cost(const V& s, const V& o, const PenaltyParam& p = {}) {
  if (!is_positive(s) || !is_positive(o)) throw DomainError("reference cost needs positive scales");
  return eval(V(s / o), p);
}

template <class S>
S ref_cost(const Scale<S>& s, const Scale<S>& o, const PenaltyParam& p = {}) {
  return ratio_cost(s.value(), o.value(), p);
}

/// Separable cost sum_i J(s_i / o_i).
template <class S>
S ref_cost_vec(const ScaleVector<S>& s, const ScaleVector<S>& o, const PenaltyParam& p = {}) {
  if (s.size() != o.size())
    throw ValidationError("dimension mismatch: " + std::to_string(s.size()) + " vs " + std::to_string(o.size()));
  S total(0);
  for (Eigen::Index i = 0; i < s.size(); ++i) total += ratio_cost(s[i], o[i], p);
  return total;
}

template <class S>
S intrinsic_cost(const Scale<S>& c, const PenaltyParam& p = {}) {
  return eval(c.value(), p);
}

template <class S>
S intrinsic_cost(const ScaleVector<S>& c, const PenaltyParam& p = {}) {
  S total(0);
  for (Eigen::Index i = 0; i < c.size(); ++i) total += eval(c[i], p);
  return total;
}

}  // namespace ratioref
