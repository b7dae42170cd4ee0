#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ratioref/meaning.hpp"

namespace ratioref {

/// Point in log-coordinates u = log y.
using LogPoint = Eigen::VectorXd;

/// G_t(u) = sum_i J_a(e^{t_i - u_i}) = sum_i (cosh(a (t_i - u_i)) - 1).
double log_objective(const LogPoint& t, const LogPoint& u, const PenaltyParam& p = {});

/// dG_t/du_i = -a sinh(a (t_i - u_i)).
LogPoint log_gradient(const LogPoint& t, const LogPoint& u, const PenaltyParam& p = {});

struct DescentOptions {
  double gradient_tol = 1e-10;
  int max_iterations = 10000;
  double armijo = 1e-4;
};

struct PolytopeSolution {
  LogPoint u;
  double cost = 0;
  int iterations = 0;
  /// ||u - P(u - grad G_t(u))||_inf at exit.
  double projected_gradient = 0;
  bool converged = false;
};

/// Minimizes G_t over a log-polytope by projected gradient descent with
/// spectral (Barzilai-Borwein) trial steps and Armijo backtracking by
/// halving. Starts from the projection of `start` (default: of t).
PolytopeSolution solve_log_polytope(const LogPoint& t, const LogPolytope& poly, const PenaltyParam& p = {},
                                    const std::optional<LogPoint>& start = std::nullopt,
                                    const DescentOptions& opts = {});

template <class S>
LogPoint log_coordinates(const ScaleVector<S>& s) {
  LogPoint t(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) t[i] = std::log(to_double(s[i]));
  return t;
}

/// Full scan of F_x(y) = sum_i J(x_i / y_i) over a finite d-D dictionary.
template <class S>
MeaningResult<S> mean_md(const ScaleVector<S>& s, const FiniteDictionary<S>& dict, const PenaltyParam& p = {},
                         const Tolerance& tol = {}) {
  if (s.size() != dict.dim())
    throw ValidationError("dimension mismatch: scale has d = " + std::to_string(s.size()) + ", dictionary has d = " +
                          std::to_string(dict.dim()));
  std::vector<S> costs;
  costs.reserve(dict.size());
  for (const auto& item : dict.items()) costs.push_back(ref_cost_vec(s, ScaleVector<S>(item.scale), p));
  const S best = *std::min_element(costs.begin(), costs.end());
  MeaningResult<S> result;
  result.optimal_cost = best;
  for (std::size_t i = 0; i < dict.size(); ++i)
    if (ties(costs[i], best, tol)) {
      result.minimizers.push_back(dict.items()[i].id);
      result.scales.push_back(dict.items()[i].scale);
    }
  result.margin = decision_margin<S>(costs, tol);
  return result;
}

/// Unique minimizer over a log-box: coordinatewise clamp of log s.
MeaningResult<double> mean_md(const ScaleVector<double>& s, const LogBox& box, const PenaltyParam& p = {});

/// Unique minimizer over a log-polytope (throws if the descent fails to converge).
MeaningResult<double> mean_md(const ScaleVector<double>& s, const LogPolytope& poly, const PenaltyParam& p = {});

template <class S>
MeaningResult<S> mean_md(const ScaleVector<S>& s, const Dictionary<S>& dict, const PenaltyParam& p = {},
                         const Tolerance& tol = {}) {
  if (s.size() != dimension(dict))
    throw ValidationError("dimension mismatch: scale has d = " + std::to_string(s.size()) + ", dictionary has d = " +
                          std::to_string(dimension(dict)));
  if (const auto* f = std::get_if<FiniteDictionary<S>>(&dict)) return mean_md(s, *f, p, tol);
  if (const auto* iv = std::get_if<IntervalDictionary<S>>(&dict)) return mean(Scale<S>(s[0]), *iv, p, tol);
  if constexpr (std::is_floating_point_v<S>) {
    if (const auto* box = std::get_if<LogBox>(&dict)) return mean_md(s, *box, p);
    return mean_md(s, std::get<LogPolytope>(dict), p);
  } else {
    throw ValidationError("log-coordinate dictionaries need the float backend");
  }
}

/// Checks that the meaning over the product of 1-D dictionaries is the
/// Cartesian product of the coordinatewise meanings (ids and cost).
template <class S>
bool coordinatewise_equiv_check(const ScaleVector<S>& s, const std::vector<FiniteDictionary<S>>& dicts,
                                const PenaltyParam& p = {}, const Tolerance& tol = {}) {
  if (static_cast<Eigen::Index>(dicts.size()) != s.size()) throw ValidationError("need one dictionary per coordinate");
  const auto joint = mean_md(s, FiniteDictionary<S>::product(dicts), p, tol);

  std::vector<std::string> expected{""};
  S cost(0);
  for (std::size_t i = 0; i < dicts.size(); ++i) {
    const auto m = mean(Scale<S>(s[static_cast<Eigen::Index>(i)]), dicts[i], p, tol);
    cost += m.optimal_cost;
    std::vector<std::string> next;
    for (const auto& prefix : expected)
      for (const auto& id : m.minimizers) next.push_back(prefix.empty() ? id : prefix + "," + id);
    expected = std::move(next);
  }
  for (auto& id : expected) id = "(" + id + ")";

  auto got = joint.minimizers;
  std::sort(got.begin(), got.end());
  std::sort(expected.begin(), expected.end());
  return got == expected && ties(joint.optimal_cost, cost, tol);
}

/// max over coordinate perturbations t +- step e_i of ||u*(t') - u*(t)||_inf
/// for a log-box or log-polytope dictionary.
double continuity_probe(const LogPoint& t, const Dictionary<double>& dict, double step, const PenaltyParam& p = {});

}  // namespace ratioref
