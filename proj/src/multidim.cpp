#include "ratioref/multidim.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/QR>

namespace ratioref {

double log_objective(const LogPoint& t, const LogPoint& u, const PenaltyParam& p) {
  if (t.size() != u.size()) throw ValidationError("log objective: dimension mismatch");
  double total = 0;
  for (Eigen::Index i = 0; i < t.size(); ++i) total += log_form(t[i] - u[i], p);
  return total;
}

LogPoint log_gradient(const LogPoint& t, const LogPoint& u, const PenaltyParam& p) {
  if (t.size() != u.size()) throw ValidationError("log gradient: dimension mismatch");
  LogPoint g(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) g[i] = -p.a() * std::sinh(p.a() * (t[i] - u[i]));
  return g;
}

namespace {

// G_t(v) - G_t(u) without cancellation: cosh A - cosh B = 2 sinh((A+B)/2) sinh((A-B)/2).
double objective_change(const LogPoint& t, const LogPoint& u, const LogPoint& v, const PenaltyParam& p) {
  double total = 0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double a = p.a() * (t[i] - v[i]), b = p.a() * (t[i] - u[i]);
    total += 2 * std::sinh(0.5 * (a + b)) * std::sinh(0.5 * (a - b));
  }
  return total;
}

// Both u and u + d lie on the faces active at each; d has no business moving
// off them, so strip the rounding noise along those normals.
LogPoint along_common_faces(const LogPolytope& poly, const LogPoint& u, const LogPoint& d) {
  const auto& n = poly.normals();
  const auto& c = poly.offsets();
  std::vector<Eigen::Index> common;
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    const double slack = 1e-12 * (1 + std::abs(c[i]));
    if (std::abs(n.row(i).dot(u) - c[i]) <= slack && std::abs(n.row(i).dot(u + d) - c[i]) <= slack) common.push_back(i);
  }
  if (common.empty()) return d;
  Eigen::MatrixXd na(Eigen::Index(common.size()), u.size());
  for (Eigen::Index k = 0; k < na.rows(); ++k) na.row(k) = n.row(common[std::size_t(k)]);
  return d - na.completeOrthogonalDecomposition().solve(na * d);
}

// Newton on the KKT system of the faces active at u. Near the optimum the
// gradient steps stall in rounding; this finishes quadratically.
LogPoint polish_on_faces(const LogPoint& t, const LogPolytope& poly, const LogPoint& u, const PenaltyParam& p) {
  const auto& n = poly.normals();
  const auto& c = poly.offsets();
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < n.rows(); ++i)
    if (n.row(i).squaredNorm() > 0 && n.row(i).dot(u) - c[i] >= -1e-8 * (1 + std::abs(c[i]))) active.push_back(i);
  const Eigen::Index d = u.size(), k = Eigen::Index(active.size());
  LogPoint v = u;
  for (int it = 0; it < 50; ++it) {
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(d + k, d + k);
    Eigen::VectorXd rhs(d + k);
    for (Eigen::Index i = 0; i < d; ++i) kkt(i, i) = p.a() * p.a() * std::cosh(p.a() * (t[i] - v[i]));
    rhs.head(d) = -log_gradient(t, v, p);
    for (Eigen::Index j = 0; j < k; ++j) {
      const Eigen::Index i = active[std::size_t(j)];
      kkt.block(0, d + j, d, 1) = n.row(i).transpose();
      kkt.block(d + j, 0, 1, d) = n.row(i);
      rhs[d + j] = c[i] - n.row(i).dot(v);
    }
    const Eigen::VectorXd step = kkt.completeOrthogonalDecomposition().solve(rhs);
    v += step.head(d);
    if (step.head(d).lpNorm<Eigen::Infinity>() <= 1e-15 * (1 + v.lpNorm<Eigen::Infinity>())) break;
  }
  return v;
}

// std::exp per coordinate, so scales match the 1-D routines bit for bit
// (Eigen's packet exp can differ in the last place).
Eigen::VectorXd scales_of(const LogPoint& u) {
  return u.unaryExpr([](double v) { return std::exp(v); }).eval();
}

}  // namespace

PolytopeSolution solve_log_polytope(const LogPoint& t, const LogPolytope& poly, const PenaltyParam& p,
                                    const std::optional<LogPoint>& start, const DescentOptions& opts) {
  if (t.size() != poly.dim()) throw ValidationError("polytope solve: dimension mismatch");
  if (start && start->size() != poly.dim()) throw ValidationError("polytope solve: start has wrong dimension");

  PolytopeSolution sol;
  LogPoint u = poly.project(start ? *start : t);
  LogPoint g = log_gradient(t, u, p);
  double step = 1.0;
  bool underflow = false;

  for (sol.iterations = 0; sol.iterations < opts.max_iterations; ++sol.iterations) {
    sol.projected_gradient = (u - poly.project(u - g)).lpNorm<Eigen::Infinity>();
    if (sol.projected_gradient <= opts.gradient_tol) {
      sol.converged = true;
      break;
    }

    const LogPoint direction = along_common_faces(poly, u, poly.project(u - step * g) - u);
    const double slope = g.dot(direction);
    if (!(slope < 0)) {
      // Trial step too long for the projection to give descent; restart at unit step.
      step = step > 1.0 ? 1.0 : step * 0.5;
      if (step < 1e-30) {
        underflow = true;
        break;
      }
      continue;
    }

    double lambda = 1.0;
    LogPoint next = u + direction;
    while (objective_change(t, u, next, p) > opts.armijo * lambda * slope) {
      lambda *= 0.5;
      if (lambda < 1e-30) break;
      next = u + lambda * direction;
    }
    if (lambda < 1e-30) {
      underflow = true;
      break;
    }

    const LogPoint next_g = log_gradient(t, next, p);
    const LogPoint ds = next - u;
    const LogPoint dg = next_g - g;
    const double curvature = ds.dot(dg);
    step = curvature > 0 ? std::clamp(ds.squaredNorm() / curvature, 1e-10, 1e10) : 1.0;

    u = next;
    g = next_g;
  }
  if (!sol.converged) {
    const LogPoint v = polish_on_faces(t, poly, u, p);
    if (v.allFinite() && poly.max_violation(v) <= 1e-12) {
      const double pg = (v - poly.project(v - log_gradient(t, v, p))).lpNorm<Eigen::Infinity>();
      if (pg < sol.projected_gradient) {
        u = v;
        sol.projected_gradient = pg;
      }
    }
    sol.converged = underflow || sol.projected_gradient <= opts.gradient_tol;
  }
  sol.u = u;
  sol.cost = log_objective(t, u, p);
  return sol;
}

MeaningResult<double> mean_md(const ScaleVector<double>& s, const LogBox& box, const PenaltyParam& p) {
  if (s.size() != box.dim()) throw ValidationError("dimension mismatch between scale and log-box");
  const LogPoint t = log_coordinates(s);
  const LogPoint u = box.clamp(t);
  MeaningResult<double> result;
  result.scales.push_back(scales_of(u));
  result.optimal_cost = log_objective(t, u, p);
  result.margin = Margin<double>::not_applicable();
  return result;
}

MeaningResult<double> mean_md(const ScaleVector<double>& s, const LogPolytope& poly, const PenaltyParam& p) {
  if (s.size() != poly.dim()) throw ValidationError("dimension mismatch between scale and log-polytope");
  const LogPoint t = log_coordinates(s);
  const PolytopeSolution sol = solve_log_polytope(t, poly, p);
  if (!sol.converged && sol.projected_gradient > 1e-6)
    throw ValidationError("log-polytope descent did not converge (projected gradient " +
                          to_string(sol.projected_gradient) + ")");
  MeaningResult<double> result;
  result.scales.push_back(scales_of(sol.u));
  result.optimal_cost = sol.cost;
  result.margin = Margin<double>::not_applicable();
  return result;
}

namespace {

LogPoint log_minimizer(const LogPoint& t, const Dictionary<double>& dict, const PenaltyParam& p) {
  if (const auto* box = std::get_if<LogBox>(&dict)) {
    if (t.size() != box->dim()) throw ValidationError("continuity probe: dimension mismatch");
    return box->clamp(t);
  }
  if (const auto* poly = std::get_if<LogPolytope>(&dict)) return solve_log_polytope(t, *poly, p).u;
  throw ValidationError("continuity probe needs a log-box or log-polytope dictionary");
}

}  // namespace

double continuity_probe(const LogPoint& t, const Dictionary<double>& dict, double step, const PenaltyParam& p) {
  if (!(step > 0)) throw DomainError("continuity probe needs a positive step");
  const LogPoint base = log_minimizer(t, dict, p);
  double worst = 0;
  for (Eigen::Index i = 0; i < t.size(); ++i)
    for (double sgn : {-1.0, 1.0}) {
      LogPoint moved = t;
      moved[i] += sgn * step;
      worst = std::max(worst, (log_minimizer(moved, dict, p) - base).lpNorm<Eigen::Infinity>());
    }
  return worst;
}

}  // namespace ratioref
