#include "ratioref/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>
#include <Eigen/QR>

namespace ratioref {

LogBox::LogBox(Eigen::VectorXd lo, Eigen::VectorXd hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() == 0) throw ValidationError("log-box must have at least one coordinate");
  if (lo_.size() != hi_.size()) throw ValidationError("log-box bounds have different dimensions");
  for (Eigen::Index i = 0; i < lo_.size(); ++i) {
    if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i])) throw ValidationError("log-box bounds must be finite");
    if (lo_[i] > hi_[i]) throw ValidationError("log-box needs lo <= hi in every coordinate");
  }
}

bool LogBox::contains(const Eigen::VectorXd& u) const {
  return u.size() == lo_.size() && (u.array() >= lo_.array()).all() && (u.array() <= hi_.array()).all();
}

namespace {

// Lawson-Hanson active-set solver for min ||E z - f|| subject to z >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& E, const Eigen::VectorXd& f) {
  const Eigen::Index m = E.cols();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
  std::vector<bool> passive(static_cast<std::size_t>(m), false);
  const double tol = 10 * std::numeric_limits<double>::epsilon() * E.cwiseAbs().maxCoeff() * double(std::max(E.rows(), m));

  auto solve_passive = [&](Eigen::VectorXd& s) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < m; ++j)
      if (passive[std::size_t(j)]) cols.push_back(j);
    Eigen::MatrixXd Ep(E.rows(), Eigen::Index(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) Ep.col(Eigen::Index(k)) = E.col(cols[k]);
    const Eigen::VectorXd sp = Ep.colPivHouseholderQr().solve(f);
    s.setZero(m);
    for (std::size_t k = 0; k < cols.size(); ++k) s[cols[k]] = sp[Eigen::Index(k)];
  };

  Eigen::VectorXd w = E.transpose() * (f - E * z);
  for (int outer = 0; outer < 3 * int(m) + 10; ++outer) {
    Eigen::Index t = -1;
    for (Eigen::Index j = 0; j < m; ++j)
      if (!passive[std::size_t(j)] && w[j] > tol && (t < 0 || w[j] > w[t])) t = j;
    if (t < 0) break;
    passive[std::size_t(t)] = true;

    Eigen::VectorXd s;
    for (int inner = 0; inner < 3 * int(m) + 10; ++inner) {
      solve_passive(s);
      bool positive = true;
      for (Eigen::Index j = 0; j < m; ++j)
        if (passive[std::size_t(j)] && s[j] <= tol) positive = false;
      if (positive) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < m; ++j)
        if (passive[std::size_t(j)] && s[j] <= tol) alpha = std::min(alpha, z[j] / (z[j] - s[j]));
      z += alpha * (s - z);
      for (Eigen::Index j = 0; j < m; ++j)
        if (passive[std::size_t(j)] && z[j] <= tol) {
          passive[std::size_t(j)] = false;
          z[j] = 0;
        }
    }
    z = s;
    w = E.transpose() * (f - E * z);
  }
  return z;
}

}  // namespace

LogPolytope::LogPolytope(Eigen::MatrixXd normals, Eigen::VectorXd offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
  if (normals_.cols() == 0) throw ValidationError("log-polytope must have at least one coordinate");
  if (normals_.rows() != offsets_.size()) throw ValidationError("log-polytope needs one offset per halfspace");
  if (!normals_.allFinite() || !offsets_.allFinite()) throw ValidationError("log-polytope data must be finite");
  for (Eigen::Index i = 0; i < normals_.rows(); ++i)
    if (normals_.row(i).squaredNorm() == 0.0 && offsets_[i] < 0.0)
      throw ValidationError("log-polytope is empty (halfspace " + std::to_string(i) + " has zero normal)");

  const auto probe = least_distance(Eigen::VectorXd::Zero(dim()));
  if (!probe || max_violation(*probe) > 1e-9) throw ValidationError("log-polytope is empty");
}

double LogPolytope::max_violation(const Eigen::VectorXd& u) const {
  if (normals_.rows() == 0) return 0.0;
  return std::max(0.0, (normals_ * u - offsets_).maxCoeff());
}

// Least-distance program min ||y - u|| s.t. N y <= c, solved through its NNLS
// dual: with G = -N (rows scaled to unit length) and h = N u - c, minimize
// ||E z - f|| over z >= 0 for E = [G^T; h^T], f = e_{d+1}. A zero residual
// means the constraints are inconsistent.
std::optional<Eigen::VectorXd> LogPolytope::least_distance(const Eigen::VectorXd& u) const {
  const Eigen::Index d = dim();
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < normals_.rows(); ++i)
    if (normals_.row(i).squaredNorm() > 0.0) rows.push_back(i);
  if (rows.empty()) return u;

  const auto m = Eigen::Index(rows.size());
  Eigen::MatrixXd E(d + 1, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index i = rows[std::size_t(k)];
    const double len = normals_.row(i).norm();
    E.col(k).head(d) = -normals_.row(i).transpose() / len;
    E(d, k) = (normals_.row(i).dot(u) - offsets_[i]) / len;
  }
  Eigen::VectorXd f = Eigen::VectorXd::Zero(d + 1);
  f[d] = 1.0;
  const Eigen::VectorXd z = nnls(E, f);
  const Eigen::VectorXd r = E * z - f;
  if (r.norm() <= 1e-12 || !(r[d] < 0)) return std::nullopt;

  // The dual support names the active constraints; re-solve the projection onto
  // their intersection directly, which is far more accurate than u - r / r_d.
  std::vector<Eigen::Index> active;
  for (Eigen::Index k = 0; k < m; ++k)
    if (z[k] > 0) active.push_back(rows[std::size_t(k)]);
  if (active.empty()) return u;
  Eigen::MatrixXd Na(Eigen::Index(active.size()), d);
  Eigen::VectorXd excess(Na.rows());
  for (Eigen::Index k = 0; k < Na.rows(); ++k) {
    const Eigen::Index i = active[std::size_t(k)];
    Na.row(k) = normals_.row(i);
    excess[k] = normals_.row(i).dot(u) - offsets_[i];
  }
  Eigen::VectorXd y = u - Na.completeOrthogonalDecomposition().solve(excess);
  const Eigen::VectorXd fallback = u - r.head(d) / r[d];
  if (max_violation(y) > max_violation(fallback) || (y - fallback).norm() > 1e-8 * (1 + fallback.norm())) y = fallback;
  return y;
}

Eigen::VectorXd LogPolytope::project(const Eigen::VectorXd& u) const {
  if (u.size() != dim()) throw ValidationError("projection point has wrong dimension");
  if (max_violation(u) == 0.0) return u;
  const auto y = least_distance(u);
  if (!y) throw ValidationError("log-polytope is empty");
  return *y;
}

}  // namespace ratioref
