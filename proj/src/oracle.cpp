#include "ratioref/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/LU>

#include "ratioref/decision.hpp"
#include "ratioref/multidim.hpp"

namespace ratioref::oracle {

double grid_mean_continuous(double s, double lo, double hi, int steps, const PenaltyParam& p) {
  if (!(lo > 0) || !(lo < hi)) throw DomainError("grid oracle needs 0 < lo < hi");
  if (steps < 2) throw DomainError("grid oracle needs at least two points");
  const double log_lo = std::log(lo), log_hi = std::log(hi);
  double best_y = lo, best_cost = eval(s / lo, p);
  for (int j = 1; j < steps; ++j) {
    const double y = std::exp(log_lo + (log_hi - log_lo) * j / (steps - 1));
    const double cost = eval(s / y, p);
    if (cost < best_cost) {
      best_cost = cost;
      best_y = y;
    }
  }
  return best_y;
}

namespace {

struct GridBest {
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  double value = INFINITY;

  void offer(const Eigen::Vector2d& v, double value_at) {
    if (value_at < value) {
      value = value_at;
      u = v;
    }
  }
};

// Points lying on a constraint line sit within rounding of that halfspace.
constexpr double kOnLineSlack = 1e-12;

}  // namespace

Eigen::Vector2d grid_mean_polytope(const Eigen::Vector2d& t, const LogPolytope& poly, double radius, double coarse,
                                   double fine, const PenaltyParam& p) {
  if (poly.dim() != 2) throw ValidationError("grid oracle: polytope must be two-dimensional");
  if (!(coarse > 0) || !(fine > 0) || !(radius > 0)) throw DomainError("grid oracle needs positive spacings");
  GridBest best;

  // Interior: 2-D grid, zoomed around the best feasible point.
  {
    Eigen::Vector2d centre = Eigen::Vector2d::Zero();
    long half = static_cast<long>(std::ceil(radius / coarse));
    for (double h = coarse;; h /= 10) {
      GridBest level;
      for (long i = -half; i <= half; ++i)
        for (long j = -half; j <= half; ++j) {
          const Eigen::Vector2d u = centre + h * Eigen::Vector2d(double(i), double(j));
          if (poly.max_violation(u) == 0.0) level.offer(u, log_objective(t, u, p));
        }
      if (!std::isfinite(level.value)) break;
      best.offer(level.u, level.value);
      if (h <= fine) break;
      centre = level.u;
      half = 20;
    }
  }

  // Boundary: 1-D grid along every constraint line, zoomed the same way.
  const auto& n = poly.normals();
  const auto& c = poly.offsets();
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    const Eigen::Vector2d normal = n.row(i).transpose();
    const double len2 = normal.squaredNorm();
    if (len2 == 0.0) continue;
    const Eigen::Vector2d base = normal * (c[i] / len2);
    const Eigen::Vector2d dir = Eigen::Vector2d(-normal[1], normal[0]) / std::sqrt(len2);
    double centre = 0;
    long half = static_cast<long>(std::ceil(2 * radius / coarse));
    for (double h = coarse;; h /= 10) {
      GridBest level;
      double level_s = centre;
      for (long k = -half; k <= half; ++k) {
        const double s = centre + h * double(k);
        const Eigen::Vector2d u = base + s * dir;
        if (poly.max_violation(u) > kOnLineSlack) continue;
        const double v = log_objective(t, u, p);
        if (v < level.value) level_s = s;
        level.offer(u, v);
      }
      if (!std::isfinite(level.value)) break;
      best.offer(level.u, level.value);
      if (h <= fine) break;
      centre = level_s;
      half = 20;
    }
  }
  // Vertices: pairwise intersections of constraint lines.
  for (Eigen::Index i = 0; i < n.rows(); ++i)
    for (Eigen::Index j = i + 1; j < n.rows(); ++j) {
      Eigen::Matrix2d m;
      m << n.row(i), n.row(j);
      if (std::abs(m.determinant()) <= 1e-12 * m.norm() * m.norm()) continue;
      const Eigen::Vector2d v = m.partialPivLu().solve(Eigen::Vector2d(c[i], c[j]));
      if (v.lpNorm<Eigen::Infinity>() <= 2 * radius && poly.max_violation(v) <= kOnLineSlack)
        best.offer(v, log_objective(t, v, p));
    }
  if (!std::isfinite(best.value)) throw ValidationError("grid oracle: no feasible grid point");
  return best.u;
}

InstanceGenerator InstanceGenerator::for_trial(std::uint64_t seed, std::uint64_t index) {
  InstanceGenerator g;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  g.rng_.seed(seq);
  return g;
}

long InstanceGenerator::integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

double InstanceGenerator::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

Rational InstanceGenerator::rational(long max_term) { return make_rational(integer(1, max_term), integer(1, max_term)); }

FiniteDictionary<Rational> InstanceGenerator::dictionary(std::size_t max_size, long max_term) {
  const auto n = static_cast<std::size_t>(integer(1, static_cast<long>(max_size)));
  std::vector<Rational> scales;
  for (std::size_t i = 0; i < n; ++i) {
    // Occasional repeats exercise fibers.
    if (!scales.empty() && integer(0, 9) == 0)
      scales.push_back(scales[static_cast<std::size_t>(integer(0, static_cast<long>(scales.size()) - 1))]);
    else
      scales.push_back(rational(max_term));
  }
  return FiniteDictionary<Rational>::from_scales(scales);
}

FiniteDictionary<Rational> InstanceGenerator::dictionary_with_one(std::size_t max_size, long max_term) {
  const auto base = dictionary(max_size > 1 ? max_size - 1 : 1, max_term);
  std::vector<Rational> scales;
  for (std::size_t i = 0; i < base.size(); ++i) scales.push_back(base.scale(i));
  const auto pos = static_cast<std::size_t>(integer(0, static_cast<long>(scales.size())));
  scales.insert(scales.begin() + static_cast<std::ptrdiff_t>(pos), Rational(1));
  return FiniteDictionary<Rational>::from_scales(scales);
}

FiniteDictionary<Rational> InstanceGenerator::square_dictionary(std::size_t max_size, long max_term) {
  const auto n = static_cast<std::size_t>(integer(1, static_cast<long>(max_size)));
  std::vector<Rational> scales;
  for (std::size_t i = 0; i < n; ++i) {
    Rational r = rational(max_term);
    scales.push_back(r * r);
  }
  return FiniteDictionary<Rational>::from_scales(scales);
}

namespace {

template <class T>
std::vector<T> sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

template <class V>
bool same_margin(const Margin<V>& a, const Margin<V>& b) {
  if (a.kind != b.kind) return false;
  return !a.is_finite() || a.value == b.value;
}

template <class V>
bool same_meaning(const MeaningResult<V>& a, const MeaningResult<V>& b) {
  return sorted(a.minimizers) == sorted(b.minimizers) && a.optimal_cost == b.optimal_cost &&
         same_margin(a.margin, b.margin);
}

std::string describe(const Rational& s, const FiniteDictionary<Rational>& d) {
  std::string out = "s=" + to_string(s) + " dict={";
  for (std::size_t i = 0; i < d.size(); ++i) out += (i ? "," : "") + to_string(d.scale(i));
  return out + "}";
}

/// A scale that lands on a fiber, on a boundary, or anywhere.
Rational pick_scale(InstanceGenerator& g, const FiniteDictionary<Rational>& d) {
  switch (g.integer(0, 3)) {
    case 0:
      return d.scale(static_cast<std::size_t>(g.integer(0, static_cast<long>(d.size()) - 1)));
    case 1: {
      const auto i = static_cast<std::size_t>(g.integer(0, static_cast<long>(d.size()) - 1));
      const auto j = static_cast<std::size_t>(g.integer(0, static_cast<long>(d.size()) - 1));
      Rational root;
      if (exact_sqrt(Rational(d.scale(i) * d.scale(j)), root)) return root;
      return g.rational();
    }
    default:
      return g.rational();
  }
}

void run_check(VerificationReport& report, const std::string& name, long trials,
               const std::function<std::string(InstanceGenerator&)>& trial) {
  CheckResult result{name, trials, 0, {}};
  for (long i = 0; i < trials; ++i) {
    InstanceGenerator g = InstanceGenerator::for_trial(report.seed ^ std::hash<std::string>{}(name), static_cast<std::uint64_t>(i));
    std::string failure = trial(g);
    if (!failure.empty()) {
      if (result.failures == 0) result.first_failure = failure;
      ++result.failures;
    }
  }
  report.checks.push_back(std::move(result));
}

long scaled(long base, double scale) { return std::max(1L, static_cast<long>(std::lround(base * scale))); }

}  // namespace

VerificationReport run_verification(std::uint64_t seed, double scale) {
  VerificationReport report;
  report.seed = seed;

  run_check(report, "mean_finite_1d_vs_full_scan", scaled(10000, scale), [](InstanceGenerator& g) -> std::string {
    const auto d = g.integer(0, 1) ? g.dictionary() : g.square_dictionary();
    const Rational s = pick_scale(g, d);
    const auto got = mean(Scale<Rational>(s), d);
    const auto want = brute_mean_finite(s, d);
    return same_meaning(got, want) ? "" : describe(s, d);
  });

  run_check(report, "mean_md_2d_product_vs_full_scan", scaled(1000, scale), [](InstanceGenerator& g) -> std::string {
    const std::vector<FiniteDictionary<Rational>> factors{g.square_dictionary(8), g.dictionary(8)};
    const auto product = FiniteDictionary<Rational>::product(factors);
    const ScaleVector<Rational> s{pick_scale(g, factors[0]), pick_scale(g, factors[1])};
    const auto got = mean_md(s, product);
    const auto want = brute_mean_finite(s.coords(), product);
    if (!same_meaning(got, want)) return "2-D product scan mismatch";
    return coordinatewise_equiv_check(s, factors) ? "" : "coordinatewise factorization mismatch";
  });

  run_check(report, "interval_clamp_vs_grid", scaled(1000, scale), [](InstanceGenerator& g) -> std::string {
    const double lo = std::exp(g.uniform(-4, 2));
    const double hi = lo * std::exp(g.uniform(0.01, 4));
    const double s = std::exp(g.uniform(-6, 4));
    const int steps = 10000;
    const auto got = mean(Scale<double>(s), IntervalDictionary<double>(Scale<double>(lo), Scale<double>(hi)));
    const double grid = grid_mean_continuous(s, lo, hi, steps);
    const double cell = (std::log(hi) - std::log(lo)) / (steps - 1);
    return std::abs(std::log(got.scales[0][0]) - std::log(grid)) <= cell * (1 + 1e-9) ? "" : "clamp off the grid optimum";
  });

  run_check(report, "mediate_vs_full_scan", scaled(1000, scale), [](InstanceGenerator& g) -> std::string {
    const auto d = g.integer(0, 1) ? g.dictionary() : g.square_dictionary();
    const Rational a = g.rational(), c = g.rational();
    const auto got = mediate(Scale<Rational>(a), Scale<Rational>(c), Dictionary<Rational>(d));
    const auto want = brute_mediate(a, c, d);
    if (sorted(got.chosen_ids) != sorted(want.chosen_ids)) return "mediator set mismatch for " + describe(a, d);
    return got.total_cost == want.total_cost ? "" : "mediation total mismatch";
  });

  run_check(report, "product_factorization", scaled(1000, scale), [](InstanceGenerator& g) -> std::string {
    const auto d1 = g.square_dictionary(8), d2 = g.dictionary(8);
    const Rational s1 = pick_scale(g, d1), s2 = pick_scale(g, d2);
    const auto [m1, m2] = product_mean(Scale<Rational>(s1), Scale<Rational>(s2), Dictionary<Rational>(d1),
                                       Dictionary<Rational>(d2));
    std::vector<std::string> got;
    for (const auto& [x, y] : product_meaning_set(m1, m2)) got.push_back("(" + x + "," + y + ")");
    Vector<Rational> s(2);
    s << s1, s2;
    const auto want = brute_mean_finite(s, FiniteDictionary<Rational>::product({d1, d2}));
    return sorted(got) == sorted(want.minimizers) && Rational(m1.optimal_cost + m2.optimal_cost) == want.optimal_cost
               ? ""
               : "product meaning mismatch";
  });

  run_check(report, "classify_vs_mean", scaled(1000, scale), [](InstanceGenerator& g) -> std::string {
    auto raw = g.square_dictionary();
    std::vector<Rational> scales;
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (std::find(scales.begin(), scales.end(), raw.scale(i)) == scales.end()) scales.push_back(raw.scale(i));
    const auto d = FiniteDictionary<Rational>::from_scales(scales);
    const auto b = boundaries(d);
    const Rational s = pick_scale(g, d);
    const Cell cell = classify(Scale<Rational>(s), b);
    std::vector<std::string> via_cell{b.id(cell.index)};
    if (cell.tie_with) via_cell.push_back(b.id(*cell.tie_with));
    return sorted(via_cell) == sorted(brute_mean_finite(s, d).minimizers) ? "" : "cell disagrees with argmin";
  });

  run_check(report, "dalembert_exact", scaled(10000, scale), [](InstanceGenerator& g) -> std::string {
    const Rational x = g.rational(), y = g.rational();
    return dalembert_residual(x, y) == 0 ? "" : "nonzero residual at x=" + to_string(x) + " y=" + to_string(y);
  });

  run_check(report, "backbone_window_soundness", scaled(1000, scale), [](InstanceGenerator& g) -> std::string {
    static const Rational deltas[] = {make_rational(1, 10), make_rational(1, 4), make_rational(1, 2)};
    const Rational& delta = deltas[g.integer(0, 2)];
    const auto window = backbone_window(delta);
    const auto d = g.dictionary_with_one();
    // s strictly inside (1 - delta, 1 + delta).
    const Rational s = 1 - delta + 2 * delta * make_rational(g.integer(1, 999), 1000);
    for (const auto& y : mean(Scale<Rational>(s), d).scales)
      if (!window.contains(QuadSurd(y[0]))) return "meaning outside I_delta for " + describe(s, d);
    return "";
  });

  return report;
}

}  // namespace ratioref::oracle
