#include "ratioref/penalty.hpp"

#include <algorithm>

namespace ratioref {

double dalembert_relative_residual(double x, double y, const PenaltyParam& p) {
  const double jx = eval(x, p);
  const double jy = eval(y, p);
  const double jxy = eval(x * y, p);
  const double jq = eval(x / y, p);
  const double residual = jxy + jq - 2 * jx - 2 * jy - 2 * jx * jy;
  const double scale = std::max({1.0, jxy + jq, 2 * jx + 2 * jy + 2 * jx * jy});
  return std::abs(residual) / scale;
}

}  // namespace ratioref
