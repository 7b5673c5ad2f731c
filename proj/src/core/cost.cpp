#include "offtrc/core/cost.hpp"

#include <cmath>
#include <stdexcept>

namespace offtrc {

double logistic_cost(double x, const CostFunctionSpec& spec) {
  if (!std::isfinite(x)) throw std::invalid_argument("logistic_cost: non-finite input");
  if (!(spec.k > 0.0)) throw std::invalid_argument("logistic_cost: slope k must be positive");
  const double z = spec.convention == CostConvention::Distance ? spec.k * (spec.b - x)
                                                               : spec.k * (std::abs(x) - spec.b);
  // Evaluate on the stable side of the exponential.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace offtrc
