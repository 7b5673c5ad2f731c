#ifndef OFFTRC_CORE_COST_HPP
#define OFFTRC_CORE_COST_HPP

namespace offtrc {

/// Which way the penalized signal points.
enum class CostConvention {
  /// sigmoid(k (b - x)): small distances/heights are penalized.
  Distance,
  /// sigmoid(k (|x| - b)): large magnitudes (e.g. a torso angle) are penalized.
  Angle,
};

struct CostFunctionSpec {
  double k = 10.0;
  double b = 0.2;
  CostConvention convention = CostConvention::Distance;
};

/// Logistic cost in (0, 1). Throws std::invalid_argument for non-finite x or k <= 0.
double logistic_cost(double x, const CostFunctionSpec& spec);

/// A constraint violation is any step whose cost reaches 0.5.
inline int count_cv(double cost) { return cost >= 0.5 ? 1 : 0; }

}  // namespace offtrc

#endif  // OFFTRC_CORE_COST_HPP
