#ifndef OFFTRC_NN_ADAM_HPP
#define OFFTRC_NN_ADAM_HPP

#include <Eigen/Core>

#include <cmath>
#include <cstdint>

namespace offtrc {

/// Adaptive-moment optimizer state for one flat parameter vector.
struct Adam {
  double learning_rate = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  Eigen::VectorXd first;
  Eigen::VectorXd second;
  std::int64_t steps = 0;

  /// Descent step for `grad`; returns the parameter increment.
  Eigen::VectorXd step(const Eigen::VectorXd& grad) {
    if (first.size() != grad.size()) {
      first = Eigen::VectorXd::Zero(grad.size());
      second = Eigen::VectorXd::Zero(grad.size());
      steps = 0;
    }
    ++steps;
    first = beta1 * first + (1.0 - beta1) * grad;
    second = beta2 * second + (1.0 - beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(steps));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(steps));
    return -learning_rate * ((first / c1).array() / ((second / c2).array().sqrt() + epsilon)).matrix();
  }
};

}  // namespace offtrc

#endif  // OFFTRC_NN_ADAM_HPP
