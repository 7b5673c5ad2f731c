#ifndef OFFTRC_TRC_CRITIC_UPDATE_HPP
#define OFFTRC_TRC_CRITIC_UPDATE_HPP

#include "offtrc/nn/adam.hpp"
#include "offtrc/nn/critics.hpp"
#include "offtrc/trc/retrace.hpp"

#include <array>
#include <random>

namespace offtrc {

struct CriticTrainConfig {
  double learning_rate = 2e-4;
  /// Adam steps per network per update.
  int rounds = 10;
  /// Minibatch size per step; 0 uses the full batch.
  Eigen::Index minibatch = 0;
};

struct CriticUpdateReport {
  /// Full-batch MSE before and after, indexed by CriticKind.
  std::array<double, 3> loss_before{};
  std::array<double, 3> loss_after{};
  int steps = 0;
};

using CriticOptimizers = std::array<Adam, 3>;

CriticOptimizers make_critic_optimizers(double learning_rate);

/// MSE regression of all three critics onto fixed targets. Throws
/// NumericalError on a non-finite loss or gradient.
CriticUpdateReport update_critics(CriticSet& critics, CriticOptimizers& optimizers, const Eigen::MatrixXd& states,
                                  const RetraceTargets& targets, const CriticTrainConfig& cfg, std::mt19937_64& rng);

}  // namespace offtrc

#endif  // OFFTRC_TRC_CRITIC_UPDATE_HPP
