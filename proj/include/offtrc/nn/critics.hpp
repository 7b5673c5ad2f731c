#ifndef OFFTRC_NN_CRITICS_HPP
#define OFFTRC_NN_CRITICS_HPP

#include "offtrc/nn/mlp.hpp"

#include <array>
#include <random>

namespace offtrc {

enum class CriticKind { Value = 0, CostValue = 1, CostSquare = 2 };

inline constexpr std::array<CriticKind, 3> kAllCritics{CriticKind::Value, CriticKind::CostValue,
                                                       CriticKind::CostSquare};

const char* critic_name(CriticKind kind);

struct MseLoss {
  double value = 0.0;
  Eigen::VectorXd grad;
};

/// V, V_C and S_C networks from state to scalar.
///
/// Each output is multiplied by a fixed scale; the cost-square head also
/// passes through softplus so S_C >= 0.
class CriticSet {
 public:
  CriticSet() = default;
  CriticSet(Mlp value, Mlp cost_value, Mlp square, std::array<double, 3> scales = {1.0, 1.0, 1.0});
  static CriticSet make(Eigen::Index obs_dim, const std::vector<Eigen::Index>& hidden, std::mt19937_64& rng,
                        std::array<double, 3> scales = {1.0, 1.0, 1.0});

  Mlp& net(CriticKind kind) { return nets_[static_cast<std::size_t>(kind)]; }
  const Mlp& net(CriticKind kind) const { return nets_[static_cast<std::size_t>(kind)]; }
  double scale(CriticKind kind) const { return scales_[static_cast<std::size_t>(kind)]; }
  const std::array<double, 3>& scales() const { return scales_; }

  /// Critic outputs, one per column of `states`.
  Eigen::VectorXd evaluate(CriticKind kind, const Eigen::MatrixXd& states) const;

  /// mean_i (f(s_i) - y_i)^2 and its parameter gradient.
  MseLoss mse(CriticKind kind, const Eigen::MatrixXd& states, const Eigen::VectorXd& targets) const;

 private:
  std::array<Mlp, 3> nets_;
  std::array<double, 3> scales_{1.0, 1.0, 1.0};
};

}  // namespace offtrc

#endif  // OFFTRC_NN_CRITICS_HPP
