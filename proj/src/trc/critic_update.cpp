#include "offtrc/trc/critic_update.hpp"

#include "offtrc/nn/mlp.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace offtrc {

CriticOptimizers make_critic_optimizers(double learning_rate) {
  CriticOptimizers out;
  for (auto& a : out) a.learning_rate = learning_rate;
  return out;
}

namespace {

const Eigen::VectorXd& target_of(const RetraceTargets& t, CriticKind kind) {
  switch (kind) {
    case CriticKind::Value: return t.value;
    case CriticKind::CostValue: return t.cost_value;
    case CriticKind::CostSquare: return t.square;
  }
  throw std::logic_error("target_of");
}

}  // namespace

CriticUpdateReport update_critics(CriticSet& critics, CriticOptimizers& optimizers, const Eigen::MatrixXd& states,
                                  const RetraceTargets& targets, const CriticTrainConfig& cfg, std::mt19937_64& rng) {
  const Eigen::Index n = states.cols();
  if (n == 0) throw std::invalid_argument("update_critics: empty batch");
  CriticUpdateReport report;
  const Eigen::Index mb = cfg.minibatch > 0 && cfg.minibatch < n ? cfg.minibatch : n;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::size_t cursor = order.size();
  Eigen::MatrixXd sub_states(states.rows(), mb);
  std::array<Eigen::VectorXd, 3> sub_targets;
  for (auto& t : sub_targets) t.resize(mb);

  for (const CriticKind kind : kAllCritics) {
    const auto i = static_cast<std::size_t>(kind);
    report.loss_before[i] = critics.mse(kind, states, target_of(targets, kind)).value;
    if (!std::isfinite(report.loss_before[i])) throw NumericalError("update_critics: non-finite loss", -1);
  }

  for (int round = 0; round < cfg.rounds; ++round) {
    const Eigen::MatrixXd* x = &states;
    std::array<const Eigen::VectorXd*, 3> y{&targets.value, &targets.cost_value, &targets.square};
    if (mb < n) {
      for (Eigen::Index j = 0; j < mb; ++j) {
        if (cursor == order.size()) {
          std::shuffle(order.begin(), order.end(), rng);
          cursor = 0;
        }
        const Eigen::Index k = order[cursor++];
        sub_states.col(j) = states.col(k);
        sub_targets[0][j] = targets.value[k];
        sub_targets[1][j] = targets.cost_value[k];
        sub_targets[2][j] = targets.square[k];
      }
      x = &sub_states;
      y = {&sub_targets[0], &sub_targets[1], &sub_targets[2]};
    }
    for (const CriticKind kind : kAllCritics) {
      const auto i = static_cast<std::size_t>(kind);
      const MseLoss loss = critics.mse(kind, *x, *y[i]);
      if (!std::isfinite(loss.value) || !loss.grad.allFinite())
        throw NumericalError(std::string("update_critics: non-finite loss for ") + critic_name(kind), -1);
      Mlp& net = critics.net(kind);
      net.set_params(net.params() + optimizers[i].step(loss.grad));
    }
    ++report.steps;
  }

  for (const CriticKind kind : kAllCritics) {
    const auto i = static_cast<std::size_t>(kind);
    report.loss_after[i] = critics.mse(kind, states, target_of(targets, kind)).value;
  }
  return report;
}

}  // namespace offtrc
