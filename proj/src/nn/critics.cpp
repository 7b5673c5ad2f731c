#include "offtrc/nn/critics.hpp"

#include <cmath>
#include <stdexcept>

namespace offtrc {

namespace {
Eigen::ArrayXd softplus(const Eigen::ArrayXd& x) {
  return x.max(0.0) + (-x.abs()).exp().log1p();
}
Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& x) { return 1.0 / (1.0 + (-x).exp()); }
}  // namespace

const char* critic_name(CriticKind kind) {
  switch (kind) {
    case CriticKind::Value: return "value";
    case CriticKind::CostValue: return "cost_value";
    case CriticKind::CostSquare: return "cost_square";
  }
  return "?";
}

CriticSet::CriticSet(Mlp value, Mlp cost_value, Mlp square, std::array<double, 3> scales)
    : nets_{std::move(value), std::move(cost_value), std::move(square)}, scales_(scales) {
  for (const auto& n : nets_)
    if (n.output_dim() != 1) throw std::invalid_argument("CriticSet: critics must have scalar output");
}

CriticSet CriticSet::make(Eigen::Index obs_dim, const std::vector<Eigen::Index>& hidden, std::mt19937_64& rng,
                          std::array<double, 3> scales) {
  std::vector<Eigen::Index> sizes{obs_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  std::array<Mlp, 3> nets{Mlp(sizes), Mlp(sizes), Mlp(sizes)};
  for (auto& n : nets) n.initialize(rng, 1.0);
  return CriticSet(std::move(nets[0]), std::move(nets[1]), std::move(nets[2]), scales);
}

Eigen::VectorXd CriticSet::evaluate(CriticKind kind, const Eigen::MatrixXd& states) const {
  const Eigen::ArrayXd raw = net(kind).forward(states).row(0).transpose().array();
  if (kind == CriticKind::CostSquare) return (scale(kind) * softplus(raw)).matrix();
  return (scale(kind) * raw).matrix();
}

MseLoss CriticSet::mse(CriticKind kind, const Eigen::MatrixXd& states, const Eigen::VectorXd& targets) const {
  if (targets.size() != states.cols()) throw std::invalid_argument("CriticSet::mse: target count mismatch");
  Mlp::Tape tape;
  const Eigen::ArrayXd raw = net(kind).forward(states, tape).row(0).transpose().array();
  const double s = scale(kind);
  const double n = static_cast<double>(states.cols());
  Eigen::ArrayXd out, d_raw;
  if (kind == CriticKind::CostSquare) {
    out = s * softplus(raw);
    d_raw = s * sigmoid(raw);
  } else {
    out = s * raw;
    d_raw = Eigen::ArrayXd::Constant(raw.size(), s);
  }
  const Eigen::ArrayXd err = out - targets.array();
  MseLoss loss;
  loss.value = err.square().mean();
  if (!std::isfinite(loss.value)) throw NumericalError("critic loss is not finite", -1);
  const Eigen::MatrixXd d_out = (2.0 / n * err * d_raw).matrix().transpose();
  loss.grad = net(kind).backward(tape, d_out);
  return loss;
}

}  // namespace offtrc
