#include "offtrc/nn/categorical_policy.hpp"

#include <cmath>
#include <stdexcept>

namespace offtrc {

Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& logits) {
  const Eigen::RowVectorXd top = logits.colwise().maxCoeff();
  Eigen::MatrixXd shifted = logits.rowwise() - top;
  const Eigen::RowVectorXd lse = shifted.array().exp().colwise().sum().log().matrix();
  return shifted.rowwise() - lse;
}

namespace {
Eigen::Index action_index(const Eigen::MatrixXd& actions, Eigen::Index i, Eigen::Index num_actions) {
  const auto a = static_cast<Eigen::Index>(actions(0, i));
  if (a < 0 || a >= num_actions) throw std::invalid_argument("CategoricalPolicy: action index out of range");
  return a;
}
}  // namespace

CategoricalPolicy::CategoricalPolicy(Mlp logits) : logits_(std::move(logits)) {}

CategoricalPolicy CategoricalPolicy::make(Eigen::Index obs_dim, Eigen::Index num_actions,
                                          const std::vector<Eigen::Index>& hidden, std::mt19937_64& rng) {
  std::vector<Eigen::Index> sizes{obs_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(num_actions);
  Mlp net(sizes);
  net.initialize(rng, 0.01);
  return CategoricalPolicy(std::move(net));
}

Eigen::MatrixXd CategoricalPolicy::probabilities(const Eigen::MatrixXd& states) const {
  return log_softmax(logits_.forward(states)).array().exp().matrix();
}

DistributionBatch CategoricalPolicy::distribution(const Eigen::MatrixXd& states) const {
  return {log_softmax(logits_.forward(states)), Eigen::VectorXd()};
}

Eigen::VectorXd CategoricalPolicy::log_prob(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions) const {
  const Eigen::MatrixXd lp = log_softmax(logits_.forward(states));
  Eigen::VectorXd out(states.cols());
  for (Eigen::Index i = 0; i < states.cols(); ++i) out(i) = lp(action_index(actions, i, num_actions()), i);
  return out;
}

Eigen::VectorXd CategoricalPolicy::grad_log_prob(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions,
                                                 const Eigen::VectorXd& weights) const {
  Mlp::Tape tape;
  const Eigen::MatrixXd probs = log_softmax(logits_.forward(states, tape)).array().exp().matrix();
  // d log p_a / dz = e_a - p
  Eigen::MatrixXd d_out = -probs;
  for (Eigen::Index i = 0; i < states.cols(); ++i) d_out(action_index(actions, i, num_actions()), i) += 1.0;
  return logits_.backward(tape, d_out * weights.asDiagonal());
}

double CategoricalPolicy::mean_kl(const Eigen::MatrixXd& states, const DistributionBatch& old) const {
  const Eigen::MatrixXd lp = log_softmax(logits_.forward(states));
  const Eigen::ArrayXXd p_old = old.head.array().exp();
  return (p_old * (old.head - lp).array()).sum() / static_cast<double>(states.cols());
}

Eigen::VectorXd CategoricalPolicy::mean_kl_grad(const Eigen::MatrixXd& states, const DistributionBatch& old) const {
  Mlp::Tape tape;
  const Eigen::MatrixXd probs = log_softmax(logits_.forward(states, tape)).array().exp().matrix();
  return logits_.backward(tape, (probs - old.head.array().exp().matrix()) / static_cast<double>(states.cols()));
}

LinearOperator CategoricalPolicy::kl_hessian(const Eigen::MatrixXd& states) const {
  // Softmax Fisher at the old parameters: J^T (diag(p) - p p^T) J.
  auto tape = std::make_shared<Mlp::Tape>();
  const Eigen::MatrixXd probs = log_softmax(logits_.forward(states, *tape)).array().exp().matrix();
  const double n = static_cast<double>(states.cols());
  return [net = logits_, tape, probs, n](const Eigen::VectorXd& v) {
    const Eigen::MatrixXd jv = net.jvp(*tape, v);
    const Eigen::RowVectorXd pj = probs.cwiseProduct(jv).colwise().sum();
    const Eigen::MatrixXd d_out = probs.cwiseProduct(jv - pj.replicate(jv.rows(), 1)) / n;
    return Eigen::VectorXd(net.backward(*tape, d_out));
  };
}

ActionSample CategoricalPolicy::sample(const Eigen::VectorXd& state, std::mt19937_64& rng) const {
  const Eigen::VectorXd p = probabilities(Eigen::MatrixXd(state)).col(0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  Eigen::Index a = p.size() - 1;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p(i);
    if (u < acc) {
      a = i;
      break;
    }
  }
  return {Eigen::VectorXd::Constant(1, static_cast<double>(a)), p(a)};
}

Eigen::VectorXd CategoricalPolicy::mode(const Eigen::VectorXd& state) const {
  Eigen::Index a = 0;
  logits_.forward(state).maxCoeff(&a);
  return Eigen::VectorXd::Constant(1, static_cast<double>(a));
}

}  // namespace offtrc
