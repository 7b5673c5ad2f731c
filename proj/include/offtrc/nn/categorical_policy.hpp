#ifndef OFFTRC_NN_CATEGORICAL_POLICY_HPP
#define OFFTRC_NN_CATEGORICAL_POLICY_HPP

#include "offtrc/nn/policy.hpp"

namespace offtrc {

/// Softmax over MLP logits. With no hidden layers and one-hot states this is a
/// tabular policy parameterized by a logit table.
class CategoricalPolicy final : public Policy {
 public:
  explicit CategoricalPolicy(Mlp logits);
  static CategoricalPolicy make(Eigen::Index obs_dim, Eigen::Index num_actions, const std::vector<Eigen::Index>& hidden,
                                std::mt19937_64& rng);

  std::unique_ptr<Policy> clone() const override { return std::make_unique<CategoricalPolicy>(*this); }
  std::string kind() const override { return "categorical"; }
  const Mlp& network() const override { return logits_; }

  Eigen::Index num_params() const override { return logits_.num_params(); }
  Eigen::VectorXd params() const override { return logits_.params(); }
  void set_params(const Eigen::VectorXd& theta) override { logits_.set_params(theta); }
  Eigen::Index observation_dim() const override { return logits_.input_dim(); }
  Eigen::Index num_actions() const { return logits_.output_dim(); }

  /// Action probabilities, one column per state.
  Eigen::MatrixXd probabilities(const Eigen::MatrixXd& states) const;

  DistributionBatch distribution(const Eigen::MatrixXd& states) const override;
  Eigen::VectorXd log_prob(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions) const override;
  Eigen::VectorXd grad_log_prob(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions,
                                const Eigen::VectorXd& weights) const override;
  double mean_kl(const Eigen::MatrixXd& states, const DistributionBatch& old) const override;
  Eigen::VectorXd mean_kl_grad(const Eigen::MatrixXd& states, const DistributionBatch& old) const override;
  LinearOperator kl_hessian(const Eigen::MatrixXd& states) const override;
  ActionSample sample(const Eigen::VectorXd& state, std::mt19937_64& rng) const override;
  Eigen::VectorXd mode(const Eigen::VectorXd& state) const override;

 private:
  Mlp logits_;
};

/// Column-wise log-softmax.
Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& logits);

}  // namespace offtrc

#endif  // OFFTRC_NN_CATEGORICAL_POLICY_HPP
