#ifndef OFFTRC_NN_GAUSSIAN_POLICY_HPP
#define OFFTRC_NN_GAUSSIAN_POLICY_HPP

#include "offtrc/nn/policy.hpp"

namespace offtrc {

/// Diagonal Gaussian with an MLP mean and state-independent log-deviations.
///
/// Parameter layout: [mean network | log_std]. Log-deviations are clamped to
/// [kMinLogStd, kMaxLogStd] whenever they are written. Densities are those of
/// the unsquashed Gaussian; environments clip actions at their boundary.
class GaussianPolicy final : public Policy {
 public:
  static constexpr double kMinLogStd = -5.0;
  static constexpr double kMaxLogStd = 2.0;

  GaussianPolicy(Mlp mean, Eigen::VectorXd log_std);
  /// obs -> hidden... -> action_dim, initialized from rng.
  static GaussianPolicy make(Eigen::Index obs_dim, Eigen::Index action_dim, const std::vector<Eigen::Index>& hidden,
                             double init_log_std, std::mt19937_64& rng);

  std::unique_ptr<Policy> clone() const override { return std::make_unique<GaussianPolicy>(*this); }
  std::string kind() const override { return "gaussian"; }
  const Mlp& network() const override { return mean_; }

  Eigen::Index num_params() const override { return mean_.num_params() + log_std_.size(); }
  Eigen::VectorXd params() const override;
  void set_params(const Eigen::VectorXd& theta) override;
  Eigen::Index observation_dim() const override { return mean_.input_dim(); }
  Eigen::Index action_dim() const { return mean_.output_dim(); }
  const Eigen::VectorXd& log_std() const { return log_std_; }

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
  Mlp mean_;
  Eigen::VectorXd log_std_;
};

/// Closed-form KL(N(m0, s0) || N(m1, s1)) for diagonal Gaussians.
double gaussian_kl(const Eigen::VectorXd& mean0, const Eigen::VectorXd& log_std0, const Eigen::VectorXd& mean1,
                   const Eigen::VectorXd& log_std1);

}  // namespace offtrc

#endif  // OFFTRC_NN_GAUSSIAN_POLICY_HPP
