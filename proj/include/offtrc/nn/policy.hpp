#ifndef OFFTRC_NN_POLICY_HPP
#define OFFTRC_NN_POLICY_HPP

#include "offtrc/nn/mlp.hpp"

#include <Eigen/Core>

#include <memory>
#include <random>
#include <string>

namespace offtrc {

/// Frozen per-state distribution parameters, one column per state.
/// Gaussian: `head` holds means and `log_std` the shared log-deviations.
/// Categorical: `head` holds log-probabilities and `log_std` is empty.
struct DistributionBatch {
  Eigen::MatrixXd head;
  Eigen::VectorXd log_std;
};

struct ActionSample {
  Eigen::VectorXd action;
  /// Density (continuous) or mass (discrete) of the action.
  double prob = 0.0;
};

/// Stochastic policy with a flat parameter vector.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::unique_ptr<Policy> clone() const = 0;
  virtual std::string kind() const = 0;
  virtual const Mlp& network() const = 0;

  virtual Eigen::Index num_params() const = 0;
  virtual Eigen::VectorXd params() const = 0;
  virtual void set_params(const Eigen::VectorXd& theta) = 0;
  virtual Eigen::Index observation_dim() const = 0;

  virtual DistributionBatch distribution(const Eigen::MatrixXd& states) const = 0;
  virtual Eigen::VectorXd log_prob(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions) const = 0;
  /// Gradient of sum_i weights_i * log pi(a_i | s_i).
  virtual Eigen::VectorXd grad_log_prob(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions,
                                        const Eigen::VectorXd& weights) const = 0;

  /// mean_i KL(old_i || pi(.|s_i)), the old distribution held constant.
  virtual double mean_kl(const Eigen::MatrixXd& states, const DistributionBatch& old) const = 0;
  virtual Eigen::VectorXd mean_kl_grad(const Eigen::MatrixXd& states, const DistributionBatch& old) const = 0;

  /// Hessian of mean_kl at the current parameters (taken as the old policy),
  /// as an operator. The forward pass is recorded once and shared by every
  /// product.
  virtual LinearOperator kl_hessian(const Eigen::MatrixXd& states) const = 0;

  virtual ActionSample sample(const Eigen::VectorXd& state, std::mt19937_64& rng) const = 0;
  /// Mean action (Gaussian) or most likely action (categorical).
  virtual Eigen::VectorXd mode(const Eigen::VectorXd& state) const = 0;
};

/// Damped KL Hessian-vector product: (H + damping I) v.
Eigen::VectorXd kl_hvp(const Policy& policy, const Eigen::MatrixXd& states, const Eigen::VectorXd& v,
                       double damping = 0.01);

}  // namespace offtrc

#endif  // OFFTRC_NN_POLICY_HPP
