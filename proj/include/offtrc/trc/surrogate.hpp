#ifndef OFFTRC_TRC_SURROGATE_HPP
#define OFFTRC_TRC_SURROGATE_HPP

#include "offtrc/nn/critics.hpp"
#include "offtrc/nn/policy.hpp"
#include "offtrc/trc/batch.hpp"
#include "offtrc/trc/config.hpp"

#include <Eigen/Core>

#include <memory>

namespace offtrc {

/// J_C(pi) and J_S(pi) estimated from a rollout of pi.
struct OnPolicyEstimates {
  double cost_mean = 0.0;
  double cost_square = 0.0;
  Eigen::Index samples = 0;
};

/// J_C = weighted mean of c_t with weights gamma^t, divided by (1 - gamma).
/// J_S = weighted mean of c_t^2 + 2 gamma c_t V_C(s_{t+1}) with weights
/// gamma^{2t}, divided by (1 - gamma^2). V_C(s') is taken as 0 at terminals.
/// t is the step index within the episode. Throws on an empty rollout.
OnPolicyEstimates estimate_onpolicy_J(const TransitionBatch& rollout, const Eigen::VectorXd& next_cost_value,
                                      double gamma);
OnPolicyEstimates estimate_onpolicy_J(const TransitionBatch& rollout, const CriticSet& critics, double gamma);

/// Samples for the surrogate expectations. Actions were drawn from `behavior`
/// (mu, or pi_old for the on-policy-style variant). `weight` and
/// `weight_square` are the sample weights of E over (d^mu, mu) and
/// (d_2^mu, mu); left empty they default to uniform 1/N.
struct PolicyBatch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::VectorXd behavior_prob;
  Eigen::VectorXd adv;
  Eigen::VectorXd adv_cost;
  Eigen::VectorXd adv_square;
  Eigen::VectorXd weight;
  Eigen::VectorXd weight_square;

  Eigen::Index size() const { return states.cols(); }
};

/// Advantages from retrace targets, A = target - critic(s), for a replay
/// batch. With `off_policy_correction` false the behavior probabilities are
/// replaced by pi_old and truncated ratios by 1.
PolicyBatch make_policy_batch(const TransitionBatch& batch, const CriticSet& critics, const Policy& policy,
                              double lambda, double gamma, bool off_policy_correction);

/// Surrogate values of a candidate policy.
struct SurrogatePoint {
  /// 1/(1-gamma) E[(pi'/mu - pi/mu) A], the surrogate objective minus J(pi).
  double objective_gain = 0.0;
  double cost_mean = 0.0;    // J_C^{mu,pi}(pi')
  double cost_square = 0.0;  // J_S^{mu,pi}(pi')
  double approx_cvar = 0.0;
};

struct CvarGradient {
  Eigen::VectorXd b;
  /// approx CVaR at pi minus the threshold.
  double c_slack = 0.0;
  double approx_cvar = 0.0;
  double sigma = 0.0;
  /// J_S - J_C^2 was at or below the floor; the square-root term was dropped.
  bool variance_floored = false;
};

/// Surrogate functions around a frozen current policy pi.
///
/// Importance ratios pi'/mu are clipped to [ratio_min, ratio_max] with zero
/// gradient outside. Each surrogate subtracts its value at pi, so the
/// surrogates equal J_C(pi), J_S(pi) exactly at pi' = pi.
class SurrogateModel {
 public:
  SurrogateModel(const Policy& current, PolicyBatch batch, OnPolicyEstimates estimates, const CVaRConfig& cvar,
                 double ratio_min = 1e-3, double ratio_max = 1e3, double variance_floor = 1e-8);

  SurrogatePoint evaluate(const Policy& candidate) const;
  SurrogatePoint at_current() const;

  /// Gradient of the surrogate objective at pi.
  Eigen::VectorXd objective_gradient() const;
  Eigen::VectorXd cost_mean_gradient() const;
  Eigen::VectorXd cost_square_gradient() const;
  /// b = grad J_C + k (grad J_S - 2 J_C grad J_C) / (2 sigma) at pi.
  CvarGradient cvar_gradient() const;

  const PolicyBatch& batch() const { return batch_; }
  const OnPolicyEstimates& estimates() const { return estimates_; }
  const CVaRConfig& cvar() const { return cvar_; }

 private:
  Eigen::VectorXd clipped_ratios(const Eigen::VectorXd& log_prob, Eigen::VectorXd* active) const;
  Eigen::VectorXd weighted_gradient(double c_obj, double c_cost, double c_square) const;

  std::unique_ptr<Policy> current_;
  PolicyBatch batch_;
  OnPolicyEstimates estimates_;
  CVaRConfig cvar_;
  double ratio_min_, ratio_max_, variance_floor_;
  Eigen::VectorXd log_behavior_;
  Eigen::VectorXd ratio_old_;
  Eigen::VectorXd active_old_;
};

}  // namespace offtrc

#endif  // OFFTRC_TRC_SURROGATE_HPP
