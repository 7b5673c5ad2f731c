#include "offtrc/trc/surrogate.hpp"

#include "offtrc/oracle/cvar.hpp"
#include "offtrc/trc/retrace.hpp"

#include <cmath>
#include <stdexcept>

namespace offtrc {

OnPolicyEstimates estimate_onpolicy_J(const TransitionBatch& rollout, const Eigen::VectorXd& next_cost_value,
                                      double gamma) {
  if (rollout.empty()) throw std::invalid_argument("estimate_onpolicy_J: empty rollout");
  if (next_cost_value.size() != rollout.size()) throw std::invalid_argument("estimate_onpolicy_J: size mismatch");
  double w1 = 0.0, w2 = 0.0, s1 = 0.0, s2 = 0.0;
  const double log_g = std::log(gamma);
  for (Eigen::Index i = 0; i < rollout.size(); ++i) {
    const double t = static_cast<double>(rollout.step_index[static_cast<std::size_t>(i)]);
    const double a = std::exp(t * log_g);
    const double a2 = a * a;
    const double c = rollout.costs[i];
    const double vc = rollout.terminal[static_cast<std::size_t>(i)] ? 0.0 : next_cost_value[i];
    w1 += a;
    s1 += a * c;
    w2 += a2;
    s2 += a2 * (c * c + 2.0 * gamma * c * vc);
  }
  OnPolicyEstimates out;
  out.samples = rollout.size();
  // Late steps of long episodes can underflow gamma^{2t}; fall back to plain means.
  out.cost_mean = (w1 > 0.0 ? s1 / w1 : rollout.costs.mean()) / (1.0 - gamma);
  if (w2 > 0.0) {
    out.cost_square = s2 / w2 / (1.0 - gamma * gamma);
  } else {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rollout.size(); ++i) {
      const double c = rollout.costs[i];
      s += c * c + 2.0 * gamma * c * (rollout.terminal[static_cast<std::size_t>(i)] ? 0.0 : next_cost_value[i]);
    }
    out.cost_square = s / static_cast<double>(rollout.size()) / (1.0 - gamma * gamma);
  }
  return out;
}

OnPolicyEstimates estimate_onpolicy_J(const TransitionBatch& rollout, const CriticSet& critics, double gamma) {
  if (rollout.empty()) throw std::invalid_argument("estimate_onpolicy_J: empty rollout");
  const auto values = evaluate_critics(critics, rollout);
  return estimate_onpolicy_J(rollout, values.at_next.cost_value, gamma);
}

PolicyBatch make_policy_batch(const TransitionBatch& batch, const CriticSet& critics, const Policy& policy,
                              double lambda, double gamma, bool off_policy_correction) {
  if (batch.empty()) throw std::invalid_argument("make_policy_batch: empty batch");
  const auto values = evaluate_critics(critics, batch);
  PolicyBatch out;
  out.states = batch.states;
  out.actions = batch.actions;
  Eigen::VectorXd rho;
  if (off_policy_correction) {
    out.behavior_prob = batch.behavior_prob;
    rho = truncated_ratios(policy, batch);
  } else {
    out.behavior_prob = policy.log_prob(batch.states, batch.actions).array().exp();
    rho = Eigen::VectorXd::Ones(batch.size());
  }
  const auto targets = retrace_targets(batch, values.at_next, rho, lambda, gamma);
  out.adv = targets.value - values.at_state.value;
  out.adv_cost = targets.cost_value - values.at_state.cost_value;
  out.adv_square = targets.square - values.at_state.square;
  return out;
}

SurrogateModel::SurrogateModel(const Policy& current, PolicyBatch batch, OnPolicyEstimates estimates,
                               const CVaRConfig& cvar, double ratio_min, double ratio_max, double variance_floor)
    : current_(current.clone()),
      batch_(std::move(batch)),
      estimates_(estimates),
      cvar_(cvar),
      ratio_min_(ratio_min),
      ratio_max_(ratio_max),
      variance_floor_(variance_floor) {
  cvar_.validate();
  const Eigen::Index n = batch_.size();
  if (n == 0) throw std::invalid_argument("SurrogateModel: empty batch");
  if (batch_.behavior_prob.size() != n || batch_.adv.size() != n || batch_.adv_cost.size() != n ||
      batch_.adv_square.size() != n)
    throw std::invalid_argument("SurrogateModel: batch size mismatch");
  if ((batch_.behavior_prob.array() <= 0.0).any())
    throw std::invalid_argument("SurrogateModel: non-positive behavior probability");
  if (batch_.weight.size() == 0) batch_.weight = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if (batch_.weight_square.size() == 0) batch_.weight_square = batch_.weight;
  log_behavior_ = batch_.behavior_prob.array().log();
  ratio_old_ = clipped_ratios(current_->log_prob(batch_.states, batch_.actions), &active_old_);
}

Eigen::VectorXd SurrogateModel::clipped_ratios(const Eigen::VectorXd& log_prob, Eigen::VectorXd* active) const {
  Eigen::VectorXd r = (log_prob - log_behavior_).array().exp();
  if (active) active->resize(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const bool inside = r[i] >= ratio_min_ && r[i] <= ratio_max_;
    if (active) (*active)[i] = inside ? 1.0 : 0.0;
    r[i] = std::clamp(r[i], ratio_min_, ratio_max_);
  }
  return r;
}

SurrogatePoint SurrogateModel::evaluate(const Policy& candidate) const {
  const Eigen::VectorXd ratio = clipped_ratios(candidate.log_prob(batch_.states, batch_.actions), nullptr);
  const Eigen::VectorXd diff = ratio - ratio_old_;
  const double g = cvar_.gamma;
  SurrogatePoint p;
  p.objective_gain = batch_.weight.cwiseProduct(diff).dot(batch_.adv) / (1.0 - g);
  p.cost_mean = estimates_.cost_mean + batch_.weight.cwiseProduct(diff).dot(batch_.adv_cost) / (1.0 - g);
  p.cost_square = estimates_.cost_square + batch_.weight_square.cwiseProduct(diff).dot(batch_.adv_square) / (1.0 - g * g);
  p.approx_cvar = oracle::gaussian_cvar(p.cost_mean, p.cost_square, cvar_.alpha, variance_floor_);
  return p;
}

SurrogatePoint SurrogateModel::at_current() const {
  SurrogatePoint p;
  p.cost_mean = estimates_.cost_mean;
  p.cost_square = estimates_.cost_square;
  p.approx_cvar = oracle::gaussian_cvar(p.cost_mean, p.cost_square, cvar_.alpha, variance_floor_);
  return p;
}

// Gradient of sum_i ratio_i (c_obj w_i A_i + c_cost w_i A_C,i + c_square w2_i A_S,i)
// at pi; grad ratio = ratio grad log pi inside the clip range.
Eigen::VectorXd SurrogateModel::weighted_gradient(double c_obj, double c_cost, double c_square) const {
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(batch_.size());
  if (c_obj != 0.0) coef += c_obj * batch_.weight.cwiseProduct(batch_.adv);
  if (c_cost != 0.0) coef += c_cost * batch_.weight.cwiseProduct(batch_.adv_cost);
  if (c_square != 0.0) coef += c_square * batch_.weight_square.cwiseProduct(batch_.adv_square);
  coef = coef.cwiseProduct(ratio_old_).cwiseProduct(active_old_);
  return current_->grad_log_prob(batch_.states, batch_.actions, coef);
}

Eigen::VectorXd SurrogateModel::objective_gradient() const {
  return weighted_gradient(1.0 / (1.0 - cvar_.gamma), 0.0, 0.0);
}

Eigen::VectorXd SurrogateModel::cost_mean_gradient() const {
  return weighted_gradient(0.0, 1.0 / (1.0 - cvar_.gamma), 0.0);
}

Eigen::VectorXd SurrogateModel::cost_square_gradient() const {
  const double g = cvar_.gamma;
  return weighted_gradient(0.0, 0.0, 1.0 / (1.0 - g * g));
}

CvarGradient SurrogateModel::cvar_gradient() const {
  const double g = cvar_.gamma;
  const double k = cvar_.k_alpha();
  const double jc = estimates_.cost_mean;
  const double var = estimates_.cost_square - jc * jc;
  CvarGradient out;
  out.variance_floored = var <= variance_floor_;
  out.sigma = std::sqrt(std::max(var, variance_floor_));
  out.approx_cvar = oracle::gaussian_cvar(jc, estimates_.cost_square, cvar_.alpha, variance_floor_);
  out.c_slack = out.approx_cvar - cvar_.threshold();
  if (k == 0.0 || out.variance_floored) {
    out.b = cost_mean_gradient();
  } else {
    const double c_cost = (1.0 - k * jc / out.sigma) / (1.0 - g);
    const double c_square = k / (2.0 * out.sigma) / (1.0 - g * g);
    out.b = weighted_gradient(0.0, c_cost, c_square);
  }
  if (!out.b.allFinite()) throw NumericalError("cvar_gradient: non-finite constraint gradient", -1);
  return out;
}

}  // namespace offtrc
