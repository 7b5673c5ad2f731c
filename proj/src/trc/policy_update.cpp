#include "offtrc/trc/policy_update.hpp"

#include <cmath>

namespace offtrc {

double behavior_kl_estimate(const Policy& policy, const PolicyBatch& batch) {
  const Eigen::VectorXd logp = policy.log_prob(batch.states, batch.actions);
  const double m = (batch.behavior_prob.array().log() - logp.array()).mean();
  return std::max(0.0, m);
}

UpdateDiagnostics policy_update(Policy& policy, const SurrogateModel& model, const UpdateConfig& cfg) {
  const PolicyBatch& batch = model.batch();
  UpdateDiagnostics out;
  const SurrogatePoint start = model.at_current();
  out.cost_mean = start.cost_mean;
  out.cost_square = start.cost_square;
  out.approx_cvar = start.approx_cvar;
  out.after = start;

  const double m_hat = cfg.off_policy_correction ? behavior_kl_estimate(policy, batch) : 0.0;
  out.trust_region = make_trust_region(cfg.delta, m_hat);
  const double delta_eff = out.trust_region.effective();
  if (!(delta_eff > 0.0)) return out;

  const Eigen::VectorXd theta_old = policy.params();
  const DistributionBatch old_dist = policy.distribution(batch.states);
  const LinearOperator fisher = policy.kl_hessian(batch.states);
  const double damping = cfg.damping;
  const auto hvp = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return fisher(v) + damping * v; };
  const LqclpOptions opt{cfg.cg_iters, cfg.cg_tol};

  const Eigen::VectorXd g = model.objective_gradient();
  if (!g.allFinite()) throw NumericalError("policy_update: non-finite objective gradient", -1);

  LqclpSolution<double> sol;
  if (cfg.constrained) {
    const CvarGradient cg = model.cvar_gradient();
    out.c_slack = cg.c_slack;
    out.variance_floored = cg.variance_floored;
    sol = solve_lqclp<double>(g, cg.b, hvp, delta_eff, cg.c_slack, opt);
  } else {
    out.c_slack = start.approx_cvar - model.cvar().threshold();
    const Eigen::VectorXd none = Eigen::VectorXd::Zero(g.size());
    sol = solve_lqclp<double>(g, none, hvp, delta_eff, -1.0, opt);
  }
  out.lambda = sol.lambda;
  out.nu = sol.nu;
  out.recovery = sol.recovery;
  out.alarm = sol.alarm;
  out.which = sol.which;
  if (sol.alarm || sol.direction.isZero(0.0)) return out;

  const bool start_feasible = out.c_slack <= 0.0;
  const double threshold = model.cvar().threshold();
  double fraction = 1.0;
  for (int j = 0; j < cfg.max_backtracks; ++j, fraction *= 0.5) {
    policy.set_params(theta_old + fraction * sol.direction);
    const double kl = policy.mean_kl(batch.states, old_dist);
    const SurrogatePoint p = model.evaluate(policy);
    if (!std::isfinite(kl) || !std::isfinite(p.approx_cvar) || !std::isfinite(p.objective_gain)) continue;
    bool ok = kl <= delta_eff;
    if (!cfg.constrained)
      ok = ok && p.objective_gain > 0.0;
    else if (sol.recovery || !start_feasible)
      ok = ok && p.approx_cvar < start.approx_cvar;
    else
      ok = ok && p.objective_gain > 0.0 && p.approx_cvar <= threshold;
    if (ok) {
      out.accepted = true;
      out.backtracks = j;
      out.step_fraction = fraction;
      out.measured_kl = kl;
      out.after = p;
      return out;
    }
  }
  policy.set_params(theta_old);
  out.backtracks = cfg.max_backtracks;
  return out;
}

}  // namespace offtrc
