#ifndef OFFTRC_TRC_POLICY_UPDATE_HPP
#define OFFTRC_TRC_POLICY_UPDATE_HPP

#include "offtrc/nn/policy.hpp"
#include "offtrc/trc/config.hpp"
#include "offtrc/trc/lqclp.hpp"
#include "offtrc/trc/surrogate.hpp"
#include "offtrc/trc/trust_region.hpp"

namespace offtrc {

struct UpdateDiagnostics {
  double cost_mean = 0.0;    // J_C(pi)
  double cost_square = 0.0;  // J_S(pi)
  double approx_cvar = 0.0;
  double c_slack = 0.0;
  TrustRegionState trust_region;
  double measured_kl = 0.0;
  double lambda = 0.0;
  double nu = 0.0;
  bool recovery = false;
  bool accepted = false;
  bool alarm = false;
  bool variance_floored = false;
  int backtracks = 0;
  double step_fraction = 0.0;
  LqclpCase which = LqclpCase::Inactive;
  /// Surrogate values at the accepted parameters (or at pi if rejected).
  SurrogatePoint after;
};

/// mean_i (log mu_i - log pi(a_i|s_i)), an estimate of KL(mu || pi) from
/// actions drawn by mu, clamped at 0.
double behavior_kl_estimate(const Policy& policy, const PolicyBatch& batch);

/// One constrained trust-region step on `policy`, in place.
///
/// Builds g and b from the surrogates, shrinks the budget by delta_old,
/// solves the linear/quadratic subproblem (or the recovery step when it is
/// infeasible) and backtracks by halving. A step is accepted when the batch
/// mean KL is within delta - delta_old and
///   - recovery: the surrogate CVaR decreases;
///   - starting feasible: surrogate objective improves and CVaR stays below
///     the threshold;
///   - starting infeasible but solvable: the surrogate CVaR decreases;
///   - unconstrained: the surrogate objective improves.
/// Otherwise the parameters are left unchanged.
UpdateDiagnostics policy_update(Policy& policy, const SurrogateModel& model, const UpdateConfig& cfg);

}  // namespace offtrc

#endif  // OFFTRC_TRC_POLICY_UPDATE_HPP
