#ifndef OFFTRC_TRC_RETRACE_HPP
#define OFFTRC_TRC_RETRACE_HPP

#include "offtrc/nn/critics.hpp"
#include "offtrc/nn/policy.hpp"
#include "offtrc/trc/batch.hpp"

#include <Eigen/Core>

namespace offtrc {

/// V, V_C and S_C evaluated at a set of states.
struct CriticValues {
  Eigen::VectorXd value;
  Eigen::VectorXd cost_value;
  Eigen::VectorXd square;
};

struct RetraceTargets {
  Eigen::VectorXd value;
  Eigen::VectorXd cost_value;
  Eigen::VectorXd square;
  /// min(1, pi(a_t|s_t) / mu_t) per column.
  Eigen::VectorXd truncated_ratio;
};

/// Backward retrace recursion over every segment of `batch`.
///
/// `at_next` holds critic outputs at batch.next_states. Within a segment
///   target_t = r_t + gamma [(1 - lambda rho_{t+1}) V(s_{t+1}) + lambda rho_{t+1} target_{t+1}]
/// which is the usual r + gamma V' + gamma lambda rho (target' - V') written so
/// that lambda rho = 1 reproduces lambda-returns bit for bit. The square target
/// uses c^2 + 2 gamma c V_C(s') + gamma^2 [...]. Terminal steps drop every
/// bootstrap term; the last step of a non-terminal segment has no trace term.
RetraceTargets retrace_targets(const TransitionBatch& batch, const CriticValues& at_next,
                               const Eigen::VectorXd& truncated_ratio, double lambda,
                               double gamma);

/// Truncated ratios min(1, pi/mu) for the batch under `policy`.
Eigen::VectorXd truncated_ratios(const Policy& policy, const TransitionBatch& batch);

/// Critic outputs at batch states, and at next states (reusing the state
/// values inside a segment, evaluating next_states only at segment ends).
struct BatchCriticValues {
  CriticValues at_state;
  CriticValues at_next;
};
BatchCriticValues evaluate_critics(const CriticSet& critics, const TransitionBatch& batch);

/// Retrace targets with frozen critics and the given policy. With
/// `ratios_one` every truncated ratio is 1 (treats the data as on-policy).
RetraceTargets retrace_targets(const TransitionBatch& batch, const CriticSet& critics, const Policy& policy,
                               double lambda, double gamma, bool ratios_one = false);

}  // namespace offtrc

#endif  // OFFTRC_TRC_RETRACE_HPP
