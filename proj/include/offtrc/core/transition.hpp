#ifndef OFFTRC_CORE_TRANSITION_HPP
#define OFFTRC_CORE_TRANSITION_HPP

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace offtrc {

/// One environment step together with the density of the sampled action under
/// the policy that generated it. Discrete actions store the index as a
/// one-element vector.
struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd action;
  double behavior_prob = 1.0;
  double reward = 0.0;
  double cost = 0.0;
  Eigen::VectorXd next_state;
  bool terminal = false;
  /// Time index within the episode (t in gamma^t).
  std::size_t step_index = 0;
};

/// Contiguous run of transitions from a single episode.
///
/// A segment either ends at a terminal state, at the episode step limit
/// (`truncated`), or mid-episode when a rollout phase stopped collecting.
/// Only `terminal` zeroes the bootstrap value.
struct Trajectory {
  std::vector<Transition> transitions;
  bool truncated = false;

  std::size_t size() const { return transitions.size(); }
  bool empty() const { return transitions.empty(); }
  bool ends_terminal() const { return !empty() && transitions.back().terminal; }
};

struct CostReturn {
  double value = 0.0;
  /// Set when the trajectory was empty.
  bool empty = false;
  /// Set when the episode did not reach a terminal state, so the sum is a
  /// truncation of the full cost return.
  bool needs_bootstrap = false;
};

/// sum_t gamma^t c_t over the segment.
CostReturn cost_return(const Trajectory& traj, double gamma);

}  // namespace offtrc

#endif  // OFFTRC_CORE_TRANSITION_HPP
