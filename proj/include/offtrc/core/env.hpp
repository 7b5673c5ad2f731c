#ifndef OFFTRC_CORE_ENV_HPP
#define OFFTRC_CORE_ENV_HPP

#include <Eigen/Core>

#include <cstddef>
#include <memory>
#include <random>
#include <string>

namespace offtrc {

struct StepResult {
  Eigen::VectorXd next_state;
  double reward = 0.0;
  double cost = 0.0;
  bool terminal = false;
  /// Episode hit the step limit; the next state is still a valid bootstrap point.
  bool truncated = false;
};

/// Episodic environment with a nonnegative per-step cost.
///
/// Instances are independent; each owns its episode state and draws all
/// randomness from the generator passed in.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string id() const = 0;
  virtual Eigen::Index observation_dim() const = 0;
  /// Continuous action dimension, or 1 for discrete actions.
  virtual Eigen::Index action_dim() const = 0;
  /// Number of discrete actions, 0 for continuous control.
  virtual Eigen::Index num_discrete_actions() const { return 0; }
  virtual std::size_t max_episode_steps() const = 0;

  virtual Eigen::VectorXd reset(std::mt19937_64& rng) = 0;
  virtual StepResult step(const Eigen::VectorXd& action, std::mt19937_64& rng) = 0;
};

/// "pointnav" or "tabular:<seed>". Throws std::invalid_argument otherwise.
std::unique_ptr<Environment> make_environment(const std::string& id);

}  // namespace offtrc

#endif  // OFFTRC_CORE_ENV_HPP
