#ifndef OFFTRC_CORE_TABULAR_ENV_HPP
#define OFFTRC_CORE_TABULAR_ENV_HPP

#include "offtrc/core/env.hpp"
#include "offtrc/oracle/tabular_cmdp.hpp"

#include <cstdint>

namespace offtrc {

/// Samples a TabularCMDP. States are observed one-hot; the action is a
/// one-element vector holding the index.
class TabularEnv final : public Environment {
 public:
  TabularEnv(oracle::TabularCMDP<double> model, std::size_t max_steps, std::string id = "tabular");

  /// The random instance behind the id "tabular:<seed>".
  static TabularEnv from_seed(std::uint64_t seed);

  std::string id() const override { return id_; }
  Eigen::Index observation_dim() const override { return model_.num_states; }
  Eigen::Index action_dim() const override { return 1; }
  Eigen::Index num_discrete_actions() const override { return model_.num_actions; }
  std::size_t max_episode_steps() const override { return max_steps_; }

  Eigen::VectorXd reset(std::mt19937_64& rng) override;
  StepResult step(const Eigen::VectorXd& action, std::mt19937_64& rng) override;

  const oracle::TabularCMDP<double>& model() const { return model_; }
  Eigen::Index state() const { return state_; }
  Eigen::VectorXd one_hot(Eigen::Index s) const;
  /// Index of the hot entry of an observation.
  static Eigen::Index decode(const Eigen::VectorXd& observation);

 private:
  oracle::TabularCMDP<double> model_;
  std::size_t max_steps_;
  std::string id_;
  Eigen::Index state_ = 0;
  std::size_t steps_ = 0;
};

}  // namespace offtrc

#endif  // OFFTRC_CORE_TABULAR_ENV_HPP
