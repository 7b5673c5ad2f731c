#ifndef OFFTRC_HARNESS_EVALUATE_HPP
#define OFFTRC_HARNESS_EVALUATE_HPP

#include "offtrc/core/metrics.hpp"
#include "offtrc/harness/agent.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace offtrc {

struct EvalReport {
  std::vector<EpisodeMetrics> episodes;
  double mean_reward_sum = 0.0, std_reward_sum = 0.0;
  double mean_cv = 0.0, std_cv = 0.0;
  double mean_score = 0.0, std_score = 0.0;
  /// Discounted returns from the initial state, averaged over episodes.
  double mean_discounted_reward = 0.0;
  double mean_discounted_cost = 0.0;
  std::vector<double> discounted_rewards;
  std::vector<double> discounted_costs;
};

/// Runs `episodes` full episodes. Gaussian policies act with their mean;
/// categorical policies sample, since a tabular policy is stochastic by
/// definition. Throws std::invalid_argument when the environment does not
/// match the agent.
EvalReport evaluate(const Agent& agent, const std::string& env_id, int episodes, std::uint64_t seed,
                    double gamma = 0.99);

}  // namespace offtrc

#endif  // OFFTRC_HARNESS_EVALUATE_HPP
