#ifndef OFFTRC_HARNESS_AGENT_HPP
#define OFFTRC_HARNESS_AGENT_HPP

#include "offtrc/core/env.hpp"
#include "offtrc/harness/train_config.hpp"
#include "offtrc/nn/critics.hpp"
#include "offtrc/nn/policy.hpp"

#include <memory>
#include <random>
#include <string>

namespace offtrc {

/// Everything a checkpoint restores: policy, critics, and progress counters.
struct Agent {
  std::string env_id;
  std::unique_ptr<Policy> policy;
  CriticSet critics;
  int epoch = 0;
  long env_steps = 0;
  long cv_total = 0;

  Agent() = default;
  Agent(const Agent& other);
  Agent& operator=(const Agent& other);
  Agent(Agent&&) = default;
  Agent& operator=(Agent&&) = default;
};

/// Gaussian policy for continuous environments, categorical for discrete ones.
Agent make_agent(const TrainConfig& cfg, const Environment& env, std::mt19937_64& rng);

/// JSON checkpoint; `config_text` is stored verbatim when non-empty.
void save_checkpoint(const Agent& agent, const std::string& path, const std::string& config_text = {});
Agent load_checkpoint(const std::string& path);

}  // namespace offtrc

#endif  // OFFTRC_HARNESS_AGENT_HPP
