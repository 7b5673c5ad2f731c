#include "offtrc/harness/evaluate.hpp"

#include "offtrc/core/env.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace offtrc {

namespace {

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = sd = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double x : v) sd += (x - mean) * (x - mean);
  sd = v.size() > 1 ? std::sqrt(sd / static_cast<double>(v.size() - 1)) : 0.0;
}

}  // namespace

EvalReport evaluate(const Agent& agent, const std::string& env_id, int episodes, std::uint64_t seed, double gamma) {
  if (!agent.policy) throw std::invalid_argument("evaluate: agent has no policy");
  if (episodes <= 0) throw std::invalid_argument("evaluate: episodes must be positive");
  auto env = make_environment(env_id);
  const bool discrete = env->num_discrete_actions() > 0;
  if (env->observation_dim() != agent.policy->observation_dim() || discrete != (agent.policy->kind() == "categorical"))
    throw std::invalid_argument("evaluate: environment " + env_id + " does not match the checkpoint");
  if (!agent.env_id.empty() && agent.env_id != env->id())
    throw std::invalid_argument("evaluate: checkpoint was trained on " + agent.env_id + ", not " + env->id());

  std::mt19937_64 rng(seed);
  EvalReport rep;
  std::vector<double> rewards, cvs, scores;
  for (int e = 0; e < episodes; ++e) {
    Eigen::VectorXd s = env->reset(rng);
    EpisodeTracker tracker;
    double disc = 1.0, dr = 0.0, dc = 0.0;
    for (std::size_t t = 0; t < env->max_episode_steps(); ++t) {
      const Eigen::VectorXd a = discrete ? agent.policy->sample(s, rng).action : agent.policy->mode(s);
      StepResult r = env->step(a, rng);
      tracker.add(r.reward, r.cost);
      dr += disc * r.reward;
      dc += disc * r.cost;
      disc *= gamma;
      s = std::move(r.next_state);
      if (r.terminal || r.truncated) break;
    }
    const EpisodeMetrics m = tracker.finish();
    rep.episodes.push_back(m);
    rewards.push_back(m.reward_sum);
    cvs.push_back(static_cast<double>(m.cv_count));
    scores.push_back(m.score);
    rep.discounted_rewards.push_back(dr);
    rep.discounted_costs.push_back(dc);
  }
  mean_std(rewards, rep.mean_reward_sum, rep.std_reward_sum);
  mean_std(cvs, rep.mean_cv, rep.std_cv);
  mean_std(scores, rep.mean_score, rep.std_score);
  double unused = 0.0;
  mean_std(rep.discounted_rewards, rep.mean_discounted_reward, unused);
  mean_std(rep.discounted_costs, rep.mean_discounted_cost, unused);
  return rep;
}

}  // namespace offtrc
