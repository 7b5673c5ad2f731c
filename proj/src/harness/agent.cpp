#include "offtrc/harness/agent.hpp"

#include "offtrc/nn/categorical_policy.hpp"
#include "offtrc/nn/gaussian_policy.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace offtrc {

using nlohmann::json;

Agent::Agent(const Agent& other)
    : env_id(other.env_id),
      policy(other.policy ? other.policy->clone() : nullptr),
      critics(other.critics),
      epoch(other.epoch),
      env_steps(other.env_steps),
      cv_total(other.cv_total) {}

Agent& Agent::operator=(const Agent& other) {
  if (this != &other) *this = Agent(other);
  return *this;
}

namespace {

std::vector<Eigen::Index> widths(const std::vector<long>& v) { return {v.begin(), v.end()}; }

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd json_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json mlp_json(const Mlp& m) { return {{"sizes", m.layer_sizes()}, {"params", vec_json(m.params())}}; }

Mlp json_mlp(const json& j) {
  Mlp m(j.at("sizes").get<std::vector<Eigen::Index>>());
  const Eigen::VectorXd p = json_vec(j.at("params"));
  if (p.size() != m.num_params()) throw std::runtime_error("checkpoint: parameter count mismatch");
  m.set_params(p);
  return m;
}

}  // namespace

Agent make_agent(const TrainConfig& cfg, const Environment& env, std::mt19937_64& rng) {
  Agent a;
  a.env_id = env.id();
  if (env.num_discrete_actions() > 0) {
    a.policy = std::make_unique<CategoricalPolicy>(
        CategoricalPolicy::make(env.observation_dim(), env.num_discrete_actions(), widths(cfg.policy_hidden), rng));
  } else {
    a.policy = std::make_unique<GaussianPolicy>(GaussianPolicy::make(
        env.observation_dim(), env.action_dim(), widths(cfg.policy_hidden), cfg.init_log_std, rng));
  }
  a.critics = CriticSet::make(env.observation_dim(), widths(cfg.critic_hidden), rng,
                              {cfg.value_scale, cfg.cost_scale, cfg.square_scale});
  return a;
}

void save_checkpoint(const Agent& agent, const std::string& path, const std::string& config_text) {
  json j;
  j["format"] = "offtrc-checkpoint-1";
  j["env"] = agent.env_id;
  j["epoch"] = agent.epoch;
  j["env_steps"] = agent.env_steps;
  j["cv_total"] = agent.cv_total;
  j["policy"]["kind"] = agent.policy->kind();
  j["policy"]["network"] = mlp_json(agent.policy->network());
  if (const auto* g = dynamic_cast<const GaussianPolicy*>(agent.policy.get())) j["policy"]["log_std"] = vec_json(g->log_std());
  for (const CriticKind k : kAllCritics) {
    j["critics"][critic_name(k)] = mlp_json(agent.critics.net(k));
    j["critics"]["scales"].push_back(agent.critics.scale(k));
  }
  if (!config_text.empty()) j["config"] = config_text;

  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write checkpoint " + path);
    out << j.dump() << "\n";
  }
  std::filesystem::rename(tmp, path);
}

Agent load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("checkpoint " + path + " is not valid JSON: " + e.what());
  }
  if (j.value("format", "") != "offtrc-checkpoint-1") throw std::runtime_error("checkpoint: unknown format");
  Agent a;
  a.env_id = j.at("env").get<std::string>();
  a.epoch = j.at("epoch").get<int>();
  a.env_steps = j.at("env_steps").get<long>();
  a.cv_total = j.value("cv_total", 0L);
  const auto& jp = j.at("policy");
  const std::string kind = jp.at("kind").get<std::string>();
  if (kind == "gaussian")
    a.policy = std::make_unique<GaussianPolicy>(json_mlp(jp.at("network")), json_vec(jp.at("log_std")));
  else if (kind == "categorical")
    a.policy = std::make_unique<CategoricalPolicy>(json_mlp(jp.at("network")));
  else
    throw std::runtime_error("checkpoint: unknown policy kind " + kind);
  const auto& jc = j.at("critics");
  const auto scales = jc.at("scales").get<std::vector<double>>();
  if (scales.size() != 3) throw std::runtime_error("checkpoint: expected three critic scales");
  a.critics = CriticSet(json_mlp(jc.at(critic_name(CriticKind::Value))), json_mlp(jc.at(critic_name(CriticKind::CostValue))),
                        json_mlp(jc.at(critic_name(CriticKind::CostSquare))), {scales[0], scales[1], scales[2]});
  return a;
}

}  // namespace offtrc
