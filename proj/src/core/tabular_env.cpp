#include "offtrc/core/tabular_env.hpp"

#include "offtrc/core/point_nav.hpp"
#include "offtrc/oracle/random_instance.hpp"

#include <stdexcept>

namespace offtrc {

TabularEnv::TabularEnv(oracle::TabularCMDP<double> model, std::size_t max_steps, std::string id)
    : model_(std::move(model)), max_steps_(max_steps), id_(std::move(id)) {
  model_.validate();
  if (max_steps_ == 0) throw std::invalid_argument("TabularEnv: max_steps must be positive");
}

TabularEnv TabularEnv::from_seed(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  oracle::InstanceOptions opt;
  opt.min_states = opt.max_states = 5;
  opt.min_actions = opt.max_actions = 3;
  opt.gammas = {0.9};
  return TabularEnv(oracle::random_cmdp<double>(rng, opt), 200, "tabular:" + std::to_string(seed));
}

Eigen::VectorXd TabularEnv::one_hot(Eigen::Index s) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(model_.num_states);
  v(s) = 1.0;
  return v;
}

Eigen::Index TabularEnv::decode(const Eigen::VectorXd& observation) {
  Eigen::Index s = 0;
  observation.maxCoeff(&s);
  return s;
}

namespace {
Eigen::Index sample_index(const Eigen::Ref<const Eigen::RowVectorXd>& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs(i);
    if (u < acc) return i;
  }
  return probs.size() - 1;
}
}  // namespace

Eigen::VectorXd TabularEnv::reset(std::mt19937_64& rng) {
  state_ = sample_index(model_.initial.transpose(), rng);
  steps_ = 0;
  return one_hot(state_);
}

StepResult TabularEnv::step(const Eigen::VectorXd& action, std::mt19937_64& rng) {
  if (action.size() != 1) throw std::invalid_argument("TabularEnv::step: action must hold one index");
  const auto a = static_cast<Eigen::Index>(action(0));
  if (a < 0 || a >= model_.num_actions) throw std::invalid_argument("TabularEnv::step: action out of range");
  const auto row = model_.row(state_, a);
  const Eigen::Index next = sample_index(model_.transition.row(row), rng);
  StepResult out;
  out.reward = model_.reward(row, next);
  out.cost = model_.cost(row, next);
  state_ = next;
  ++steps_;
  out.truncated = steps_ >= max_steps_;
  out.next_state = one_hot(state_);
  return out;
}

std::unique_ptr<Environment> make_environment(const std::string& id) {
  if (id == "pointnav") return std::make_unique<PointNavEnv>();
  const std::string prefix = "tabular:";
  if (id.rfind(prefix, 0) == 0) {
    const std::string digits = id.substr(prefix.size());
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("make_environment: bad tabular seed in '" + id + "'");
    return std::make_unique<TabularEnv>(TabularEnv::from_seed(std::stoull(digits)));
  }
  throw std::invalid_argument("make_environment: unknown environment '" + id + "'");
}

}  // namespace offtrc
