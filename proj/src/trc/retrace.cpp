#include "offtrc/trc/retrace.hpp"

#include "offtrc/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace offtrc {

RetraceTargets retrace_targets(const TransitionBatch& batch, const CriticValues& at_next,
                               const Eigen::VectorXd& truncated_ratio, double lambda,
                               double gamma) {
  const Eigen::Index n = batch.size();
  if (truncated_ratio.size() != n || at_next.value.size() != n || at_next.cost_value.size() != n ||
      at_next.square.size() != n)
    throw std::invalid_argument("retrace_targets: size mismatch");
  RetraceTargets out;
  out.value.resize(n);
  out.cost_value.resize(n);
  out.square.resize(n);
  out.truncated_ratio = truncated_ratio;
  const double g2 = gamma * gamma;
  for (std::size_t k = 0; k < batch.num_segments(); ++k) {
    for (Eigen::Index t = batch.end[k] - 1; t >= batch.begin[k]; --t) {
      const double r = batch.rewards[t];
      const double c = batch.costs[t];
      if (batch.terminal[static_cast<std::size_t>(t)]) {
        out.value[t] = r;
        out.cost_value[t] = c;
        out.square[t] = c * c;
        continue;
      }
      const double v = at_next.value[t];
      const double vc = at_next.cost_value[t];
      const double vs = at_next.square[t];
      if (t + 1 == batch.end[k]) {
        out.value[t] = r + gamma * v;
        out.cost_value[t] = c + gamma * vc;
        out.square[t] = c * c + 2.0 * gamma * c * vc + g2 * vs;
        continue;
      }
      const double trace = lambda * truncated_ratio[t + 1];
      out.value[t] = r + gamma * ((1.0 - trace) * v + trace * out.value[t + 1]);
      out.cost_value[t] = c + gamma * ((1.0 - trace) * vc + trace * out.cost_value[t + 1]);
      out.square[t] = c * c + 2.0 * gamma * c * vc + g2 * ((1.0 - trace) * vs + trace * out.square[t + 1]);
    }
  }
  if (!out.value.allFinite() || !out.cost_value.allFinite() || !out.square.allFinite())
    throw NumericalError("retrace_targets: non-finite target", -1);
  return out;
}

Eigen::VectorXd truncated_ratios(const Policy& policy, const TransitionBatch& batch) {
  const Eigen::VectorXd logp = policy.log_prob(batch.states, batch.actions);
  Eigen::VectorXd out(batch.size());
  for (Eigen::Index i = 0; i < batch.size(); ++i) {
    const double log_ratio = logp[i] - std::log(batch.behavior_prob[i]);
    out[i] = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
  }
  return out;
}

BatchCriticValues evaluate_critics(const CriticSet& critics, const TransitionBatch& batch) {
  const Eigen::Index n = batch.size();
  std::vector<Eigen::Index> ends;
  for (std::size_t k = 0; k < batch.num_segments(); ++k) ends.push_back(batch.end[k] - 1);
  Eigen::MatrixXd tail(batch.next_states.rows(), static_cast<Eigen::Index>(ends.size()));
  for (std::size_t j = 0; j < ends.size(); ++j) tail.col(static_cast<Eigen::Index>(j)) = batch.next_states.col(ends[j]);

  BatchCriticValues out;
  const auto fill = [&](CriticKind kind, Eigen::VectorXd& here, Eigen::VectorXd& next) {
    here = critics.evaluate(kind, batch.states);
    const Eigen::VectorXd tail_values = critics.evaluate(kind, tail);
    next.resize(n);
    if (n > 1) next.head(n - 1) = here.tail(n - 1);
    for (std::size_t j = 0; j < ends.size(); ++j) next[ends[j]] = tail_values[static_cast<Eigen::Index>(j)];
  };
  fill(CriticKind::Value, out.at_state.value, out.at_next.value);
  fill(CriticKind::CostValue, out.at_state.cost_value, out.at_next.cost_value);
  fill(CriticKind::CostSquare, out.at_state.square, out.at_next.square);
  return out;
}

RetraceTargets retrace_targets(const TransitionBatch& batch, const CriticSet& critics, const Policy& policy,
                               double lambda, double gamma, bool ratios_one) {
  const auto values = evaluate_critics(critics, batch);
  const Eigen::VectorXd rho = ratios_one ? Eigen::VectorXd::Ones(batch.size()) : truncated_ratios(policy, batch);
  return retrace_targets(batch, values.at_next, rho, lambda, gamma);
}

}  // namespace offtrc
