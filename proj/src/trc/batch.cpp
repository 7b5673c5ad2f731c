#include "offtrc/trc/batch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace offtrc {

bool TransitionBatch::segment_last(Eigen::Index i) const {
  const auto it = std::upper_bound(begin.begin(), begin.end(), i);
  const auto k = static_cast<std::size_t>(it - begin.begin()) - 1;
  return i + 1 == end[k];
}

TransitionBatch flatten(const std::vector<Trajectory>& segments) {
  TransitionBatch out;
  Eigen::Index n = 0;
  Eigen::Index obs = -1, act = -1;
  for (const auto& seg : segments) {
    for (const auto& t : seg.transitions) {
      if (obs < 0) {
        obs = t.state.size();
        act = t.action.size();
      }
      if (t.state.size() != obs || t.next_state.size() != obs || t.action.size() != act)
        throw std::invalid_argument("flatten: inconsistent transition dimensions");
      if (!(t.behavior_prob > 0.0) || !std::isfinite(t.behavior_prob))
        throw std::invalid_argument("flatten: missing or non-positive behavior probability");
    }
    n += static_cast<Eigen::Index>(seg.size());
  }
  if (n == 0) return out;
  out.states.resize(obs, n);
  out.next_states.resize(obs, n);
  out.actions.resize(act, n);
  out.behavior_prob.resize(n);
  out.rewards.resize(n);
  out.costs.resize(n);
  out.terminal.resize(static_cast<std::size_t>(n));
  out.step_index.resize(static_cast<std::size_t>(n));
  Eigen::Index i = 0;
  for (const auto& seg : segments) {
    if (seg.empty()) continue;
    out.begin.push_back(i);
    for (const auto& t : seg.transitions) {
      out.states.col(i) = t.state;
      out.next_states.col(i) = t.next_state;
      out.actions.col(i) = t.action;
      out.behavior_prob[i] = t.behavior_prob;
      out.rewards[i] = t.reward;
      out.costs[i] = t.cost;
      out.terminal[static_cast<std::size_t>(i)] = t.terminal;
      out.step_index[static_cast<std::size_t>(i)] = t.step_index;
      ++i;
    }
    out.end.push_back(i);
  }
  return out;
}

}  // namespace offtrc
