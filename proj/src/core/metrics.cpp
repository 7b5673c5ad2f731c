#include "offtrc/core/metrics.hpp"

#include "offtrc/core/cost.hpp"

#include <stdexcept>

namespace offtrc {

void EpisodeTracker::add(double reward, double cost) {
  reward_sum_ += reward;
  cv_count_ += static_cast<std::size_t>(count_cv(cost));
  ++length_;
}

EpisodeMetrics EpisodeTracker::finish() const {
  EpisodeMetrics m;
  m.reward_sum = reward_sum_;
  m.cv_count = cv_count_;
  m.length = length_;
  m.cost_rate = length_ > 0 ? static_cast<double>(cv_count_) / static_cast<double>(length_) : 0.0;
  m.score = score(reward_sum_, cv_count_);
  return m;
}

EpisodeMetrics episode_metrics(std::span<const double> rewards, std::span<const double> costs) {
  if (rewards.size() != costs.size()) throw std::invalid_argument("episode_metrics: length mismatch");
  EpisodeTracker tracker;
  for (std::size_t i = 0; i < rewards.size(); ++i) tracker.add(rewards[i], costs[i]);
  return tracker.finish();
}

}  // namespace offtrc
