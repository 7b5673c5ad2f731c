#ifndef OFFTRC_CORE_METRICS_HPP
#define OFFTRC_CORE_METRICS_HPP

#include <cstddef>
#include <span>

namespace offtrc {

struct EpisodeMetrics {
  double reward_sum = 0.0;
  std::size_t cv_count = 0;
  std::size_t length = 0;
  /// cv_count / length
  double cost_rate = 0.0;
  double score = 0.0;
};

/// reward_sum / (1 + cv_count)
inline double score(double reward_sum, std::size_t cv_count) {
  return reward_sum / (1.0 + static_cast<double>(cv_count));
}

/// Per-step accumulator for one episode.
class EpisodeTracker {
 public:
  void add(double reward, double cost);
  EpisodeMetrics finish() const;
  void reset() { *this = EpisodeTracker{}; }
  std::size_t length() const { return length_; }

 private:
  double reward_sum_ = 0.0;
  std::size_t cv_count_ = 0;
  std::size_t length_ = 0;
};

EpisodeMetrics episode_metrics(std::span<const double> rewards, std::span<const double> costs);

}  // namespace offtrc

#endif  // OFFTRC_CORE_METRICS_HPP
