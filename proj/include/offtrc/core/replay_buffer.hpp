#ifndef OFFTRC_CORE_REPLAY_BUFFER_HPP
#define OFFTRC_CORE_REPLAY_BUFFER_HPP

#include "offtrc/core/transition.hpp"

#include <cstddef>
#include <deque>
#include <random>
#include <vector>

namespace offtrc {

struct BatchSample {
  std::vector<Trajectory> segments;
  std::size_t total_steps = 0;
  /// The buffer held fewer than the requested number of steps.
  bool short_batch = false;
};

/// FIFO store of trajectory segments bounded by a total step count.
///
/// Eviction is oldest-first and trims the front of the oldest segment step by
/// step, so the stored data is always a suffix of the append stream and every
/// stored segment stays contiguous.
///
/// Not synchronized: writes must be serialized by the caller and never overlap
/// with sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void append(const Trajectory& segment);
  void append(const std::vector<Trajectory>& segments);

  /// Whole segments drawn uniformly without replacement until the cumulative
  /// length first reaches `batch_steps`.
  BatchSample sample(std::size_t batch_steps, std::mt19937_64& rng) const;

  std::size_t capacity() const { return capacity_; }
  std::size_t total_steps() const { return total_steps_; }
  std::size_t num_segments() const { return segments_.size(); }
  bool empty() const { return total_steps_ == 0; }
  const std::deque<Trajectory>& segments() const { return segments_; }

 private:
  void evict();

  std::size_t capacity_;
  std::size_t total_steps_ = 0;
  std::deque<Trajectory> segments_;
};

}  // namespace offtrc

#endif  // OFFTRC_CORE_REPLAY_BUFFER_HPP
