#include "offtrc/core/replay_buffer.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace offtrc {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::append(const Trajectory& segment) {
  if (segment.empty()) return;
  for (const auto& t : segment.transitions)
    if (!(t.behavior_prob > 0.0)) throw std::invalid_argument("ReplayBuffer: transition without behavior probability");
  segments_.push_back(segment);
  total_steps_ += segment.size();
  evict();
}

void ReplayBuffer::append(const std::vector<Trajectory>& segments) {
  for (const auto& s : segments) append(s);
}

void ReplayBuffer::evict() {
  while (total_steps_ > capacity_) {
    auto& oldest = segments_.front();
    const std::size_t excess = total_steps_ - capacity_;
    if (oldest.size() <= excess) {
      total_steps_ -= oldest.size();
      segments_.pop_front();
    } else {
      oldest.transitions.erase(oldest.transitions.begin(),
                               oldest.transitions.begin() + static_cast<std::ptrdiff_t>(excess));
      total_steps_ -= excess;
    }
  }
}

BatchSample ReplayBuffer::sample(std::size_t batch_steps, std::mt19937_64& rng) const {
  if (segments_.empty()) throw std::logic_error("ReplayBuffer::sample: buffer is empty");
  BatchSample out;
  if (total_steps_ < batch_steps) {
    out.segments.assign(segments_.begin(), segments_.end());
    out.total_steps = total_steps_;
    out.short_batch = true;
    return out;
  }
  std::vector<std::size_t> order(segments_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: draw until the batch is full.
  for (std::size_t i = 0; i < order.size() && out.total_steps < batch_steps; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
    const auto& seg = segments_[order[i]];
    out.segments.push_back(seg);
    out.total_steps += seg.size();
  }
  return out;
}

}  // namespace offtrc
