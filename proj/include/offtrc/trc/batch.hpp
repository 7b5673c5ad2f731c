#ifndef OFFTRC_TRC_BATCH_HPP
#define OFFTRC_TRC_BATCH_HPP

#include "offtrc/core/transition.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace offtrc {

/// Column-major view of a set of trajectory segments. Segment k covers columns
/// [begin[k], end[k]).
struct TransitionBatch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::MatrixXd next_states;
  Eigen::VectorXd behavior_prob;
  Eigen::VectorXd rewards;
  Eigen::VectorXd costs;
  std::vector<char> terminal;
  std::vector<std::size_t> step_index;
  std::vector<Eigen::Index> begin;
  std::vector<Eigen::Index> end;

  Eigen::Index size() const { return rewards.size(); }
  std::size_t num_segments() const { return begin.size(); }
  bool empty() const { return size() == 0; }
  /// Last column of a segment.
  bool segment_last(Eigen::Index i) const;
};

/// Throws std::invalid_argument on a non-positive behavior probability or
/// inconsistent dimensions.
TransitionBatch flatten(const std::vector<Trajectory>& segments);

}  // namespace offtrc

#endif  // OFFTRC_TRC_BATCH_HPP
