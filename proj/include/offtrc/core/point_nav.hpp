#ifndef OFFTRC_CORE_POINT_NAV_HPP
#define OFFTRC_CORE_POINT_NAV_HPP

#include "offtrc/core/cost.hpp"
#include "offtrc/core/env.hpp"

#include <Eigen/Core>

#include <vector>

namespace offtrc {

struct PointNavConfig {
  double arena_half_width = 2.0;  // 4x4 arena
  int num_obstacles = 6;
  double obstacle_radius = 0.15;
  double goal_radius = 0.3;
  /// Minimum distance from an obstacle edge for spawned goals and start points.
  double goal_clearance = 0.5;
  double start_clearance = 0.5;
  double dt = 0.1;
  double accel_gain = 2.0;
  double damping = 2.0;
  double goal_bonus = 1.0;
  double progress_scale = 1.0;
  int observed_obstacles = 3;
  std::size_t max_steps = 250;
  /// Penalizes distance to the nearest obstacle edge.
  CostFunctionSpec cost{10.0, 0.2, CostConvention::Distance};
};

/// Point robot with acceleration control among circular hazards.
///
/// Observation: position, velocity, goal position, goal offset from the agent,
/// and the offsets of the nearest obstacles sorted by distance. Reward is the
/// progress toward the goal plus a bonus on arrival, after which the goal
/// respawns. Obstacles are re-randomized every episode and are not solid; the
/// cost is the logistic of the minimum distance to an obstacle edge.
class PointNavEnv final : public Environment {
 public:
  explicit PointNavEnv(PointNavConfig cfg = {});

  std::string id() const override { return "pointnav"; }
  Eigen::Index observation_dim() const override { return 8 + 2 * cfg_.observed_obstacles; }
  Eigen::Index action_dim() const override { return 2; }
  std::size_t max_episode_steps() const override { return cfg_.max_steps; }

  Eigen::VectorXd reset(std::mt19937_64& rng) override;
  StepResult step(const Eigen::VectorXd& action, std::mt19937_64& rng) override;

  const PointNavConfig& config() const { return cfg_; }
  const Eigen::Vector2d& position() const { return pos_; }
  const Eigen::Vector2d& goal() const { return goal_; }
  const std::vector<Eigen::Vector2d>& obstacles() const { return obstacles_; }
  /// Distance from the agent to the closest obstacle edge (negative inside).
  double min_obstacle_distance() const;

  /// For tests: place the scene by hand.
  void set_scene(const Eigen::Vector2d& pos, const Eigen::Vector2d& goal, std::vector<Eigen::Vector2d> obstacles);

 private:
  Eigen::VectorXd observe() const;
  Eigen::Vector2d sample_free_point(std::mt19937_64& rng, double clearance) const;

  PointNavConfig cfg_;
  Eigen::Vector2d pos_ = Eigen::Vector2d::Zero();
  Eigen::Vector2d vel_ = Eigen::Vector2d::Zero();
  Eigen::Vector2d goal_ = Eigen::Vector2d::Zero();
  std::vector<Eigen::Vector2d> obstacles_;
  std::size_t steps_ = 0;
};

}  // namespace offtrc

#endif  // OFFTRC_CORE_POINT_NAV_HPP
