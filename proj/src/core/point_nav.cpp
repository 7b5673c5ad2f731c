#include "offtrc/core/point_nav.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace offtrc {

PointNavEnv::PointNavEnv(PointNavConfig cfg) : cfg_(cfg) {
  if (cfg_.num_obstacles < cfg_.observed_obstacles)
    throw std::invalid_argument("PointNavEnv: more observed obstacles than obstacles");
}

Eigen::Vector2d PointNavEnv::sample_free_point(std::mt19937_64& rng, double clearance) const {
  const double margin = cfg_.arena_half_width - 0.2;
  std::uniform_real_distribution<double> coord(-margin, margin);
  Eigen::Vector2d p;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    p = {coord(rng), coord(rng)};
    const bool clear = std::all_of(obstacles_.begin(), obstacles_.end(), [&](const Eigen::Vector2d& o) {
      return (p - o).norm() - cfg_.obstacle_radius >= clearance;
    });
    if (clear) return p;
  }
  return p;
}

Eigen::VectorXd PointNavEnv::reset(std::mt19937_64& rng) {
  obstacles_.clear();
  const double margin = cfg_.arena_half_width - 0.3;
  std::uniform_real_distribution<double> coord(-margin, margin);
  while (static_cast<int>(obstacles_.size()) < cfg_.num_obstacles) {
    Eigen::Vector2d o{coord(rng), coord(rng)};
    bool spaced = true;
    for (const auto& other : obstacles_) spaced = spaced && (o - other).norm() >= 4.0 * cfg_.obstacle_radius;
    if (spaced) obstacles_.push_back(o);
  }
  pos_ = sample_free_point(rng, cfg_.start_clearance);
  vel_.setZero();
  do {
    goal_ = sample_free_point(rng, cfg_.goal_clearance);
  } while ((goal_ - pos_).norm() < 1.0);
  steps_ = 0;
  return observe();
}

double PointNavEnv::min_obstacle_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : obstacles_) best = std::min(best, (pos_ - o).norm() - cfg_.obstacle_radius);
  return best;
}

StepResult PointNavEnv::step(const Eigen::VectorXd& action, std::mt19937_64& rng) {
  if (action.size() != 2) throw std::invalid_argument("PointNavEnv::step: action must be 2-D");
  const Eigen::Vector2d accel = action.cwiseMax(-1.0).cwiseMin(1.0);
  const double before = (goal_ - pos_).norm();

  vel_ += cfg_.dt * (cfg_.accel_gain * accel - cfg_.damping * vel_);
  pos_ += cfg_.dt * vel_;
  for (int i = 0; i < 2; ++i) {
    if (std::abs(pos_(i)) > cfg_.arena_half_width) {
      pos_(i) = std::clamp(pos_(i), -cfg_.arena_half_width, cfg_.arena_half_width);
      vel_(i) = 0.0;
    }
  }

  StepResult out;
  const double after = (goal_ - pos_).norm();
  out.reward = cfg_.progress_scale * (before - after);
  if (after < cfg_.goal_radius) {
    out.reward += cfg_.goal_bonus;
    do {
      goal_ = sample_free_point(rng, cfg_.goal_clearance);
    } while ((goal_ - pos_).norm() < 1.0);
  }
  out.cost = logistic_cost(min_obstacle_distance(), cfg_.cost);
  ++steps_;
  out.truncated = steps_ >= cfg_.max_steps;
  out.next_state = observe();
  return out;
}

Eigen::VectorXd PointNavEnv::observe() const {
  const double scale = 1.0 / cfg_.arena_half_width;
  Eigen::VectorXd obs(observation_dim());
  obs.segment<2>(0) = pos_ * scale;
  obs.segment<2>(2) = vel_;
  obs.segment<2>(4) = goal_ * scale;
  obs.segment<2>(6) = (goal_ - pos_) * scale;

  std::vector<std::size_t> order(obstacles_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return (obstacles_[a] - pos_).squaredNorm() < (obstacles_[b] - pos_).squaredNorm();
  });
  for (int k = 0; k < cfg_.observed_obstacles; ++k) obs.segment<2>(8 + 2 * k) = (obstacles_[order[k]] - pos_) * scale;
  return obs;
}

void PointNavEnv::set_scene(const Eigen::Vector2d& pos, const Eigen::Vector2d& goal,
                            std::vector<Eigen::Vector2d> obstacles) {
  if (static_cast<int>(obstacles.size()) < cfg_.observed_obstacles)
    throw std::invalid_argument("PointNavEnv::set_scene: too few obstacles");
  pos_ = pos;
  goal_ = goal;
  obstacles_ = std::move(obstacles);
  vel_.setZero();
  steps_ = 0;
}

}  // namespace offtrc
