#include "offtrc/core/cost.hpp"
#include "offtrc/core/env.hpp"
#include "offtrc/core/metrics.hpp"
#include "offtrc/core/point_nav.hpp"
#include "offtrc/core/replay_buffer.hpp"
#include "offtrc/core/tabular_env.hpp"
#include "offtrc/core/transition.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace offtrc;

namespace {

Transition step(double id, double cost = 0.0, std::size_t t = 0) {
  Transition tr;
  tr.state = Eigen::VectorXd::Constant(1, id);
  tr.next_state = Eigen::VectorXd::Constant(1, id + 1);
  tr.action = Eigen::VectorXd::Zero(1);
  tr.behavior_prob = 0.5;
  tr.cost = cost;
  tr.step_index = t;
  return tr;
}

Trajectory segment(std::initializer_list<double> ids) {
  Trajectory tr;
  for (double id : ids) tr.transitions.push_back(step(id));
  return tr;
}

std::vector<double> stored_ids(const ReplayBuffer& b) {
  std::vector<double> ids;
  for (const auto& s : b.segments())
    for (const auto& t : s.transitions) ids.push_back(t.state(0));
  return ids;
}

Trajectory costs_trajectory(std::initializer_list<double> costs) {
  Trajectory tr;
  std::size_t t = 0;
  for (double c : costs) tr.transitions.push_back(step(0, c, t++));
  return tr;
}

}  // namespace

TEST_CASE("logistic cost, distance convention") {
  const CostFunctionSpec spec{10.0, 0.2, CostConvention::Distance};
  CHECK(logistic_cost(0.2, spec) == doctest::Approx(0.5).epsilon(1e-15));
  // 1 / (1 + exp(-2)), evaluated with mpmath.
  CHECK(logistic_cost(0.0, spec) == doctest::Approx(0.8807970779778824).epsilon(1e-14));
  CHECK(logistic_cost(1e6, spec) == 0.0);
  CHECK(logistic_cost(1e6, spec) >= 0.0);
  // Monotone decreasing in distance.
  double prev = 1.0;
  for (double x = -1.0; x <= 2.0; x += 0.05) {
    const double c = logistic_cost(x, spec);
    CHECK(c < prev);
    CHECK(c > 0.0);
    CHECK(c < 1.0);
    prev = c;
  }
}

TEST_CASE("logistic cost, angle convention penalizes magnitude") {
  const CostFunctionSpec spec{10.0, 0.2, CostConvention::Angle};
  CHECK(logistic_cost(0.2, spec) == doctest::Approx(0.5));
  CHECK(logistic_cost(-0.2, spec) == doctest::Approx(0.5));
  CHECK(logistic_cost(0.0, spec) == doctest::Approx(1.0 - 0.8807970779778824));
  CHECK(logistic_cost(0.5, spec) > logistic_cost(0.3, spec));
}

TEST_CASE("logistic cost rejects bad input") {
  CHECK_THROWS_AS(logistic_cost(std::nan(""), {}), std::invalid_argument);
  CHECK_THROWS_AS(logistic_cost(std::numeric_limits<double>::infinity(), {}), std::invalid_argument);
  CHECK_THROWS_AS(logistic_cost(0.1, {0.0, 0.2, CostConvention::Distance}), std::invalid_argument);
}

TEST_CASE("CV threshold is inclusive") {
  CHECK(count_cv(0.5) == 1);
  CHECK(count_cv(0.49) == 0);
  CHECK(count_cv(0.9) == 1);
}

TEST_CASE("score") {
  CHECK(score(10.0, 4) == 2.0);
  CHECK(score(7.0, 0) == 7.0);
  CHECK(score(0.0, 3) == 0.0);
}

TEST_CASE("episode metrics are permutation invariant in rewards") {
  const std::vector<double> r1{1.0, -2.0, 3.5, 0.25}, r2{3.5, 0.25, 1.0, -2.0};
  const std::vector<double> c{0.1, 0.7, 0.5, 0.2};
  const auto a = episode_metrics(r1, c), b = episode_metrics(r2, c);
  CHECK(a.score == b.score);
  CHECK(a.cv_count == 2);
  CHECK(a.length == 4);
  CHECK(a.cost_rate == doctest::Approx(0.5));
  CHECK(a.score == doctest::Approx(2.75 / 3.0));
}

TEST_CASE("cost return") {
  CHECK(cost_return(costs_trajectory({1, 0, 2}), 0.5).value == doctest::Approx(1.5));
  CHECK(cost_return(costs_trajectory({0, 0, 0}), 0.9).value == 0.0);

  Trajectory ones;
  const int T = 400;
  for (int t = 0; t < T; ++t) ones.transitions.push_back(step(0, 1.0, static_cast<std::size_t>(t)));
  const auto r = cost_return(ones, 0.9);
  CHECK(r.value == doctest::Approx((1.0 - std::pow(0.9, T)) / 0.1).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(r.needs_bootstrap);

  const auto e = cost_return(Trajectory{}, 0.9);
  CHECK(e.empty);
  CHECK(e.value == 0.0);
}

TEST_CASE("replay buffer FIFO examples") {
  SUBCASE("evicts the oldest step") {
    ReplayBuffer b(3);
    b.append(segment({1, 2, 3}));
    b.append(segment({4}));
    CHECK(stored_ids(b) == std::vector<double>{2, 3, 4});
    CHECK(b.total_steps() == 3);
  }
  SUBCASE("empty buffer takes a short rollout") {
    ReplayBuffer b(10);
    b.append(segment({1, 2}));
    CHECK(b.total_steps() == 2);
  }
  SUBCASE("rollout longer than capacity keeps its tail") {
    ReplayBuffer b(3);
    b.append(segment({1, 2, 3, 4, 5}));
    CHECK(stored_ids(b) == std::vector<double>{3, 4, 5});
  }
  SUBCASE("rejects missing behavior probability") {
    ReplayBuffer b(3);
    auto s = segment({1});
    s.transitions[0].behavior_prob = 0.0;
    CHECK_THROWS_AS(b.append(s), std::invalid_argument);
  }
}

TEST_CASE("replay buffer stores a suffix of the append stream") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(1, 7);
  ReplayBuffer b(20);
  std::vector<double> stream;
  double id = 0;
  for (int k = 0; k < 50; ++k) {
    Trajectory s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      s.transitions.push_back(step(id));
      stream.push_back(id++);
    }
    b.append(s);
    CHECK(b.total_steps() <= 20);
    const auto ids = stored_ids(b);
    REQUIRE(ids.size() <= stream.size());
    CHECK(std::equal(ids.begin(), ids.end(), stream.end() - static_cast<std::ptrdiff_t>(ids.size())));
  }
  CHECK(b.total_steps() == 20);
}

TEST_CASE("batch sampling") {
  std::mt19937_64 rng(3);
  SUBCASE("one long episode") {
    ReplayBuffer b(50000);
    Trajectory ep;
    for (int i = 0; i < 5000; ++i) ep.transitions.push_back(step(i));
    b.append(ep);
    const auto s = b.sample(5000, rng);
    REQUIRE(s.segments.size() == 1);
    CHECK(s.total_steps == 5000);
    CHECK_FALSE(s.short_batch);
  }
  SUBCASE("ten episodes of 1000 give five distinct ones") {
    ReplayBuffer b(50000);
    for (int e = 0; e < 10; ++e) {
      Trajectory ep;
      for (int i = 0; i < 1000; ++i) ep.transitions.push_back(step(e * 1000 + i));
      b.append(ep);
    }
    const auto s = b.sample(5000, rng);
    REQUIRE(s.segments.size() == 5);
    std::vector<double> firsts;
    for (const auto& seg : s.segments) {
      firsts.push_back(seg.transitions.front().state(0));
      // Order inside a segment is preserved.
      for (std::size_t i = 1; i < seg.size(); ++i)
        CHECK(seg.transitions[i].state(0) == seg.transitions[i - 1].state(0) + 1);
    }
    std::sort(firsts.begin(), firsts.end());
    CHECK(std::unique(firsts.begin(), firsts.end()) == firsts.end());
  }
  SUBCASE("short buffer") {
    ReplayBuffer b(100);
    b.append(segment({1, 2, 3}));
    const auto s = b.sample(10, rng);
    CHECK(s.short_batch);
    CHECK(s.total_steps == 3);
  }
  SUBCASE("reproducible under a fixed seed") {
    ReplayBuffer b(1000);
    for (int e = 0; e < 40; ++e) b.append(segment({double(3 * e), double(3 * e + 1), double(3 * e + 2)}));
    std::mt19937_64 r1(9), r2(9);
    const auto a = b.sample(30, r1), c = b.sample(30, r2);
    REQUIRE(a.segments.size() == c.segments.size());
    for (std::size_t i = 0; i < a.segments.size(); ++i)
      CHECK(a.segments[i].transitions[0].state(0) == c.segments[i].transitions[0].state(0));
  }
}

TEST_CASE("point navigation environment") {
  PointNavEnv env;
  std::mt19937_64 rng(11);
  auto obs = env.reset(rng);
  CHECK(obs.size() == env.observation_dim());
  CHECK(env.action_dim() == 2);

  SUBCASE("cost is the logistic cost of obstacle clearance and stays in (0,1)") {
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int t = 0; t < 2000; ++t) {
      Eigen::VectorXd a(2);
      a << noise(rng), noise(rng);
      const auto r = env.step(a, rng);
      CHECK(r.cost > 0.0);
      CHECK(r.cost < 1.0);
      CHECK(r.cost == doctest::Approx(logistic_cost(env.min_obstacle_distance(), {})));
      if (r.truncated) env.reset(rng);
    }
  }

  SUBCASE("observation carries the goal position directly") {
    std::vector<Eigen::Vector2d> obstacles{{1.5, 1.5}, {-1.5, 1.5}, {1.5, -1.5}, {-1.5, -1.5}, {0, 1.8}, {0, -1.8}};
    env.set_scene({0.0, 0.0}, {1.0, -0.5}, obstacles);
    const auto r = env.step(Eigen::Vector2d::Zero(), rng);
    const double scale = 1.0 / PointNavConfig{}.arena_half_width;
    CHECK(r.next_state(4) == doctest::Approx(1.0 * scale));
    CHECK(r.next_state(5) == doctest::Approx(-0.5 * scale));
  }

  SUBCASE("progress toward the goal is rewarded") {
    std::vector<Eigen::Vector2d> obstacles{{1.5, 1.5}, {-1.5, 1.5}, {1.5, -1.5}, {-1.5, -1.5}, {0, 1.8}, {0, -1.8}};
    env.set_scene({-1.0, 0.0}, {1.0, 0.0}, obstacles);
    double total = 0.0;
    for (int t = 0; t < 5; ++t) total += env.step(Eigen::Vector2d(1.0, 0.0), rng).reward;
    CHECK(total > 0.0);
  }

  SUBCASE("episodes end at the step limit") {
    env.reset(rng);
    StepResult r;
    std::size_t n = 0;
    do {
      r = env.step(Eigen::Vector2d::Zero(), rng);
      ++n;
    } while (!r.truncated && n < 10000);
    CHECK(n == env.max_episode_steps());
    CHECK_FALSE(r.terminal);
  }
}

TEST_CASE("environment factory") {
  CHECK(make_environment("pointnav")->id() == "pointnav");
  auto tab = make_environment("tabular:4");
  CHECK(tab->num_discrete_actions() == 3);
  CHECK(tab->observation_dim() == 5);
  CHECK_THROWS_AS(make_environment("mujoco"), std::invalid_argument);
  CHECK_THROWS_AS(make_environment("tabular:x"), std::invalid_argument);
}

TEST_CASE("tabular environment follows its model") {
  auto env = TabularEnv::from_seed(2);
  std::mt19937_64 rng(1);
  const auto& m = env.model();
  // Empirical next-state frequencies from one (s, a) pair.
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(m.num_states);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    env.reset(rng);
    const auto s = env.state();
    if (s != TabularEnv::decode(env.one_hot(s))) FAIL("decode");
    const auto r = env.step(Eigen::VectorXd::Constant(1, 1.0), rng);
    if (s == 0) counts(TabularEnv::decode(r.next_state)) += 1.0;
  }
  const double total = counts.sum();
  REQUIRE(total > 1000);
  for (Eigen::Index sp = 0; sp < m.num_states; ++sp) {
    const double p = m.transition(m.row(0, 1), sp);
    const double se = std::sqrt(p * (1 - p) / total);
    CHECK(std::abs(counts(sp) / total - p) <= 4.0 * se + 1e-12);
  }
  CHECK_THROWS_AS(env.step(Eigen::VectorXd::Constant(1, 7.0), rng), std::invalid_argument);
}
