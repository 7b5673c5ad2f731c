#include "offtrc/oracle/bounds.hpp"
#include "offtrc/oracle/cvar.hpp"
#include "offtrc/oracle/exact.hpp"
#include "offtrc/oracle/random_instance.hpp"
#include "offtrc/oracle/tabular_cmdp.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace offtrc::oracle;
using DMat = Eigen::MatrixXd;
using DVec = Eigen::VectorXd;

namespace {

// Value iteration on the signal, independent of the linear solve.
DVec iterate_values(const TabularCMDP<double>& m, const TabularPolicy<double>& pi, const DMat& signal) {
  DVec v = DVec::Zero(m.num_states);
  for (int it = 0; it < 5000; ++it) {
    DVec next = DVec::Zero(m.num_states);
    for (Eigen::Index s = 0; s < m.num_states; ++s)
      for (Eigen::Index a = 0; a < m.num_actions; ++a) {
        const auto r = m.row(s, a);
        double q = 0.0;
        for (Eigen::Index sp = 0; sp < m.num_states; ++sp)
          q += m.transition(r, sp) * (signal(r, sp) + m.gamma * v(sp));
        next(s) += pi(s, a) * q;
      }
    v = next;
  }
  return v;
}

// Sum_t (1-g) g^t P(s_t = s), truncated.
DVec power_series_occupancy(const TabularCMDP<double>& m, const TabularPolicy<double>& pi, double g, int horizon) {
  const DMat p = policy_transition(m, pi);
  DVec dist = m.initial, acc = DVec::Zero(m.num_states);
  double w = 1.0 - g;
  for (int t = 0; t < horizon; ++t) {
    acc += w * dist;
    dist = p.transpose() * dist;
    w *= g;
  }
  return acc;
}

template <typename Gen>
std::size_t draw(const Eigen::Ref<const Eigen::RowVectorXd>& probs, Gen& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(rng), acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs(i);
    if (x < acc) return static_cast<std::size_t>(i);
  }
  return static_cast<std::size_t>(probs.size() - 1);
}

struct Instance {
  TabularCMDP<double> m;
  TabularPolicy<double> mu, pi, candidate;
};

Instance random_instance(std::mt19937_64& rng) {
  Instance in;
  in.m = random_cmdp<double>(rng);
  in.mu = random_policy<double>(in.m.num_states, in.m.num_actions, rng, 0.05);
  in.pi = random_policy<double>(in.m.num_states, in.m.num_actions, rng);
  in.candidate = random_policy<double>(in.m.num_states, in.m.num_actions, rng);
  return in;
}

}  // namespace

TEST_CASE("random instances are valid") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto in = random_instance(rng);
    CHECK_NOTHROW(in.m.validate());
    CHECK_NOTHROW(validate_policy(in.mu, in.m, true));
    CHECK(in.m.num_states <= 6);
    CHECK(in.m.num_actions <= 4);
    CHECK(in.m.num_actions >= 2);
  }
}

TEST_CASE("malformed CMDPs are rejected") {
  std::mt19937_64 rng(2);
  auto m = random_cmdp<double>(rng);
  auto bad = m;
  bad.transition(0, 0) += 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = m;
  bad.cost(0, 0) = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = m;
  bad.gamma = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  TabularPolicy<double> pi = DMat::Constant(m.num_states, m.num_actions, 0.9);
  CHECK_THROWS_AS(validate_policy(pi, m), std::invalid_argument);
}

TEST_CASE("exact values match value iteration") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto in = random_instance(rng);
    const auto q = exact_quantities(in.m, in.pi);
    CHECK((q.reward.state - iterate_values(in.m, in.pi, in.m.reward)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((q.cost.state - iterate_values(in.m, in.pi, in.m.cost)).cwiseAbs().maxCoeff() <= 1e-9);
    // Advantages average to zero under the policy.
    CHECK(in.pi.cwiseProduct(q.cost.advantage).rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(in.pi.cwiseProduct(q.square.advantage).rowwise().sum().cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("occupancy measures match the truncated power series") {
  std::mt19937_64 rng(4);
  auto opt = InstanceOptions{};
  opt.min_states = opt.max_states = 5;
  for (int i = 0; i < 10; ++i) {
    const auto m = random_cmdp<double>(rng, opt);
    const auto pi = random_policy<double>(5, m.num_actions, rng);
    const auto d = discounted_dists(m, pi);
    const double g = m.gamma;
    CHECK((d.discounted - power_series_occupancy(m, pi, g, 500)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((d.doubly_discounted - power_series_occupancy(m, pi, g * g, 500)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(d.discounted.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("both evaluation routes of the cost moments agree") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto in = random_instance(rng);
    const auto q = exact_quantities(in.m, in.pi);
    CHECK(std::abs(q.cost_mean - q.cost_mean_via_dist) <= 1e-9);
    CHECK(std::abs(q.cost_square - q.cost_square_via_dist) <= 1e-9);
    CHECK(q.cost_square >= q.cost_mean * q.cost_mean - 1e-9);
  }
}

TEST_CASE("cost moments match Monte Carlo returns") {
  std::mt19937_64 rng(6);
  auto opt = InstanceOptions{};
  opt.max_states = 4;
  opt.gammas = {0.8};
  const auto m = random_cmdp<double>(rng, opt);
  const auto pi = random_policy<double>(m.num_states, m.num_actions, rng);
  const auto q = exact_quantities(m, pi);
  const int episodes = 20000, horizon = 120;  // 0.8^120 is negligible
  std::vector<double> returns;
  double sum = 0.0, sum_sq = 0.0, sum_sq2 = 0.0;
  for (int e = 0; e < episodes; ++e) {
    auto s = draw(m.initial.transpose(), rng);
    double ret = 0.0, disc = 1.0;
    for (int t = 0; t < horizon; ++t) {
      const auto a = draw(pi.row(static_cast<Eigen::Index>(s)), rng);
      const auto r = m.row(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a));
      const auto sp = draw(m.transition.row(r), rng);
      ret += disc * m.cost(r, static_cast<Eigen::Index>(sp));
      disc *= m.gamma;
      s = sp;
    }
    returns.push_back(ret);
    sum += ret;
    sum_sq += ret * ret;
    sum_sq2 += ret * ret * ret * ret;
  }
  const double n = episodes, mean = sum / n, var = sum_sq / n - mean * mean;
  const double mean_sq = sum_sq / n, var_sq = sum_sq2 / n - mean_sq * mean_sq;
  CHECK(std::abs(mean - q.cost_mean) <= 3.0 * std::sqrt(var / n));
  CHECK(std::abs(mean_sq - q.cost_square) <= 3.0 * std::sqrt(var_sq / n));
}

TEST_CASE("risk factor constants") {
  // Values computed with mpmath at 30 digits.
  CHECK(cvar_factor(0.125) == doctest::Approx(1.6468282413731488).epsilon(1e-13));
  CHECK(cvar_factor(0.5) == doctest::Approx(0.7978845608028654).epsilon(1e-13));
  CHECK(cvar_factor(0.25) == doctest::Approx(1.2711062907364277).epsilon(1e-13));
  CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-13));
  CHECK(cvar_factor(1.0) == 0.0);
  CHECK(std::abs(cvar_factor(0.125) - normal_quantile(0.95)) <= 0.01);
  CHECK_THROWS_AS(cvar_factor(0.0), std::invalid_argument);
  CHECK_THROWS_AS(cvar_factor(1.5), std::invalid_argument);
  // Smaller tail mass means a larger factor.
  double prev = 0.0;
  for (double a : {0.9, 0.5, 0.25, 0.125, 0.05, 0.01}) {
    CHECK(cvar_factor(a) > prev);
    prev = cvar_factor(a);
  }
}

TEST_CASE("gaussian CVaR") {
  CHECK(gaussian_cvar(3.0, 25.0, 1.0) == 3.0);
  CHECK(gaussian_cvar(2.0, 5.0, 0.125) == doctest::Approx(2.0 + 1.6468282413731488));
  // Negative variance is clamped.
  CHECK(gaussian_cvar(2.0, 3.0, 0.125) == 2.0);
  CHECK(gaussian_cvar(2.0, 3.0, 0.125, 1e-8) == doctest::Approx(2.0 + 1.6468282413731488e-4));
}

TEST_CASE("empirical CVaR") {
  const std::vector<double> xs{1, 2, 3, 4, 5, 6, 7, 8};
  CHECK(empirical_cvar<double>(xs, 0.25) == doctest::Approx(7.5));
  CHECK(empirical_cvar<double>(xs, 1.0) == doctest::Approx(4.5));
  CHECK(empirical_cvar<double>(xs, 0.3) == doctest::Approx((8 + 7 + 0.4 * 6) / 2.4));
  CHECK_THROWS_AS(empirical_cvar<double>(std::vector<double>{}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(empirical_cvar<double>(xs, 0.05), std::invalid_argument);

  SUBCASE("matches the Rockafellar-Uryasev minimum") {
    std::mt19937_64 rng(7);
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> s(200);
    for (auto& x : s) x = ex(rng);
    for (double alpha : {0.125, 0.5, 0.77}) {
      double best = 1e300;
      // The minimizer sits at a sample, so scanning samples is exact.
      for (double nu : s) {
        double acc = 0.0;
        for (double x : s) acc += std::max(0.0, x - nu);
        best = std::min(best, nu + acc / (alpha * s.size()));
      }
      CHECK(empirical_cvar<double>(s, alpha) == doctest::Approx(best).epsilon(1e-12));
    }
  }

  SUBCASE("gaussian samples approach the closed form") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd(3.0, 2.0);
    std::vector<double> s(400000);
    for (auto& x : s) x = nd(rng);
    CHECK(empirical_cvar<double>(s, 0.125) == doctest::Approx(gaussian_cvar(3.0, 13.0, 0.125)).epsilon(0.01));
  }
}

TEST_CASE("surrogates equal the true moments at the current policy") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const auto in = random_instance(rng);
    const auto q = exact_quantities(in.m, in.pi);
    const auto s = surrogate_J(in.m, in.mu, in.pi, in.pi);
    CHECK(std::abs(s.cost_mean - q.cost_mean) <= 1e-9);
    CHECK(std::abs(s.cost_square - q.cost_square) <= 1e-9);
    CHECK(std::abs(s.objective - q.objective) <= 1e-9);
  }
}

TEST_CASE("surrogates are linear in the candidate policy") {
  std::mt19937_64 rng(10);
  const auto in = random_instance(rng);
  const TabularPolicy<double> mix = 0.3 * in.pi + 0.7 * in.candidate;
  const auto a = surrogate_J(in.m, in.mu, in.pi, in.pi);
  const auto b = surrogate_J(in.m, in.mu, in.pi, in.candidate);
  const auto c = surrogate_J(in.m, in.mu, in.pi, mix);
  CHECK(c.cost_mean == doctest::Approx(0.3 * a.cost_mean + 0.7 * b.cost_mean).epsilon(1e-12));
  CHECK(c.cost_square == doctest::Approx(0.3 * a.cost_square + 0.7 * b.cost_square).epsilon(1e-12));
}

TEST_CASE("mean bounds hold on random instances") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto in = random_instance(rng);
    auto t = analyze_triple(in.m, in.mu, in.pi, in.candidate);
    CHECK(cost_bound_check(t).holds);
    CHECK(objective_bound_check(t).holds);
    CHECK(pinsker_chain_check(in.mu, in.pi, in.candidate).holds);
  }
}

TEST_CASE("bounds are tight when the candidate is the current policy") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const auto in = random_instance(rng);
    auto t = analyze_triple(in.m, in.mu, in.pi, in.pi);
    CHECK(std::abs(cost_bound_check(t).gap) <= 1e-9);
    CHECK(std::abs(square_bound_check(t).gap) <= 1e-9);
    for (double alpha : {0.125, 0.25, 0.5, 1.0}) {
      auto tt = t;
      CHECK(std::abs(cvar_bound_check(tt, alpha).gap) <= 1e-9);
    }
  }
}

TEST_CASE("distance helpers") {
  TabularPolicy<double> a(2, 2), b(2, 2);
  a << 0.5, 0.5, 1.0, 0.0;
  b << 0.5, 0.5, 0.0, 1.0;
  CHECK(max_tv(a, b) == 1.0);
  CHECK(max_kl(b, b) == 0.0);
  CHECK(std::isinf(max_kl(a, b)));
  TabularPolicy<double> c(1, 2), d(1, 2);
  c << 0.25, 0.75;
  d << 0.5, 0.5;
  CHECK(max_kl(c, d) == doctest::Approx(0.25 * std::log(0.5) + 0.75 * std::log(1.5)));
}
