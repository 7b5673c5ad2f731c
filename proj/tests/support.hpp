#ifndef OFFTRC_TESTS_SUPPORT_HPP
#define OFFTRC_TESTS_SUPPORT_HPP

// Tabular fixtures and finite-difference helpers shared by the unit tests and
// the acceptance runner.

#include "offtrc/nn/categorical_policy.hpp"
#include "offtrc/oracle/exact.hpp"
#include "offtrc/oracle/random_instance.hpp"
#include "offtrc/trc/config.hpp"
#include "offtrc/trc/surrogate.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace offtrc::testing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd random_spd(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  MatrixXd q(n, n);
  for (Eigen::Index i = 0; i < q.size(); ++i) q(i) = nd(rng);
  return q * q.transpose() / static_cast<double>(n) + 0.1 * MatrixXd::Identity(n, n);
}

inline VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  VectorXd v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

// Closed-form minimum over lambda of the dual, then a dense scan plus golden
// section over nu >= 0. The dual is convex in nu.
inline double brute_force_dual(double q, double r, double s, double c, double delta) {
  auto dual = [&](double nu) { return std::sqrt(std::max(2.0 * delta * (q - 2.0 * nu * r + nu * nu * s), 0.0)) - nu * c; };
  double hi = 1.0;
  while (dual(2.0 * hi) < dual(hi) && hi < 1e12) hi *= 2.0;
  hi *= 2.0;
  double best_nu = 0.0, best = dual(0.0);
  for (int i = 1; i <= 4000; ++i) {
    const double nu = hi * i / 4000.0;
    if (dual(nu) < best) best = dual(nu), best_nu = nu;
  }
  double a = std::max(0.0, best_nu - hi / 4000.0), b = best_nu + hi / 4000.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    if (dual(x1) < dual(x2)) b = x2;
    else a = x1;
  }
  return std::min(best, dual(0.5 * (a + b)));
}

// Logit table with log pi in the weights and zero biases.
inline CategoricalPolicy tabular_policy(const oracle::TabularPolicy<double>& pi) {
  const auto ns = pi.rows(), na = pi.cols();
  Mlp net({ns, na});
  VectorXd p = VectorXd::Zero(net.num_params());
  for (Eigen::Index s = 0; s < ns; ++s)
    for (Eigen::Index a = 0; a < na; ++a) p(s * na + a) = std::log(pi(s, a));
  net.set_params(p);
  return CategoricalPolicy(net);
}

inline oracle::TabularPolicy<double> table_of(const CategoricalPolicy& pol, Eigen::Index ns) {
  return pol.probabilities(MatrixXd::Identity(ns, ns)).transpose();
}

// One column per (s, a), weighted by the behavior occupancy so that batch
// expectations are exact.
struct TabularProblem {
  oracle::TabularCMDP<double> m;
  oracle::TabularPolicy<double> mu, pi;
  oracle::ExactQuantities<double> exact;
  PolicyBatch batch;
  OnPolicyEstimates estimates;
};

inline TabularProblem tabular_problem(std::mt19937_64& rng, bool on_policy = false) {
  TabularProblem tp;
  oracle::InstanceOptions opt;
  opt.min_states = 2;
  tp.m = oracle::random_cmdp<double>(rng, opt);
  const auto ns = tp.m.num_states, na = tp.m.num_actions;
  tp.mu = oracle::random_policy<double>(ns, na, rng, 0.05);
  tp.pi = oracle::random_policy<double>(ns, na, rng, 0.05);
  if (on_policy) tp.mu = tp.pi;
  tp.exact = oracle::exact_quantities(tp.m, tp.pi);
  const auto dmu = oracle::discounted_dists(tp.m, tp.mu);
  const auto n = ns * na;
  auto& b = tp.batch;
  b.states = MatrixXd::Zero(ns, n);
  b.actions.resize(1, n);
  b.behavior_prob.resize(n);
  b.adv.resize(n);
  b.adv_cost.resize(n);
  b.adv_square.resize(n);
  b.weight.resize(n);
  b.weight_square.resize(n);
  for (Eigen::Index s = 0; s < ns; ++s)
    for (Eigen::Index a = 0; a < na; ++a) {
      const auto i = s * na + a;
      b.states(s, i) = 1.0;
      b.actions(0, i) = double(a);
      b.behavior_prob(i) = tp.mu(s, a);
      b.adv(i) = tp.exact.reward.advantage(s, a);
      b.adv_cost(i) = tp.exact.cost.advantage(s, a);
      b.adv_square(i) = tp.exact.square.advantage(s, a);
      b.weight(i) = dmu.discounted(s) * tp.mu(s, a);
      b.weight_square(i) = dmu.doubly_discounted(s) * tp.mu(s, a);
    }
  tp.estimates = {tp.exact.cost_mean, tp.exact.cost_square, n};
  return tp;
}

inline CVaRConfig cvar_for(const oracle::TabularCMDP<double>& m, double alpha) {
  CVaRConfig c;
  c.alpha = alpha;
  c.gamma = m.gamma;
  c.limit = 0.4;
  return c;
}

inline VectorXd central_difference(const std::function<double(const VectorXd&)>& f, const VectorXd& x, double h = 1e-6) {
  VectorXd g(x.size()), p = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    p(i) = x(i) + h;
    const double up = f(p);
    p(i) = x(i) - h;
    const double down = f(p);
    p(i) = x(i);
    g(i) = (up - down) / (2 * h);
  }
  return g;
}

inline double relative_error(const VectorXd& a, const VectorXd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
}

}  // namespace offtrc::testing

#endif  // OFFTRC_TESTS_SUPPORT_HPP
