#ifndef OFFTRC_ORACLE_EXACT_HPP
#define OFFTRC_ORACLE_EXACT_HPP

#include "offtrc/oracle/tabular_cmdp.hpp"

#include <Eigen/LU>

namespace offtrc::oracle {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// State-to-state transition matrix under pi.
template <typename Scalar>
Mat<Scalar> policy_transition(const TabularCMDP<Scalar>& m, const TabularPolicy<Scalar>& pi) {
  Mat<Scalar> p = Mat<Scalar>::Zero(m.num_states, m.num_states);
  for (Eigen::Index s = 0; s < m.num_states; ++s)
    for (Eigen::Index a = 0; a < m.num_actions; ++a) p.row(s) += pi(s, a) * m.transition.row(m.row(s, a));
  return p;
}

/// E_{s'~P(.|s,a)}[f(s,a,s')] as an [s,a] matrix, where f is an (nS*nA) x nS tensor.
template <typename Scalar>
Mat<Scalar> expect_next(const TabularCMDP<Scalar>& m, const Mat<Scalar>& f) {
  Mat<Scalar> out(m.num_states, m.num_actions);
  for (Eigen::Index s = 0; s < m.num_states; ++s)
    for (Eigen::Index a = 0; a < m.num_actions; ++a)
      out(s, a) = m.transition.row(m.row(s, a)).dot(f.row(m.row(s, a)));
  return out;
}

/// Broadcast a per-next-state vector into an (nS*nA) x nS tensor.
template <typename Scalar>
Mat<Scalar> next_state_tensor(const TabularCMDP<Scalar>& m, const Vec<Scalar>& v) {
  return v.transpose().replicate(m.num_states * m.num_actions, 1);
}

template <typename Scalar>
struct ValueSet {
  Vec<Scalar> state;   // V(s)
  Mat<Scalar> action;  // Q(s,a)
  Mat<Scalar> advantage;
};

/// Discounted values of the per-step signal `signal` (R or C) under pi.
template <typename Scalar>
ValueSet<Scalar> solve_values(const TabularCMDP<Scalar>& m, const TabularPolicy<Scalar>& pi, const Mat<Scalar>& signal) {
  m.validate();
  const Mat<Scalar> p_pi = policy_transition(m, pi);
  const Mat<Scalar> one_step = expect_next(m, signal);
  const Vec<Scalar> r_pi = pi.cwiseProduct(one_step).rowwise().sum();
  const Mat<Scalar> system = Mat<Scalar>::Identity(m.num_states, m.num_states) - m.gamma * p_pi;
  ValueSet<Scalar> out;
  out.state = system.partialPivLu().solve(r_pi);
  out.action = one_step + m.gamma * expect_next(m, next_state_tensor(m, out.state));
  out.advantage = out.action.colwise() - out.state;
  return out;
}

/// Second moment of the cost return:
///   S(s,a) = E[c^2 + 2 gamma c V_C(s') + gamma^2 S(s')],  S(s) = E_pi[S(s,a)].
template <typename Scalar>
ValueSet<Scalar> solve_square_values(const TabularCMDP<Scalar>& m, const TabularPolicy<Scalar>& pi,
                                     const Vec<Scalar>& cost_value) {
  m.validate();
  const Mat<Scalar> p_pi = policy_transition(m, pi);
  const Mat<Scalar> base =
      expect_next<Scalar>(m, m.cost.cwiseProduct(m.cost) +
                                 Scalar(2) * m.gamma * m.cost.cwiseProduct(next_state_tensor(m, cost_value)));
  const Vec<Scalar> base_pi = pi.cwiseProduct(base).rowwise().sum();
  const Scalar g2 = m.gamma * m.gamma;
  const Mat<Scalar> system = Mat<Scalar>::Identity(m.num_states, m.num_states) - g2 * p_pi;
  ValueSet<Scalar> out;
  out.state = system.partialPivLu().solve(base_pi);
  out.action = base + g2 * expect_next(m, next_state_tensor(m, out.state));
  out.advantage = out.action.colwise() - out.state;
  return out;
}

template <typename Scalar>
struct StateDistributions {
  Vec<Scalar> discounted;         // d^pi
  Vec<Scalar> doubly_discounted;  // d_2^pi
};

template <typename Scalar>
StateDistributions<Scalar> discounted_dists(const TabularCMDP<Scalar>& m, const TabularPolicy<Scalar>& pi) {
  m.validate();
  const Mat<Scalar> p_pi = policy_transition(m, pi);
  const auto eye = Mat<Scalar>::Identity(m.num_states, m.num_states);
  const Scalar g = m.gamma, g2 = g * g;
  StateDistributions<Scalar> out;
  out.discounted = (Scalar(1) - g) * (eye - g * p_pi).transpose().partialPivLu().solve(m.initial);
  out.doubly_discounted = (Scalar(1) - g2) * (eye - g2 * p_pi).transpose().partialPivLu().solve(m.initial);
  return out;
}

/// Every exact quantity of a policy on a tabular CMDP.
template <typename Scalar>
struct ExactQuantities {
  ValueSet<Scalar> reward;
  ValueSet<Scalar> cost;
  ValueSet<Scalar> square;
  StateDistributions<Scalar> dists;
  Scalar objective = 0;    // J
  Scalar cost_mean = 0;    // J_C
  Scalar cost_square = 0;  // J_S
  /// J_C and J_S through the occupancy-measure route.
  Scalar cost_mean_via_dist = 0;
  Scalar cost_square_via_dist = 0;
};

template <typename Scalar>
ExactQuantities<Scalar> exact_quantities(const TabularCMDP<Scalar>& m, const TabularPolicy<Scalar>& pi) {
  validate_policy(pi, m);
  ExactQuantities<Scalar> q;
  q.reward = solve_values(m, pi, m.reward);
  q.cost = solve_values(m, pi, m.cost);
  q.square = solve_square_values(m, pi, q.cost.state);
  q.dists = discounted_dists(m, pi);
  q.objective = m.initial.dot(q.reward.state);
  q.cost_mean = m.initial.dot(q.cost.state);
  q.cost_square = m.initial.dot(q.square.state);

  const Scalar g = m.gamma;
  const Vec<Scalar> c_pi = pi.cwiseProduct(expect_next(m, m.cost)).rowwise().sum();
  const Mat<Scalar> sq_signal =
      m.cost.cwiseProduct(m.cost) + Scalar(2) * g * m.cost.cwiseProduct(next_state_tensor(m, q.cost.state));
  const Vec<Scalar> s_pi = pi.cwiseProduct(expect_next(m, sq_signal)).rowwise().sum();
  q.cost_mean_via_dist = q.dists.discounted.dot(c_pi) / (Scalar(1) - g);
  q.cost_square_via_dist = q.dists.doubly_discounted.dot(s_pi) / (Scalar(1) - g * g);
  return q;
}

}  // namespace offtrc::oracle

#endif  // OFFTRC_ORACLE_EXACT_HPP
