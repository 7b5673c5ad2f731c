#ifndef OFFTRC_ORACLE_RANDOM_INSTANCE_HPP
#define OFFTRC_ORACLE_RANDOM_INSTANCE_HPP

#include "offtrc/oracle/tabular_cmdp.hpp"

#include <random>
#include <vector>

namespace offtrc::oracle {

struct InstanceOptions {
  Eigen::Index min_states = 1;
  Eigen::Index max_states = 6;
  Eigen::Index min_actions = 2;
  Eigen::Index max_actions = 4;
  std::vector<double> gammas{0.8, 0.9, 0.95};
};

/// Flat Dirichlet sample of length n.
template <typename Scalar>
Eigen::Matrix<Scalar, 1, Eigen::Dynamic> dirichlet_row(Eigen::Index n, std::mt19937_64& rng) {
  std::exponential_distribution<double> unit(1.0);
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> row(n);
  for (Eigen::Index i = 0; i < n; ++i) row(i) = static_cast<Scalar>(unit(rng));
  return row / row.sum();
}

/// Dirichlet(1) transition rows and initial distribution, costs uniform on
/// [0,1], rewards uniform on [-1,1].
template <typename Scalar>
TabularCMDP<Scalar> random_cmdp(std::mt19937_64& rng, const InstanceOptions& opt = {}) {
  std::uniform_int_distribution<Eigen::Index> ns(opt.min_states, opt.max_states);
  std::uniform_int_distribution<Eigen::Index> na(opt.min_actions, opt.max_actions);
  std::uniform_int_distribution<std::size_t> pick_gamma(0, opt.gammas.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  TabularCMDP<Scalar> m;
  m.num_states = ns(rng);
  m.num_actions = na(rng);
  m.gamma = static_cast<Scalar>(opt.gammas[pick_gamma(rng)]);
  const auto pairs = m.num_states * m.num_actions;
  m.transition.resize(pairs, m.num_states);
  m.reward.resize(pairs, m.num_states);
  m.cost.resize(pairs, m.num_states);
  for (Eigen::Index r = 0; r < pairs; ++r) m.transition.row(r) = dirichlet_row<Scalar>(m.num_states, rng);
  for (Eigen::Index r = 0; r < pairs; ++r)
    for (Eigen::Index c = 0; c < m.num_states; ++c) {
      m.reward(r, c) = static_cast<Scalar>(2.0 * unit(rng) - 1.0);
      m.cost(r, c) = static_cast<Scalar>(unit(rng));
    }
  m.initial = dirichlet_row<Scalar>(m.num_states, rng).transpose();
  return m;
}

/// Dirichlet(1) rows; entries below `floor` are raised to it before
/// renormalizing (used for behavior policies so importance ratios stay bounded).
template <typename Scalar>
TabularPolicy<Scalar> random_policy(Eigen::Index num_states, Eigen::Index num_actions, std::mt19937_64& rng,
                                    Scalar floor = Scalar(0)) {
  TabularPolicy<Scalar> pi(num_states, num_actions);
  for (Eigen::Index s = 0; s < num_states; ++s) {
    auto row = dirichlet_row<Scalar>(num_actions, rng);
    if (floor > Scalar(0)) {
      row = row.cwiseMax(floor);
      row /= row.sum();
    }
    pi.row(s) = row;
  }
  return pi;
}

}  // namespace offtrc::oracle

#endif  // OFFTRC_ORACLE_RANDOM_INSTANCE_HPP
