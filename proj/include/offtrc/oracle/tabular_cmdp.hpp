#ifndef OFFTRC_ORACLE_TABULAR_CMDP_HPP
#define OFFTRC_ORACLE_TABULAR_CMDP_HPP

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace offtrc::oracle {

/// Finite CMDP with tensors flattened to (nS*nA) x nS; row s*nA + a holds the
/// distribution (or reward/cost) over next states for the pair (s, a).
template <typename Scalar>
struct TabularCMDP {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Eigen::Index num_states = 0;
  Eigen::Index num_actions = 0;
  Matrix transition;  // P[s,a,s']
  Matrix reward;      // R[s,a,s']
  Matrix cost;        // C[s,a,s'] >= 0
  Vector initial;     // rho
  Scalar gamma = Scalar(0.9);

  Eigen::Index row(Eigen::Index s, Eigen::Index a) const { return s * num_actions + a; }

  /// Throws std::invalid_argument when the tensors are malformed.
  void validate(Scalar tol = Scalar(1e-9)) const {
    const auto pairs = num_states * num_actions;
    if (num_states <= 0 || num_actions <= 0) throw std::invalid_argument("TabularCMDP: empty state or action space");
    if (transition.rows() != pairs || transition.cols() != num_states || reward.rows() != pairs ||
        reward.cols() != num_states || cost.rows() != pairs || cost.cols() != num_states ||
        initial.size() != num_states)
      throw std::invalid_argument("TabularCMDP: tensor shape mismatch");
    if (!(gamma > Scalar(0)) || !(gamma < Scalar(1)))
      throw std::invalid_argument("TabularCMDP: discount must lie in (0,1)");
    if ((transition.array() < Scalar(0)).any() || ((transition.rowwise().sum().array() - Scalar(1)).abs() > tol).any())
      throw std::invalid_argument("TabularCMDP: transition rows must be distributions");
    if ((initial.array() < Scalar(0)).any() || std::abs(initial.sum() - Scalar(1)) > tol)
      throw std::invalid_argument("TabularCMDP: initial distribution must sum to one");
    if ((cost.array() < Scalar(0)).any()) throw std::invalid_argument("TabularCMDP: negative cost");
  }
};

/// Row-stochastic [s,a] matrix of action probabilities.
template <typename Scalar>
using TabularPolicy = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
void validate_policy(const TabularPolicy<Scalar>& pi, const TabularCMDP<Scalar>& m, bool strictly_positive = false,
                     Scalar tol = Scalar(1e-9)) {
  if (pi.rows() != m.num_states || pi.cols() != m.num_actions)
    throw std::invalid_argument("TabularPolicy: shape mismatch");
  if ((pi.array() < Scalar(0)).any() || ((pi.rowwise().sum().array() - Scalar(1)).abs() > tol).any())
    throw std::invalid_argument("TabularPolicy: rows must be distributions");
  if (strictly_positive && (pi.array() <= Scalar(0)).any())
    throw std::invalid_argument("TabularPolicy: behavior policy must be strictly positive");
}

}  // namespace offtrc::oracle

#endif  // OFFTRC_ORACLE_TABULAR_CMDP_HPP
