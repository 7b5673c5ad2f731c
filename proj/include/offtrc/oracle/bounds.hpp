#ifndef OFFTRC_ORACLE_BOUNDS_HPP
#define OFFTRC_ORACLE_BOUNDS_HPP

#include "offtrc/oracle/cvar.hpp"
#include "offtrc/oracle/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace offtrc::oracle {

/// Off-policy surrogates of a candidate policy, built from the behavior
/// policy's occupancy measures and the current policy's advantages.
template <typename Scalar>
struct SurrogateValues {
  Scalar objective = 0;    // J^{mu,pi}(pi')
  Scalar cost_mean = 0;    // J_C^{mu,pi}(pi')
  Scalar cost_square = 0;  // J_S^{mu,pi}(pi')
};

template <typename Scalar>
void check_support(const TabularPolicy<Scalar>& mu, const TabularPolicy<Scalar>& candidate) {
  if (((mu.array() <= Scalar(0)) && (candidate.array() > Scalar(0))).any())
    throw std::invalid_argument("surrogate: behavior policy has zero mass where the candidate acts");
}

/// E_{s~d, a~mu}[(pi'/mu) A] reduces to sum_s d(s) sum_a pi'(a|s) A(s,a).
template <typename Scalar>
SurrogateValues<Scalar> surrogate_values(const ExactQuantities<Scalar>& current, const StateDistributions<Scalar>& behavior,
                                         const TabularPolicy<Scalar>& candidate, Scalar gamma) {
  auto weighted = [&](const Vec<Scalar>& d, const Mat<Scalar>& adv) {
    return d.dot(candidate.cwiseProduct(adv).rowwise().sum());
  };
  SurrogateValues<Scalar> out;
  out.objective = current.objective + weighted(behavior.discounted, current.reward.advantage) / (Scalar(1) - gamma);
  out.cost_mean = current.cost_mean + weighted(behavior.discounted, current.cost.advantage) / (Scalar(1) - gamma);
  out.cost_square =
      current.cost_square + weighted(behavior.doubly_discounted, current.square.advantage) / (Scalar(1) - gamma * gamma);
  return out;
}

template <typename Scalar>
SurrogateValues<Scalar> surrogate_J(const TabularCMDP<Scalar>& m, const TabularPolicy<Scalar>& mu,
                                    const TabularPolicy<Scalar>& pi, const TabularPolicy<Scalar>& candidate) {
  validate_policy(mu, m);
  validate_policy(candidate, m);
  check_support(mu, candidate);
  return surrogate_values(exact_quantities(m, pi), discounted_dists(m, mu), candidate, m.gamma);
}

/// max_s TV(a(.|s), b(.|s))
template <typename Scalar>
Scalar max_tv(const TabularPolicy<Scalar>& a, const TabularPolicy<Scalar>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("max_tv: shape mismatch");
  return Scalar(0.5) * (a - b).cwiseAbs().rowwise().sum().maxCoeff();
}

/// max_s KL(p(.|s) || q(.|s)); infinite when q misses support of p.
template <typename Scalar>
Scalar max_kl(const TabularPolicy<Scalar>& p, const TabularPolicy<Scalar>& q) {
  Scalar worst = 0;
  for (Eigen::Index s = 0; s < p.rows(); ++s) {
    Scalar kl = 0;
    for (Eigen::Index a = 0; a < p.cols(); ++a) {
      if (p(s, a) <= Scalar(0)) continue;
      if (q(s, a) <= Scalar(0)) return std::numeric_limits<Scalar>::infinity();
      kl += p(s, a) * std::log(p(s, a) / q(s, a));
    }
    worst = std::max(worst, kl);
  }
  return worst;
}

/// Approximated CVaR from surrogate values. The surrogate second moment may
/// fall below the squared surrogate mean; the variance is clamped at zero.
template <typename Scalar>
Scalar approx_cvar(const SurrogateValues<Scalar>& s, Scalar alpha) {
  return gaussian_cvar(s.cost_mean, s.cost_square, alpha, Scalar(0));
}

template <typename Scalar>
struct Epsilons {
  Scalar reward = 0;  // max |A|
  Scalar cost = 0;    // max |A_C|
  Scalar square = 0;  // max |A_S|
  Scalar cvar = 0;    // composite constant of the CVaR bound
};

/// One inequality evaluated on one instance: holds iff rhs - lhs >= -tol.
template <typename Scalar>
struct BoundCheck {
  Scalar lhs = 0;
  Scalar rhs = 0;
  Scalar gap = 0;
  bool holds = true;
};

template <typename Scalar>
BoundCheck<Scalar> make_check(Scalar lhs, Scalar rhs, Scalar tol) {
  return {lhs, rhs, rhs - lhs, rhs - lhs >= -tol};
}

/// Everything the bound checks need for one (mu, pi, pi') triple.
template <typename Scalar>
struct TripleAnalysis {
  ExactQuantities<Scalar> current;    // pi
  ExactQuantities<Scalar> candidate;  // pi'
  SurrogateValues<Scalar> surrogate;
  Epsilons<Scalar> eps;
  Scalar tv_behavior = 0;  // D(mu, pi')
  Scalar tv_current = 0;   // D(pi, pi')
  Scalar gamma = 0;

  Scalar tv_product() const { return tv_behavior * tv_current; }
};

template <typename Scalar>
TripleAnalysis<Scalar> analyze_triple(const TabularCMDP<Scalar>& m, const TabularPolicy<Scalar>& mu,
                                      const TabularPolicy<Scalar>& pi, const TabularPolicy<Scalar>& candidate) {
  validate_policy(mu, m);
  validate_policy(candidate, m);
  check_support(mu, candidate);
  TripleAnalysis<Scalar> t;
  t.gamma = m.gamma;
  t.current = exact_quantities(m, pi);
  t.candidate = exact_quantities(m, candidate);
  t.surrogate = surrogate_values(t.current, discounted_dists(m, mu), candidate, m.gamma);
  t.eps.reward = t.current.reward.advantage.cwiseAbs().maxCoeff();
  t.eps.cost = t.current.cost.advantage.cwiseAbs().maxCoeff();
  t.eps.square = t.current.square.advantage.cwiseAbs().maxCoeff();
  t.tv_behavior = max_tv(mu, candidate);
  t.tv_current = max_tv(pi, candidate);
  return t;
}

/// |J_C(pi') - J_C^{mu,pi}(pi')| <= 4 eps_C gamma / (1-gamma)^2 * D(mu,pi') D(pi,pi')
template <typename Scalar>
BoundCheck<Scalar> cost_bound_check(const TripleAnalysis<Scalar>& t, Scalar tol = Scalar(1e-9)) {
  const Scalar g = t.gamma;
  return make_check(std::abs(t.candidate.cost_mean - t.surrogate.cost_mean),
                    Scalar(4) * t.eps.cost * g / ((1 - g) * (1 - g)) * t.tv_product(), tol);
}

/// |J(pi') - J^{mu,pi}(pi')| <= 4 eps_R gamma / (1-gamma)^2 * D(mu,pi') D(pi,pi')
template <typename Scalar>
BoundCheck<Scalar> objective_bound_check(const TripleAnalysis<Scalar>& t, Scalar tol = Scalar(1e-9)) {
  const Scalar g = t.gamma;
  return make_check(std::abs(t.candidate.objective - t.surrogate.objective),
                    Scalar(4) * t.eps.reward * g / ((1 - g) * (1 - g)) * t.tv_product(), tol);
}

/// |J_S(pi') - J_S^{mu,pi}(pi')| <= 2 eps_S gamma^2 / (1-gamma^2)^2 * D(mu,pi') D(pi,pi')
template <typename Scalar>
BoundCheck<Scalar> square_bound_check(const TripleAnalysis<Scalar>& t, Scalar tol = Scalar(1e-9)) {
  const Scalar g2 = t.gamma * t.gamma;
  return make_check(std::abs(t.candidate.cost_square - t.surrogate.cost_square),
                    Scalar(2) * t.eps.square * g2 / ((1 - g2) * (1 - g2)) * t.tv_product(), tol);
}

template <typename Scalar>
BoundCheck<Scalar> square_bound_check(const TabularCMDP<Scalar>& m, const TabularPolicy<Scalar>& mu,
                                const TabularPolicy<Scalar>& pi, const TabularPolicy<Scalar>& candidate,
                                Scalar tol = Scalar(1e-9)) {
  return square_bound_check(analyze_triple(m, mu, pi, candidate), tol);
}

/// Gaussian CVaR of pi' (lhs) against the approximated CVaR plus the
/// distribution-shift penalty (rhs). Throws std::domain_error when the
/// approximated CVaR is not positive, since eps_CVaR divides by it.
template <typename Scalar>
BoundCheck<Scalar> cvar_bound_check(TripleAnalysis<Scalar>& t, Scalar alpha, Scalar tol = Scalar(1e-9)) {
  const Scalar g = t.gamma, g2 = g * g;
  const Scalar k = cvar_factor(alpha);
  const Scalar approx = approx_cvar(t.surrogate, alpha);
  if (!(approx > Scalar(0))) throw std::domain_error("cvar_bound_check: approximated CVaR must be positive");
  const Scalar dd = t.tv_product();
  const Scalar shift = Scalar(4) * t.eps.cost * g / (1 - g2);
  t.eps.cvar = (shift * shift * dd + Scalar(8) * t.eps.cost * g / ((1 - g) * (1 - g)) * t.candidate.cost_mean +
                Scalar(2) * t.eps.square * g2 / ((1 - g2) * (1 - g2))) /
               approx;
  const Scalar lhs = gaussian_cvar(t.candidate.cost_mean, t.candidate.cost_square, alpha);
  const Scalar rhs = approx + (Scalar(4) * t.eps.cost * g / ((1 - g) * (1 - g)) + t.eps.cvar * k) * dd;
  return make_check(lhs, rhs, tol);
}

template <typename Scalar>
BoundCheck<Scalar> cvar_bound_check(const TabularCMDP<Scalar>& m, const TabularPolicy<Scalar>& mu,
                                  const TabularPolicy<Scalar>& pi, const TabularPolicy<Scalar>& candidate, Scalar alpha,
                                  Scalar tol = Scalar(1e-9)) {
  auto t = analyze_triple(m, mu, pi, candidate);
  return cvar_bound_check(t, alpha, tol);
}

/// D(mu,pi') D(pi,pi') <= maxKL(pi||pi') + sqrt(maxKL(mu||pi) maxKL(pi||pi')),
/// the Pinsker/triangle chain behind the adaptive trust region.
template <typename Scalar>
BoundCheck<Scalar> pinsker_chain_check(const TabularPolicy<Scalar>& mu, const TabularPolicy<Scalar>& pi,
                                       const TabularPolicy<Scalar>& candidate, Scalar tol = Scalar(1e-12)) {
  const Scalar kl_step = max_kl(pi, candidate);
  const Scalar kl_old = max_kl(mu, pi);
  return make_check(max_tv(mu, candidate) * max_tv(pi, candidate), kl_step + std::sqrt(kl_old * kl_step), tol);
}

}  // namespace offtrc::oracle

#endif  // OFFTRC_ORACLE_BOUNDS_HPP
