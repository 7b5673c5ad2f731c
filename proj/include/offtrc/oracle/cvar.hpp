#ifndef OFFTRC_ORACLE_CVAR_HPP
#define OFFTRC_ORACLE_CVAR_HPP

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace offtrc::oracle {

// Risk level convention: alpha is the tail mass. alpha = 1 is the plain
// expectation and smaller alpha looks further into the worst tail.

template <typename Scalar>
Scalar normal_pdf(Scalar z) {
  return std::exp(-z * z / Scalar(2)) / std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>);
}

template <typename Scalar>
Scalar normal_quantile(Scalar p) {
  if (!(p > Scalar(0)) || !(p < Scalar(1))) throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
  return -std::numbers::sqrt2_v<Scalar> * boost::math::erfc_inv(Scalar(2) * p);
}

/// k_alpha = phi(Phi^-1(alpha)) / alpha, with k_1 := 0.
template <typename Scalar>
Scalar cvar_factor(Scalar alpha) {
  if (!(alpha > Scalar(0)) || alpha > Scalar(1)) throw std::invalid_argument("cvar_factor: alpha must lie in (0,1]");
  if (alpha == Scalar(1)) return Scalar(0);
  return normal_pdf(normal_quantile(alpha)) / alpha;
}

/// CVaR of a Gaussian with mean J_C and second moment J_S. A negative variance
/// (roundoff or estimation error) is clamped to `variance_floor`.
template <typename Scalar>
Scalar gaussian_cvar(Scalar cost_mean, Scalar cost_square, Scalar alpha, Scalar variance_floor = Scalar(0)) {
  const Scalar k = cvar_factor(alpha);
  if (k == Scalar(0)) return cost_mean;
  const Scalar var = std::max(cost_square - cost_mean * cost_mean, variance_floor);
  return cost_mean + k * std::sqrt(var);
}

/// CVaR of the empirical distribution: mean of the worst alpha-fraction of the
/// samples, with fractional weight on the boundary sample. Equals
/// min_nu nu + E[(X - nu)_+] / alpha.
template <typename Scalar>
Scalar empirical_cvar(std::span<const Scalar> samples, Scalar alpha) {
  if (samples.empty()) throw std::invalid_argument("empirical_cvar: no samples");
  if (!(alpha > Scalar(0)) || alpha > Scalar(1)) throw std::invalid_argument("empirical_cvar: alpha must lie in (0,1]");
  const auto n = static_cast<Scalar>(samples.size());
  if (alpha * n < Scalar(1) - Scalar(1e-12))
    throw std::invalid_argument("empirical_cvar: need at least 1/alpha samples");
  std::vector<Scalar> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());
  const Scalar tail = alpha * n;
  Scalar sum = 0, used = 0;
  for (const Scalar x : sorted) {
    const Scalar w = std::min(Scalar(1), tail - used);
    if (w <= Scalar(0)) break;
    sum += w * x;
    used += w;
  }
  return sum / tail;
}

}  // namespace offtrc::oracle

#endif  // OFFTRC_ORACLE_CVAR_HPP
