#ifndef OFFTRC_TRC_TRUST_REGION_HPP
#define OFFTRC_TRC_TRUST_REGION_HPP

#include <algorithm>
#include <cmath>

namespace offtrc {

/// Share of the trust region already used by the distance between the
/// behavior data and the current policy:
///   delta_old = sqrt(m (delta + m/4)) - m/2,  m = KL(mu || pi).
/// Negative estimates (sampling noise) are treated as zero.
inline double compute_delta_old(double kl_behavior, double delta) {
  const double m = std::max(kl_behavior, 0.0);
  if (m == 0.0) return 0.0;
  // Rationalized form of the expression above; avoids cancellation for large m.
  const double root = std::sqrt(m * (delta + 0.25 * m));
  return std::min(m * delta / (root + 0.5 * m), delta);
}

struct TrustRegionState {
  double delta = 0.001;
  double kl_behavior = 0.0;  // estimated KL(mu || pi) on the batch
  double delta_old = 0.0;

  double effective() const { return delta - delta_old; }
};

inline TrustRegionState make_trust_region(double delta, double kl_behavior) {
  return {delta, kl_behavior, compute_delta_old(kl_behavior, delta)};
}

}  // namespace offtrc

#endif  // OFFTRC_TRC_TRUST_REGION_HPP
