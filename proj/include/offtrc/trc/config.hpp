#ifndef OFFTRC_TRC_CONFIG_HPP
#define OFFTRC_TRC_CONFIG_HPP

#include "offtrc/oracle/cvar.hpp"

#include <stdexcept>

namespace offtrc {

/// CVaR constraint CVaR_alpha(C) <= d / (1 - gamma).
struct CVaRConfig {
  double alpha = 0.125;
  /// Per-step cost limit d.
  double limit = 0.025;
  double gamma = 0.99;

  void validate() const {
    if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("CVaRConfig: alpha must lie in (0,1]");
    if (!(gamma > 0.0) || !(gamma < 1.0)) throw std::invalid_argument("CVaRConfig: gamma must lie in (0,1)");
    if (limit < 0.0) throw std::invalid_argument("CVaRConfig: limit must be nonnegative");
  }
  /// phi(Phi^-1(alpha)) / alpha, exactly 0 at alpha = 1.
  double k_alpha() const { return oracle::cvar_factor(alpha); }
  double threshold() const { return limit / (1.0 - gamma); }
};

/// Knobs of one policy update.
struct UpdateConfig {
  double delta = 0.001;
  double damping = 0.01;
  int cg_iters = 10;
  double cg_tol = 1e-8;
  int max_backtracks = 10;
  double ratio_min = 1e-3;
  double ratio_max = 1e3;
  double variance_floor = 1e-8;
  double trace_decay = 0.97;
  /// false gives the on-policy-style variant: off-policy data is treated as if
  /// it came from the current policy (ratios pi/pi_old, no retrace truncation,
  /// delta_old = 0).
  bool off_policy_correction = true;
  /// false drops the CVaR constraint (unconstrained trust-region baseline).
  bool constrained = true;
};

}  // namespace offtrc

#endif  // OFFTRC_TRC_CONFIG_HPP
