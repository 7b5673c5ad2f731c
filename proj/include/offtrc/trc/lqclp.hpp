#ifndef OFFTRC_TRC_LQCLP_HPP
#define OFFTRC_TRC_LQCLP_HPP

#include "offtrc/nn/cg.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>

namespace offtrc {

enum class LqclpCase {
  /// The linear constraint cannot become active inside the trust region.
  Inactive,
  /// Dual solution with the constraint possibly active.
  Constrained,
  /// No feasible point in the trust region; recovery step instead.
  Infeasible,
  /// Degenerate input (zero objective gradient or objective parallel to the
  /// constraint normal).
  Degenerate,
};

const char* lqclp_case_name(LqclpCase c);

template <typename Scalar>
struct LqclpSolution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> direction;
  Scalar lambda = 0;  // trust-region multiplier
  Scalar nu = 0;      // linear-constraint multiplier
  bool feasible = true;
  bool recovery = false;
  /// Recovery requested but the constraint gradient vanished.
  bool alarm = false;
  LqclpCase which = LqclpCase::Inactive;
  /// g^T x and b^T x + c for the full step.
  Scalar predicted_objective = 0;
  Scalar predicted_constraint = 0;
  // Filled in by the line search.
  Scalar step_fraction = 0;
  int backtracks = 0;
  bool accepted = false;
};

/// Inner products of the problem data with H^-1 g and H^-1 b.
template <typename Scalar>
struct LqclpProducts {
  Scalar q = 0;  // g^T H^-1 g
  Scalar r = 0;  // g^T H^-1 b
  Scalar s = 0;  // b^T H^-1 b
};

/// maximize g^T x  s.t.  b^T x + c <= 0,  x^T H x / 2 <= delta,
/// given H^-1 g and H^-1 b. Solves the two-multiplier dual
///   min_{lambda>0, nu>=0} (q - 2 nu r + nu^2 s) / (2 lambda) + lambda delta - nu c
/// in closed form; x = H^-1 (g - nu b) / lambda.
template <typename Scalar>
LqclpSolution<Scalar> solve_lqclp_dual(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& g,
                                       const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                                       const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& hinv_g,
                                       const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& hinv_b, Scalar c, Scalar delta) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Scalar tiny = std::numeric_limits<Scalar>::epsilon();
  const LqclpProducts<Scalar> p{g.dot(hinv_g), g.dot(hinv_b), b.dot(hinv_b)};

  LqclpSolution<Scalar> out;
  out.direction = Vector::Zero(g.size());
  const auto finish = [&] {
    out.predicted_objective = g.dot(out.direction);
    out.predicted_constraint = b.dot(out.direction) + c;
    return out;
  };
  const auto trust_region_step = [&] {
    out.which = LqclpCase::Inactive;
    if (p.q > tiny) {
      out.lambda = std::sqrt(p.q / (Scalar(2) * delta));
      out.direction = hinv_g / out.lambda;
    }
    return finish();
  };

  // No usable constraint normal: only the trust region matters.
  if (p.s <= tiny * std::max(Scalar(1), p.q)) {
    if (c > 0) {
      out.feasible = false;
      out.which = LqclpCase::Infeasible;
      return finish();
    }
    return trust_region_step();
  }

  const Scalar B = Scalar(2) * delta - c * c / p.s;
  if (c < 0 && B < 0) return trust_region_step();
  if (c > 0 && B < 0) {
    out.feasible = false;
    out.which = LqclpCase::Infeasible;
    return finish();
  }

  const Scalar A = p.q - p.r * p.r / p.s;
  if (A <= Scalar(1e-12) * std::max(p.q, tiny)) {
    // g is (anti)parallel to b or zero.
    if (p.q <= tiny) {
      out.which = LqclpCase::Degenerate;
      if (c > 0) {
        out.direction = -(c / p.s) * hinv_b;
        out.nu = Scalar(0);
      }
      return finish();
    }
    if (p.r < 0) return trust_region_step();  // the objective also decreases the constraint
    out.which = LqclpCase::Degenerate;
    out.direction = -(c / p.s) * hinv_b;  // move onto the constraint boundary
    return finish();
  }

  // Dual pieces: nu > 0 (constraint active) and nu = 0. They meet at
  // lambda_mid = -r / c; nu(lambda) = (lambda c + r) / s must stay >= 0.
  const auto dual_active = [&](Scalar lam) { return A / (Scalar(2) * lam) + lam * B / Scalar(2) - c * p.r / p.s; };
  const auto dual_free = [&](Scalar lam) { return p.q / (Scalar(2) * lam) + lam * delta; };
  Scalar lam_a = std::sqrt(A / std::max(B, tiny));
  Scalar lam_b = std::sqrt(p.q / (Scalar(2) * delta));
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  Scalar lo_a = 0, hi_a = inf, lo_b = 0, hi_b = inf;
  if (c > 0) {
    const Scalar mid = -p.r / c;
    lo_a = std::max(mid, Scalar(0));
    hi_b = std::max(mid, Scalar(0));
  } else if (c < 0) {
    const Scalar mid = -p.r / c;
    hi_a = std::max(mid, Scalar(0));
    lo_b = std::max(mid, Scalar(0));
  } else {
    // c == 0: the active piece applies when r >= 0, the free piece otherwise.
    if (p.r >= 0)
      hi_b = 0;
    else
      hi_a = 0;
  }
  const bool a_ok = hi_a > 0 && B > 0;
  const bool b_ok = hi_b > 0 && lo_b < inf;
  lam_a = std::clamp(lam_a, std::max(lo_a, tiny), std::max(hi_a, tiny));
  lam_b = std::clamp(lam_b, std::max(lo_b, tiny), std::max(hi_b, tiny));
  const Scalar val_a = a_ok ? dual_active(lam_a) : inf;
  const Scalar val_b = b_ok ? dual_free(lam_b) : inf;

  out.which = LqclpCase::Constrained;
  if (val_a <= val_b) {
    out.lambda = lam_a;
    out.nu = std::max(Scalar(0), (lam_a * c + p.r) / p.s);
  } else {
    out.lambda = lam_b;
    out.nu = Scalar(0);
  }
  out.direction = (hinv_g - out.nu * hinv_b) / out.lambda;
  return finish();
}

/// Constraint-only step: x = -sqrt(2 delta / (b^T H^-1 b)) H^-1 b.
template <typename Scalar>
LqclpSolution<Scalar> recovery_direction(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                                         const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& hinv_b, Scalar c,
                                         Scalar delta) {
  LqclpSolution<Scalar> out;
  out.recovery = true;
  out.feasible = false;
  out.which = LqclpCase::Infeasible;
  const Scalar s = b.dot(hinv_b);
  if (!(s > std::numeric_limits<Scalar>::min())) {
    out.alarm = true;
    out.direction = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(b.size());
  } else {
    out.direction = -std::sqrt(Scalar(2) * delta / s) * hinv_b;
  }
  out.predicted_constraint = b.dot(out.direction) + c;
  return out;
}

struct LqclpOptions {
  int cg_iters = 10;
  double cg_tol = 1e-8;
};

/// LQCLP with H given as an operator; H^-1 g and H^-1 b come from conjugate
/// gradient. Falls back to the recovery step when infeasible.
template <typename Scalar, typename Operator>
LqclpSolution<Scalar> solve_lqclp(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& g,
                                  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b, Operator&& hvp, Scalar delta,
                                  Scalar c, const LqclpOptions& opt = {}) {
  const auto hinv_b = conjugate_gradient<Scalar>(hvp, b, opt.cg_iters, Scalar(opt.cg_tol)).x;
  const auto hinv_g = g.isZero(0) ? Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(g.size()).eval()
                                  : conjugate_gradient<Scalar>(hvp, g, opt.cg_iters, Scalar(opt.cg_tol)).x;
  auto sol = solve_lqclp_dual<Scalar>(g, b, hinv_g, hinv_b, c, delta);
  if (!sol.feasible) return recovery_direction<Scalar>(b, hinv_b, c, delta);
  if (!sol.direction.allFinite()) return recovery_direction<Scalar>(b, hinv_b, c, delta);
  return sol;
}

template <typename Scalar, typename Operator>
LqclpSolution<Scalar> recovery_step(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b, Operator&& hvp, Scalar delta,
                                    Scalar c = 0, const LqclpOptions& opt = {}) {
  const auto hinv_b = conjugate_gradient<Scalar>(hvp, b, opt.cg_iters, Scalar(opt.cg_tol)).x;
  return recovery_direction<Scalar>(b, hinv_b, c, delta);
}

inline const char* lqclp_case_name(LqclpCase c) {
  switch (c) {
    case LqclpCase::Inactive: return "inactive";
    case LqclpCase::Constrained: return "constrained";
    case LqclpCase::Infeasible: return "infeasible";
    case LqclpCase::Degenerate: return "degenerate";
  }
  return "?";
}

}  // namespace offtrc

#endif  // OFFTRC_TRC_LQCLP_HPP
