#ifndef OFFTRC_NN_CG_HPP
#define OFFTRC_NN_CG_HPP

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace offtrc {

template <typename Scalar>
struct CgResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  /// ||b - H x_k|| after each iteration, starting with ||b||.
  std::vector<Scalar> residual_norms;
  int iterations = 0;
};

/// Conjugate gradient for H x = b with H symmetric positive definite, given
/// only the product v -> H v. Starts from x = 0 and stops after `max_iters`
/// iterations or once the residual norm drops to `tol`.
template <typename Scalar, typename Operator>
CgResult<Scalar> conjugate_gradient(Operator&& hvp, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                                    int max_iters = 10, Scalar tol = Scalar(1e-8)) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  CgResult<Scalar> out;
  out.x = Vector::Zero(b.size());
  Vector r = b;
  Vector p = r;
  Scalar rr = r.squaredNorm();
  out.residual_norms.push_back(std::sqrt(rr));
  for (int k = 0; k < max_iters && std::sqrt(rr) > tol; ++k) {
    const Vector hp = hvp(p);
    const Scalar curvature = p.dot(hp);
    if (!std::isfinite(curvature)) throw std::runtime_error("conjugate_gradient: non-finite curvature");
    if (curvature <= Scalar(0)) throw std::runtime_error("conjugate_gradient: operator is not positive definite");
    const Scalar step = rr / curvature;
    out.x += step * p;
    r -= step * hp;
    const Scalar rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    out.residual_norms.push_back(std::sqrt(rr));
    out.iterations = k + 1;
  }
  if (!out.x.allFinite()) throw std::runtime_error("conjugate_gradient: non-finite solution");
  return out;
}

}  // namespace offtrc

#endif  // OFFTRC_NN_CG_HPP
