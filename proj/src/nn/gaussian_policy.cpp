#include "offtrc/nn/gaussian_policy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace offtrc {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2 pi) / 2
}

Eigen::VectorXd kl_hvp(const Policy& policy, const Eigen::MatrixXd& states, const Eigen::VectorXd& v, double damping) {
  Eigen::VectorXd hv = policy.kl_hessian(states)(v) + damping * v;
  if (!hv.allFinite()) throw NumericalError("kl_hvp: non-finite product", -1);
  return hv;
}

GaussianPolicy::GaussianPolicy(Mlp mean, Eigen::VectorXd log_std) : mean_(std::move(mean)), log_std_(std::move(log_std)) {
  if (log_std_.size() != mean_.output_dim()) throw std::invalid_argument("GaussianPolicy: log_std size mismatch");
  log_std_ = log_std_.cwiseMax(kMinLogStd).cwiseMin(kMaxLogStd);
}

GaussianPolicy GaussianPolicy::make(Eigen::Index obs_dim, Eigen::Index action_dim,
                                    const std::vector<Eigen::Index>& hidden, double init_log_std,
                                    std::mt19937_64& rng) {
  std::vector<Eigen::Index> sizes{obs_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(action_dim);
  Mlp net(sizes);
  net.initialize(rng, 0.01);
  return GaussianPolicy(std::move(net), Eigen::VectorXd::Constant(action_dim, init_log_std));
}

Eigen::VectorXd GaussianPolicy::params() const {
  Eigen::VectorXd theta(num_params());
  theta << mean_.params(), log_std_;
  return theta;
}

void GaussianPolicy::set_params(const Eigen::VectorXd& theta) {
  if (theta.size() != num_params()) throw std::invalid_argument("GaussianPolicy::set_params: size mismatch");
  mean_.set_params(theta.head(mean_.num_params()));
  log_std_ = theta.tail(log_std_.size()).cwiseMax(kMinLogStd).cwiseMin(kMaxLogStd);
}

DistributionBatch GaussianPolicy::distribution(const Eigen::MatrixXd& states) const {
  return {mean_.forward(states), log_std_};
}

Eigen::VectorXd GaussianPolicy::log_prob(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions) const {
  const Eigen::MatrixXd mu = mean_.forward(states);
  const Eigen::ArrayXd inv_std = (-log_std_).array().exp();
  const Eigen::ArrayXXd z = (actions - mu).array().colwise() * inv_std;
  const double norm = log_std_.sum() + kHalfLog2Pi * static_cast<double>(log_std_.size());
  return (-0.5 * z.square().colwise().sum() - norm).matrix().transpose();
}

Eigen::VectorXd GaussianPolicy::grad_log_prob(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions,
                                              const Eigen::VectorXd& weights) const {
  Mlp::Tape tape;
  const Eigen::MatrixXd mu = mean_.forward(states, tape);
  const Eigen::ArrayXd inv_var = (-2.0 * log_std_).array().exp();
  const Eigen::ArrayXXd diff = (actions - mu).array();
  // d/dmu = w (a - mu) / sigma^2 ; d/dlog_std = w ((a - mu)^2 / sigma^2 - 1)
  const Eigen::MatrixXd d_mean = ((diff.colwise() * inv_var).rowwise() * weights.transpose().array()).matrix();
  Eigen::VectorXd grad(num_params());
  grad.head(mean_.num_params()) = mean_.backward(tape, d_mean);
  grad.tail(log_std_.size()) =
      ((diff.square().colwise() * inv_var - 1.0).rowwise() * weights.transpose().array()).rowwise().sum().matrix();
  return grad;
}

double GaussianPolicy::mean_kl(const Eigen::MatrixXd& states, const DistributionBatch& old) const {
  const Eigen::MatrixXd mu = mean_.forward(states);
  const Eigen::ArrayXd inv_var = (-2.0 * log_std_).array().exp();
  const Eigen::ArrayXd old_var = (2.0 * old.log_std).array().exp();
  const Eigen::ArrayXXd sq = (old.head - mu).array().square();
  const double n = static_cast<double>(states.cols());
  const double per_state = (log_std_ - old.log_std).sum() + 0.5 * (old_var * inv_var).sum() -
                           0.5 * static_cast<double>(log_std_.size());
  return per_state + 0.5 * (sq.colwise() * inv_var).sum() / n;
}

Eigen::VectorXd GaussianPolicy::mean_kl_grad(const Eigen::MatrixXd& states, const DistributionBatch& old) const {
  Mlp::Tape tape;
  const Eigen::MatrixXd mu = mean_.forward(states, tape);
  const Eigen::ArrayXd inv_var = (-2.0 * log_std_).array().exp();
  const Eigen::ArrayXd old_var = (2.0 * old.log_std).array().exp();
  const double n = static_cast<double>(states.cols());
  const Eigen::ArrayXXd diff = (mu - old.head).array();
  Eigen::VectorXd grad(num_params());
  grad.head(mean_.num_params()) = mean_.backward(tape, ((diff.colwise() * inv_var) / n).matrix());
  const Eigen::ArrayXd mean_sq = diff.square().rowwise().sum() / n;
  grad.tail(log_std_.size()) = (1.0 - (old_var + mean_sq) * inv_var).matrix();
  return grad;
}

LinearOperator GaussianPolicy::kl_hessian(const Eigen::MatrixXd& states) const {
  // At the old parameters the KL Hessian is the Fisher form J^T diag(1/sigma^2) J
  // for the mean plus 2 I for the log-deviations.
  auto tape = std::make_shared<Mlp::Tape>();
  mean_.forward(states, *tape);
  const Eigen::ArrayXd inv_var = (-2.0 * log_std_).array().exp();
  const double n = static_cast<double>(states.cols());
  const Eigen::Index np = mean_.num_params();
  return [this_mean = mean_, tape, inv_var, n, np](const Eigen::VectorXd& v) {
    Eigen::VectorXd hv(v.size());
    const Eigen::MatrixXd jv = this_mean.jvp(*tape, v.head(np));
    hv.head(np) = this_mean.backward(*tape, ((jv.array().colwise() * inv_var) / n).matrix());
    hv.tail(v.size() - np) = 2.0 * v.tail(v.size() - np);
    return hv;
  };
}

ActionSample GaussianPolicy::sample(const Eigen::VectorXd& state, std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::VectorXd mu = mean_.forward(state);
  Eigen::VectorXd eps(mu.size());
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps(i) = normal(rng);
  ActionSample out;
  out.action = mu + (log_std_.array().exp() * eps.array()).matrix();
  const double log_p = -0.5 * eps.squaredNorm() - log_std_.sum() - kHalfLog2Pi * static_cast<double>(mu.size());
  out.prob = std::exp(log_p);
  return out;
}

Eigen::VectorXd GaussianPolicy::mode(const Eigen::VectorXd& state) const { return mean_.forward(state); }

double gaussian_kl(const Eigen::VectorXd& mean0, const Eigen::VectorXd& log_std0, const Eigen::VectorXd& mean1,
                   const Eigen::VectorXd& log_std1) {
  const Eigen::ArrayXd var0 = (2.0 * log_std0).array().exp();
  const Eigen::ArrayXd var1 = (2.0 * log_std1).array().exp();
  return ((log_std1 - log_std0).array() + (var0 + (mean0 - mean1).array().square()) / (2.0 * var1) - 0.5).sum();
}

}  // namespace offtrc
