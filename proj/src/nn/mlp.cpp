#include "offtrc/nn/mlp.hpp"

#include <cmath>

namespace offtrc {

namespace {
void require_finite(const Eigen::MatrixXd& m, int layer, const char* stage) {
  if (!m.allFinite()) throw NumericalError(std::string("non-finite value in ") + stage, layer);
}
}  // namespace

Mlp::Mlp(std::vector<Eigen::Index> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
  Eigen::Index total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] <= 0 || sizes_[l + 1] <= 0) throw std::invalid_argument("Mlp: layer sizes must be positive");
    offsets_.push_back(total);
    total += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
  params_ = Eigen::VectorXd::Zero(total);
}

void Mlp::set_params(const Eigen::VectorXd& p) {
  if (p.size() != params_.size()) throw std::invalid_argument("Mlp::set_params: parameter count mismatch");
  params_ = p;
}

Eigen::Map<const Eigen::MatrixXd> Mlp::weight(std::size_t l) const {
  return {params_.data() + offsets_[l], sizes_[l + 1], sizes_[l]};
}

Eigen::Map<const Eigen::VectorXd> Mlp::bias(std::size_t l) const {
  return {params_.data() + offsets_[l] + sizes_[l + 1] * sizes_[l], sizes_[l + 1]};
}

void Mlp::initialize(std::mt19937_64& rng, double output_gain) {
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const bool last = l + 1 == num_layers();
    const double limit = std::sqrt(6.0 / static_cast<double>(sizes_[l])) * (last ? output_gain : 1.0);
    std::uniform_real_distribution<double> u(-limit, limit);
    const Eigen::Index n = sizes_[l + 1] * sizes_[l];
    for (Eigen::Index i = 0; i < n; ++i) params_(offsets_[l] + i) = u(rng);
    params_.segment(offsets_[l] + n, sizes_[l + 1]).setZero();
  }
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  return forward(Eigen::MatrixXd(x)).col(0);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  Tape tape;
  return forward(x, tape);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Tape& tape) const {
  if (x.rows() != input_dim()) throw std::invalid_argument("Mlp::forward: input dimension mismatch");
  tape.inputs.clear();
  tape.inputs.reserve(num_layers());
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < num_layers(); ++l) {
    Eigen::MatrixXd z = weight(l) * a;
    z.colwise() += bias(l);
    require_finite(z, static_cast<int>(l), "forward pass");
    tape.inputs.push_back(std::move(a));
    a = l + 1 < num_layers() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

Eigen::VectorXd Mlp::backward(const Tape& tape, const Eigen::MatrixXd& d_out) const {
  if (tape.inputs.size() != num_layers()) throw std::invalid_argument("Mlp::backward: tape does not match network");
  Eigen::VectorXd grad(num_params());
  Eigen::MatrixXd delta = d_out;
  for (std::size_t l = num_layers(); l-- > 0;) {
    require_finite(delta, static_cast<int>(l), "backward pass");
    const Eigen::Index out = sizes_[l + 1], in = sizes_[l];
    Eigen::Map<Eigen::MatrixXd>(grad.data() + offsets_[l], out, in).noalias() = delta * tape.inputs[l].transpose();
    grad.segment(offsets_[l] + out * in, out) = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = weight(l).transpose() * delta;
      delta = (tape.inputs[l].array() > 0.0).select(back, 0.0);
    }
  }
  return grad;
}

Eigen::MatrixXd Mlp::jvp(const Tape& tape, const Eigen::VectorXd& v) const {
  if (v.size() != num_params()) throw std::invalid_argument("Mlp::jvp: direction size mismatch");
  const Eigen::Index batch = tape.inputs.front().cols();
  Eigen::MatrixXd tangent = Eigen::MatrixXd::Zero(sizes_[0], batch);
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const Eigen::Index out = sizes_[l + 1], in = sizes_[l];
    Eigen::Map<const Eigen::MatrixXd> dw(v.data() + offsets_[l], out, in);
    Eigen::MatrixXd dz = dw * tape.inputs[l];
    if (l > 0) dz.noalias() += weight(l) * tangent;
    dz.colwise() += v.segment(offsets_[l] + out * in, out);
    if (l + 1 < num_layers())
      tangent = (tape.inputs[l + 1].array() > 0.0).select(dz, 0.0);
    else
      tangent = std::move(dz);
  }
  return tangent;
}

}  // namespace offtrc
