#ifndef OFFTRC_NN_MLP_HPP
#define OFFTRC_NN_MLP_HPP

#include <Eigen/Core>

#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace offtrc {

/// Raised when a forward/backward pass produces NaN or infinity.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int layer) : std::runtime_error(what), layer_(layer) {}
  /// Layer where the first non-finite value appeared (-1 when not layer-specific).
  int layer() const { return layer_; }

 private:
  int layer_;
};

/// Matrix-free symmetric operator, e.g. a damped Hessian-vector product.
using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Fully connected network with rectifier hidden layers and a linear output.
///
/// Parameters live in one flat vector. Layer l occupies W_l (column-major,
/// out x in) followed by b_l. Batches are column-major: one sample per column.
class Mlp {
 public:
  /// Activations recorded by a forward pass; input to each layer.
  struct Tape {
    std::vector<Eigen::MatrixXd> inputs;
  };

  Mlp() = default;
  /// sizes = {input, hidden..., output}
  explicit Mlp(std::vector<Eigen::Index> sizes);

  Eigen::Index input_dim() const { return sizes_.front(); }
  Eigen::Index output_dim() const { return sizes_.back(); }
  Eigen::Index num_params() const { return params_.size(); }
  std::size_t num_layers() const { return sizes_.size() - 1; }
  const std::vector<Eigen::Index>& layer_sizes() const { return sizes_; }

  const Eigen::VectorXd& params() const { return params_; }
  void set_params(const Eigen::VectorXd& p);

  /// He-uniform hidden layers; the output layer is scaled by `output_gain`.
  void initialize(std::mt19937_64& rng, double output_gain = 1.0);

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Tape& tape) const;

  /// Gradient of sum(d_out .* y) with respect to the parameters.
  Eigen::VectorXd backward(const Tape& tape, const Eigen::MatrixXd& d_out) const;

  /// Directional derivative of the outputs along the parameter direction v.
  Eigen::MatrixXd jvp(const Tape& tape, const Eigen::VectorXd& v) const;

  Eigen::Map<const Eigen::MatrixXd> weight(std::size_t layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(std::size_t layer) const;

 private:
  std::vector<Eigen::Index> sizes_;
  std::vector<Eigen::Index> offsets_;
  Eigen::VectorXd params_;
};

}  // namespace offtrc

#endif  // OFFTRC_NN_MLP_HPP
