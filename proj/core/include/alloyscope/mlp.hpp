#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace alloyscope {

/// Fully connected regression network with PReLU hidden activations.
///
/// layer_dims = {inputs, hidden..., outputs}. weights[l] maps layer l to
/// layer l+1 and has shape dims[l+1] x dims[l]. Each hidden layer has one
/// learnable PReLU slope. Inputs are standardized with input_mean/input_std
/// before the first layer and outputs are mapped back with
/// output_mean/output_std, so callers always work in original units.
struct MlpModel {
  std::vector<std::size_t> layer_dims;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  std::vector<double> prelu_alpha;

  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  Eigen::VectorXd input_mean;
  Eigen::VectorXd input_std;
  Eigen::VectorXd output_mean;
  Eigen::VectorXd output_std;

  std::size_t input_dim() const { return layer_dims.front(); }
  std::size_t output_dim() const { return layer_dims.back(); }
  std::size_t hidden_layers() const { return layer_dims.size() - 2; }

  /// Throws ShapeMismatch (broken shape chain, missing names or stats,
  /// non-positive std) or NonFiniteInput (non-finite parameter).
  void validate() const;

  friend bool operator==(const MlpModel& a, const MlpModel& b);
};

inline constexpr double kDefaultPreluAlpha = 0.25;

/// Zero weights and biases, unit standardization, generic names.
MlpModel make_zero_model(std::span<const std::size_t> layer_dims,
                         double alpha = kDefaultPreluAlpha);

/// He-uniform weights scaled for PReLU, zero biases. Deterministic in seed.
MlpModel make_random_model(std::span<const std::size_t> layer_dims,
                           std::uint64_t seed, double alpha = kDefaultPreluAlpha);

inline double prelu(double x, double alpha) { return x >= 0.0 ? x : alpha * x; }
/// 1 for x > 0, alpha otherwise (the subgradient at 0 is alpha).
inline double prelu_derivative(double x, double alpha) {
  return x > 0.0 ? 1.0 : alpha;
}

/// Prediction in original units. Throws NonFiniteInput, DimensionMismatch.
Eigen::VectorXd forward(const MlpModel& model, std::span<const double> x);

/// d output / d input in original units (outputs x inputs), by reverse-mode
/// accumulation through the layer chain.
Eigen::MatrixXd input_jacobian(const MlpModel& model, std::span<const double> x);

struct Evaluation {
  Eigen::VectorXd outputs;
  Eigen::MatrixXd jacobian;
};

/// forward() and input_jacobian() sharing one forward pass.
Evaluation evaluate(const MlpModel& model, std::span<const double> x);

/// Column-wise batch prediction: inputs is input_dim x n in original units.
Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs);

/// Smallest |pre-activation| over all hidden units at x, in standardized
/// space. Finite-difference checks skip points close to the PReLU kink.
double min_abs_preactivation(const MlpModel& model, std::span<const double> x);

}  // namespace alloyscope
