#include "alloyscope/mlp.hpp"

#include <cmath>
#include <limits>

#include "alloyscope/error.hpp"
#include "alloyscope/random.hpp"

namespace alloyscope {

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

Eigen::VectorXd standardize_input(const MlpModel& model, std::span<const double> x) {
  if (x.size() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(model.input_dim()) + " inputs, got " +
                    std::to_string(x.size()));
  }
  Eigen::Map<const Eigen::VectorXd> raw(x.data(), static_cast<Eigen::Index>(x.size()));
  if (!raw.allFinite()) throw Error(ErrorCode::NonFiniteInput, "input has NaN or inf");
  return ((raw - model.input_mean).array() / model.input_std.array()).matrix();
}

// Hidden pre-activations for one standardized input; the last entry of the
// returned vector is the standardized output.
std::vector<Eigen::VectorXd> run_layers(const MlpModel& model,
                                        const Eigen::VectorXd& x_hat) {
  std::vector<Eigen::VectorXd> pre;
  pre.reserve(model.weights.size());
  Eigen::VectorXd activation = x_hat;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    Eigen::VectorXd z = model.weights[l] * activation + model.biases[l];
    if (l + 1 < model.weights.size()) {
      const double alpha = model.prelu_alpha[l];
      activation = z.unaryExpr([alpha](double v) { return prelu(v, alpha); });
    }
    pre.push_back(std::move(z));
  }
  return pre;
}

Eigen::MatrixXd jacobian_from_preactivations(const MlpModel& model,
                                             const std::vector<Eigen::VectorXd>& pre) {
  // Start from the output layer and pull the sensitivity back one layer at a
  // time: G <- (G * diag(prelu'(z_l))) * W_l.
  const auto last = model.weights.size() - 1;
  Eigen::MatrixXd g = model.weights[last];
  for (std::size_t l = last; l-- > 0;) {
    const double alpha = model.prelu_alpha[l];
    const Eigen::VectorXd slope =
        pre[l].unaryExpr([alpha](double v) { return prelu_derivative(v, alpha); });
    g = (g * slope.asDiagonal()) * model.weights[l];
  }
  return model.output_std.asDiagonal() * g *
         model.input_std.cwiseInverse().asDiagonal();
}

}  // namespace

void MlpModel::validate() const {
  if (layer_dims.size() < 2) throw Error(ErrorCode::ShapeMismatch, "need at least 2 layer dims");
  const auto layers = layer_dims.size() - 1;
  if (weights.size() != layers || biases.size() != layers ||
      prelu_alpha.size() != layers - 1) {
    throw Error(ErrorCode::ShapeMismatch, "parameter count does not match layer_dims");
  }
  for (std::size_t l = 0; l < layers; ++l) {
    const auto rows = static_cast<Eigen::Index>(layer_dims[l + 1]);
    const auto cols = static_cast<Eigen::Index>(layer_dims[l]);
    if (weights[l].rows() != rows || weights[l].cols() != cols || biases[l].size() != rows) {
      throw Error(ErrorCode::ShapeMismatch, "layer " + std::to_string(l) + " has wrong shape");
    }
    if (!all_finite(weights[l]) || !biases[l].allFinite()) {
      throw Error(ErrorCode::NonFiniteInput, "layer " + std::to_string(l) + " is not finite");
    }
  }
  for (double a : prelu_alpha) {
    if (!std::isfinite(a)) throw Error(ErrorCode::NonFiniteInput, "non-finite PReLU slope");
  }
  const auto in = static_cast<Eigen::Index>(input_dim());
  const auto out = static_cast<Eigen::Index>(output_dim());
  if (input_names.size() != input_dim() || output_names.size() != output_dim() ||
      input_mean.size() != in || input_std.size() != in || output_mean.size() != out ||
      output_std.size() != out) {
    throw Error(ErrorCode::ShapeMismatch, "names or standardization stats have wrong size");
  }
  if (!input_mean.allFinite() || !output_mean.allFinite() || !input_std.allFinite() ||
      !output_std.allFinite() || (input_std.array() <= 0.0).any() ||
      (output_std.array() <= 0.0).any()) {
    throw Error(ErrorCode::ShapeMismatch, "standardization stats must be finite with std > 0");
  }
}

bool operator==(const MlpModel& a, const MlpModel& b) {
  if (a.layer_dims != b.layer_dims || a.prelu_alpha != b.prelu_alpha ||
      a.input_names != b.input_names || a.output_names != b.output_names ||
      a.weights.size() != b.weights.size()) {
    return false;
  }
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    if (a.weights[l] != b.weights[l] || a.biases[l] != b.biases[l]) return false;
  }
  return a.input_mean == b.input_mean && a.input_std == b.input_std &&
         a.output_mean == b.output_mean && a.output_std == b.output_std;
}

MlpModel make_zero_model(std::span<const std::size_t> layer_dims, double alpha) {
  if (layer_dims.size() < 2) throw Error(ErrorCode::ShapeMismatch, "need at least 2 layer dims");
  MlpModel model;
  model.layer_dims.assign(layer_dims.begin(), layer_dims.end());
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    const auto rows = static_cast<Eigen::Index>(layer_dims[l + 1]);
    const auto cols = static_cast<Eigen::Index>(layer_dims[l]);
    model.weights.push_back(Eigen::MatrixXd::Zero(rows, cols));
    model.biases.push_back(Eigen::VectorXd::Zero(rows));
  }
  model.prelu_alpha.assign(layer_dims.size() - 2, alpha);
  const auto in = static_cast<Eigen::Index>(model.input_dim());
  const auto out = static_cast<Eigen::Index>(model.output_dim());
  for (std::size_t i = 0; i < model.input_dim(); ++i) {
    model.input_names.push_back("x" + std::to_string(i));
  }
  for (std::size_t j = 0; j < model.output_dim(); ++j) {
    model.output_names.push_back("y" + std::to_string(j));
  }
  model.input_mean = Eigen::VectorXd::Zero(in);
  model.input_std = Eigen::VectorXd::Ones(in);
  model.output_mean = Eigen::VectorXd::Zero(out);
  model.output_std = Eigen::VectorXd::Ones(out);
  return model;
}

MlpModel make_random_model(std::span<const std::size_t> layer_dims, std::uint64_t seed,
                           double alpha) {
  MlpModel model = make_zero_model(layer_dims, alpha);
  Rng rng(seed);
  for (auto& w : model.weights) {
    const double bound = std::sqrt(6.0 / ((1.0 + alpha * alpha) * static_cast<double>(w.cols())));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-bound, bound);
    }
  }
  return model;
}

Eigen::VectorXd forward(const MlpModel& model, std::span<const double> x) {
  const auto pre = run_layers(model, standardize_input(model, x));
  return (pre.back().array() * model.output_std.array() + model.output_mean.array()).matrix();
}

Eigen::MatrixXd input_jacobian(const MlpModel& model, std::span<const double> x) {
  const auto pre = run_layers(model, standardize_input(model, x));
  return jacobian_from_preactivations(model, pre);
}

Evaluation evaluate(const MlpModel& model, std::span<const double> x) {
  const auto pre = run_layers(model, standardize_input(model, x));
  Evaluation result;
  result.outputs =
      (pre.back().array() * model.output_std.array() + model.output_mean.array()).matrix();
  result.jacobian = jacobian_from_preactivations(model, pre);
  return result;
}

Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != static_cast<Eigen::Index>(model.input_dim())) {
    throw Error(ErrorCode::DimensionMismatch, "batch has wrong input dimension");
  }
  if (!inputs.allFinite()) throw Error(ErrorCode::NonFiniteInput, "batch has NaN or inf");
  Eigen::MatrixXd a = ((inputs.colwise() - model.input_mean).array().colwise() /
                       model.input_std.array())
                          .matrix();
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    Eigen::MatrixXd z = (model.weights[l] * a).colwise() + model.biases[l];
    if (l + 1 < model.weights.size()) {
      const double alpha = model.prelu_alpha[l];
      a = z.unaryExpr([alpha](double v) { return prelu(v, alpha); });
    } else {
      a = std::move(z);
    }
  }
  return ((a.array().colwise() * model.output_std.array()).colwise() +
          model.output_mean.array())
      .matrix();
}

double min_abs_preactivation(const MlpModel& model, std::span<const double> x) {
  const auto pre = run_layers(model, standardize_input(model, x));
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l + 1 < pre.size(); ++l) {
    smallest = std::min(smallest, pre[l].cwiseAbs().minCoeff());
  }
  return smallest;
}

}  // namespace alloyscope
