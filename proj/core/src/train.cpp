#include "alloyscope/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "alloyscope/error.hpp"
#include "alloyscope/random.hpp"

namespace alloyscope {

namespace {

// Columns of `dataset` as a (columns x rows) matrix, one sample per column.
Eigen::MatrixXd gather(const Dataset& dataset, std::span<const std::size_t> columns,
                       std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(columns.size()),
                      static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto row = dataset.row(rows[j]);
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[columns[i]];
    }
  }
  return out;
}

std::vector<std::size_t> resolve(const Dataset& dataset,
                                 std::span<const std::string> names) {
  std::vector<std::size_t> out;
  for (const auto& name : names) {
    auto c = dataset.find_column(name);
    if (!c) throw Error(ErrorCode::ShapeMismatch, "dataset has no column " + name);
    out.push_back(*c);
  }
  return out;
}

void column_moments(const Eigen::MatrixXd& data, Eigen::VectorXd& mean,
                    Eigen::VectorXd& std) {
  mean = data.rowwise().mean();
  std = ((data.colwise() - mean).array().square().rowwise().sum() /
         static_cast<double>(data.cols()))
            .sqrt()
            .matrix();
  // Constant columns are only centred.
  for (Eigen::Index i = 0; i < std.size(); ++i) {
    if (!(std(i) > 0.0)) std(i) = 1.0;
  }
}

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  std::vector<double> alpha;
};

// Forward + backward pass on standardized data; returns the batch MSE.
double backprop(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                Gradients& grad) {
  const auto layers = model.weights.size();
  std::vector<Eigen::MatrixXd> activations;  // inputs to each layer
  std::vector<Eigen::MatrixXd> pre;          // hidden pre-activations
  activations.reserve(layers);
  pre.reserve(layers - 1);
  activations.push_back(x);
  Eigen::MatrixXd out;
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = (model.weights[l] * activations.back()).colwise() + model.biases[l];
    if (l + 1 < layers) {
      const double alpha = model.prelu_alpha[l];
      activations.push_back(z.unaryExpr([alpha](double v) { return prelu(v, alpha); }));
      pre.push_back(std::move(z));
    } else {
      out = std::move(z);
    }
  }

  const double count = static_cast<double>(y.size());
  Eigen::MatrixXd delta = out - y;
  const double loss = delta.squaredNorm() / count;
  delta *= 2.0 / count;

  for (std::size_t l = layers; l-- > 0;) {
    grad.weights[l].noalias() = delta * activations[l].transpose();
    grad.biases[l] = delta.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd upstream = model.weights[l].transpose() * delta;
    const auto& z = pre[l - 1];
    const double alpha = model.prelu_alpha[l - 1];
    grad.alpha[l - 1] = (upstream.array() * z.array().min(0.0)).sum();
    delta = upstream.array() *
            z.unaryExpr([alpha](double v) { return prelu_derivative(v, alpha); }).array();
  }
  return loss;
}

double mse(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.cols() == 0) return 0.0;
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    Eigen::MatrixXd z = (model.weights[l] * a).colwise() + model.biases[l];
    if (l + 1 < model.weights.size()) {
      const double alpha = model.prelu_alpha[l];
      a = z.unaryExpr([alpha](double v) { return prelu(v, alpha); });
    } else {
      a = std::move(z);
    }
  }
  return (a - y).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs == 0 || batch_size == 0 || !(learning_rate > 0.0) ||
      !(momentum >= 0.0 && momentum < 1.0) ||
      !(validation_fraction > 0.0 && validation_fraction < 1.0) ||
      !std::isfinite(initial_alpha)) {
    throw Error(ErrorCode::InvalidConfig,
                "epochs, batch_size and learning_rate must be positive, momentum in "
                "[0,1), validation_fraction in (0,1)");
  }
  for (auto h : hidden) {
    if (h == 0) throw Error(ErrorCode::InvalidConfig, "hidden layer width must be >= 1");
  }
}

std::vector<std::string> default_input_columns(const Dataset& dataset) {
  std::vector<std::string> names;
  for (auto c : dataset.columns_in_group(ColumnGroup::ElementFraction)) {
    names.push_back(dataset.column(c).name);
  }
  return names;
}

std::vector<std::string> default_output_columns(const Dataset& dataset) {
  std::vector<std::string> names;
  for (const auto& c : dataset.columns()) {
    if (c.group == ColumnGroup::Property || c.group == ColumnGroup::Microstructure) {
      names.push_back(c.name);
    }
  }
  return names;
}

TrainResult train(const Dataset& dataset, const TrainConfig& config) {
  config.validate();
  require_complete(dataset);
  const auto input_names =
      config.input_columns.empty() ? default_input_columns(dataset) : config.input_columns;
  const auto output_names =
      config.output_columns.empty() ? default_output_columns(dataset) : config.output_columns;
  if (input_names.empty() || output_names.empty()) {
    throw Error(ErrorCode::ShapeMismatch, "dataset has no input or no output columns");
  }
  const auto inputs = resolve(dataset, input_names);
  const auto outputs = resolve(dataset, output_names);
  if (dataset.row_count() < 2) {
    throw Error(ErrorCode::ShapeMismatch, "need at least 2 rows to train and validate");
  }

  Rng rng(config.seed);
  std::vector<std::size_t> order(dataset.row_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  auto validation_rows = static_cast<std::size_t>(
      std::llround(config.validation_fraction * static_cast<double>(order.size())));
  validation_rows = std::clamp<std::size_t>(validation_rows, 1, order.size() - 1);
  std::vector<std::size_t> val_idx(order.begin(), order.begin() + validation_rows);
  std::vector<std::size_t> train_idx(order.begin() + validation_rows, order.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  std::vector<std::size_t> dims;
  dims.push_back(inputs.size());
  dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
  dims.push_back(outputs.size());
  MlpModel model = make_random_model(dims, rng.next(), config.initial_alpha);
  model.input_names = input_names;
  model.output_names = output_names;

  const Eigen::MatrixXd x_train_raw = gather(dataset, inputs, train_idx);
  const Eigen::MatrixXd y_train_raw = gather(dataset, outputs, train_idx);
  column_moments(x_train_raw, model.input_mean, model.input_std);
  column_moments(y_train_raw, model.output_mean, model.output_std);

  auto standardize = [](const Eigen::MatrixXd& raw, const Eigen::VectorXd& mean,
                        const Eigen::VectorXd& std) -> Eigen::MatrixXd {
    return ((raw.colwise() - mean).array().colwise() / std.array()).matrix();
  };
  const Eigen::MatrixXd x_train = standardize(x_train_raw, model.input_mean, model.input_std);
  const Eigen::MatrixXd y_train = standardize(y_train_raw, model.output_mean, model.output_std);
  const Eigen::MatrixXd x_val = standardize(gather(dataset, inputs, val_idx),
                                            model.input_mean, model.input_std);
  const Eigen::MatrixXd y_val = standardize(gather(dataset, outputs, val_idx),
                                            model.output_mean, model.output_std);

  const auto layers = model.weights.size();
  Gradients grad;
  Gradients velocity;
  for (std::size_t l = 0; l < layers; ++l) {
    grad.weights.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols()));
    grad.biases.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
  }
  grad.alpha.assign(model.prelu_alpha.size(), 0.0);
  velocity = grad;

  TrainReport report;
  report.train_rows = train_idx.size();
  report.validation_rows = val_idx.size();

  const auto n = static_cast<std::size_t>(x_train.cols());
  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Eigen::MatrixXd xb;
  Eigen::MatrixXd yb;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const auto size = std::min(config.batch_size, n - start);
      xb.resize(x_train.rows(), static_cast<Eigen::Index>(size));
      yb.resize(y_train.rows(), static_cast<Eigen::Index>(size));
      for (std::size_t j = 0; j < size; ++j) {
        xb.col(static_cast<Eigen::Index>(j)) = x_train.col(perm[start + j]);
        yb.col(static_cast<Eigen::Index>(j)) = y_train.col(perm[start + j]);
      }
      const double loss = backprop(model, xb, yb, grad);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::NonFiniteLoss, "epoch " + std::to_string(epoch));
      }
      loss_sum += loss;
      ++batches;

      const double mu = config.momentum;
      const double lr = config.learning_rate;
      for (std::size_t l = 0; l < layers; ++l) {
        velocity.weights[l] = mu * velocity.weights[l] + grad.weights[l];
        velocity.biases[l] = mu * velocity.biases[l] + grad.biases[l];
        model.weights[l] -= lr * velocity.weights[l];
        model.biases[l] -= lr * velocity.biases[l];
      }
      for (std::size_t h = 0; h < model.prelu_alpha.size(); ++h) {
        velocity.alpha[h] = mu * velocity.alpha[h] + grad.alpha[h];
        model.prelu_alpha[h] -= lr * velocity.alpha[h];
      }
    }
    const double val_loss = mse(model, x_val, y_val);
    if (!std::isfinite(val_loss)) {
      throw Error(ErrorCode::NonFiniteLoss, "epoch " + std::to_string(epoch));
    }
    report.history.push_back({epoch, loss_sum / static_cast<double>(batches), val_loss});
  }

  model.validate();
  report.held_out = max_normalized_residual(model, dataset.select_rows(val_idx));
  report.in_sample = max_normalized_residual(model, dataset.select_rows(train_idx));
  return {std::move(model), std::move(report)};
}

ResidualReport residual_report_from_normalized(std::span<const std::string> names,
                                               std::span<const double> means,
                                               std::span<const double> stds,
                                               std::span<const double> normalized_max) {
  const auto m = names.size();
  if (means.size() != m || stds.size() != m || normalized_max.size() != m) {
    throw Error(ErrorCode::DimensionMismatch, "residual columns differ in length");
  }
  ResidualReport report;
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    report.outputs.push_back(
        {names[j], means[j], stds[j], normalized_max[j], normalized_max[j] * stds[j]});
    sum += normalized_max[j];
  }
  report.average_normalized_max = m ? sum / static_cast<double>(m) : 0.0;
  return report;
}

ResidualReport max_normalized_residual(const MlpModel& model, const Dataset& dataset) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyEvaluationSet, "no rows to evaluate");
  require_complete(dataset);
  std::vector<std::size_t> in_cols;
  std::vector<std::size_t> out_cols;
  for (const auto& name : model.input_names) in_cols.push_back(dataset.column_index(name));
  for (const auto& name : model.output_names) out_cols.push_back(dataset.column_index(name));

  std::vector<std::size_t> rows(dataset.row_count());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const Eigen::MatrixXd predicted = forward_batch(model, gather(dataset, in_cols, rows));
  const Eigen::MatrixXd actual = gather(dataset, out_cols, rows);
  const Eigen::VectorXd worst = (predicted - actual).cwiseAbs().rowwise().maxCoeff();

  const auto m = model.output_dim();
  std::vector<double> means(m), stds(m), normalized(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    means[j] = model.output_mean(jj);
    stds[j] = model.output_std(jj);
    normalized[j] = worst(jj) / stds[j];
  }
  auto report = residual_report_from_normalized(model.output_names, means, stds, normalized);
  report.rows = dataset.row_count();
  return report;
}

}  // namespace alloyscope
