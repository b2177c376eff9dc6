#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "alloyscope/dataset.hpp"
#include "alloyscope/mlp.hpp"

namespace alloyscope {

struct TrainConfig {
  std::vector<std::size_t> hidden{1024, 1024};
  std::size_t epochs = 30;
  std::size_t batch_size = 256;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  std::uint64_t seed = 0;
  double validation_fraction = 0.1;
  double initial_alpha = kDefaultPreluAlpha;
  /// Empty: element-fraction columns.
  std::vector<std::string> input_columns;
  /// Empty: property and microstructure columns in dataset order.
  std::vector<std::string> output_columns;

  /// Throws InvalidConfig.
  void validate() const;
};

struct OutputResidual {
  std::string name;
  double mean = 0.0;
  double std = 0.0;
  double normalized_max = 0.0;
  double original_max = 0.0;  // normalized_max * std
};

/// Per-output maximum absolute residual, scaled by the model's output std.
struct ResidualReport {
  std::vector<OutputResidual> outputs;
  double average_normalized_max = 0.0;
  std::size_t rows = 0;
};

struct EpochLoss {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
};

struct TrainReport {
  std::vector<EpochLoss> history;
  std::size_t train_rows = 0;
  std::size_t validation_rows = 0;
  ResidualReport held_out;
  ResidualReport in_sample;
};

struct TrainResult {
  MlpModel model;
  TrainReport report;
};

/// Mini-batch gradient descent with momentum on the mean squared error of
/// standardized outputs. The PReLU slopes are trained with the weights.
/// A seeded shuffle holds out validation_fraction of the rows; standardization
/// statistics come from the training rows only.
///
/// Deterministic in (dataset, config). Throws ShapeMismatch, InvalidConfig,
/// NonFiniteLoss (detail carries the epoch index).
TrainResult train(const Dataset& dataset, const TrainConfig& config);

/// Columns resolved the way train() resolves them.
std::vector<std::string> default_input_columns(const Dataset& dataset);
std::vector<std::string> default_output_columns(const Dataset& dataset);

/// Throws EmptyEvaluationSet, UnknownColumn (model column absent).
ResidualReport max_normalized_residual(const MlpModel& model, const Dataset& dataset);

/// Builds a report from residuals already computed elsewhere; used for the
/// identity checks against published residual tables.
ResidualReport residual_report_from_normalized(std::span<const std::string> names,
                                               std::span<const double> means,
                                               std::span<const double> stds,
                                               std::span<const double> normalized_max);

}  // namespace alloyscope
