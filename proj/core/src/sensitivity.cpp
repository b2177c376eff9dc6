#include "alloyscope/sensitivity.hpp"

#include <algorithm>
#include <cmath>

#include "alloyscope/error.hpp"

namespace alloyscope {

namespace {

std::size_t input_index(const MlpModel& model, const std::string& name) {
  auto it = std::find(model.input_names.begin(), model.input_names.end(), name);
  if (it == model.input_names.end()) throw Error(ErrorCode::UnknownAxis, name);
  return static_cast<std::size_t>(it - model.input_names.begin());
}

}  // namespace

Eigen::VectorXd composition_center(const Dataset& dataset,
                                   std::span<const std::string> input_columns) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "no rows");
  require_complete(dataset);
  Eigen::VectorXd center(static_cast<Eigen::Index>(input_columns.size()));
  for (std::size_t i = 0; i < input_columns.size(); ++i) {
    const auto c = dataset.column_index(input_columns[i]);
    double sum = 0.0;
    for (std::size_t r = 0; r < dataset.row_count(); ++r) sum += dataset.at(r, c);
    center(static_cast<Eigen::Index>(i)) = sum / static_cast<double>(dataset.row_count());
  }
  return center;
}

SensitivityCurve sensitivity_curve(const MlpModel& model, std::span<const double> anchor,
                                   const std::string& axis, AxisRange range,
                                   std::size_t n_samples,
                                   const std::map<std::string, double>& overrides) {
  const auto axis_index = input_index(model, axis);
  if (n_samples < 2) {
    throw Error(ErrorCode::TooFewSamples, "need at least 2 samples, got " +
                                              std::to_string(n_samples));
  }
  if (!(range.min < range.max) || !std::isfinite(range.min) || !std::isfinite(range.max)) {
    throw Error(ErrorCode::DegenerateAxis, axis + " has no extent to sweep");
  }
  if (anchor.size() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "anchor has " + std::to_string(anchor.size()) +
                                                  " coordinates, model expects " +
                                                  std::to_string(model.input_dim()));
  }

  SensitivityCurve curve;
  curve.axis = axis;
  curve.axis_index = axis_index;
  curve.output_names = model.output_names;
  curve.anchor = Eigen::Map<const Eigen::VectorXd>(anchor.data(),
                                                   static_cast<Eigen::Index>(anchor.size()));
  for (const auto& [name, value] : overrides) {
    curve.anchor(static_cast<Eigen::Index>(input_index(model, name))) = value;
  }

  std::vector<double> point(curve.anchor.data(), curve.anchor.data() + curve.anchor.size());
  curve.samples.reserve(n_samples);
  const double span = range.max - range.min;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double x = s + 1 == n_samples
                         ? range.max
                         : range.min + span * static_cast<double>(s) /
                                           static_cast<double>(n_samples - 1);
    point[axis_index] = x;
    auto eval = evaluate(model, point);
    curve.samples.push_back(
        {x, std::move(eval.outputs),
         eval.jacobian.col(static_cast<Eigen::Index>(axis_index))});
  }
  return curve;
}

}  // namespace alloyscope
