#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alloyscope/dataset.hpp"
#include "alloyscope/mlp.hpp"

namespace alloyscope {

/// Per-column arithmetic mean of the named input columns.
/// Throws EmptyDataset, UnknownColumn.
Eigen::VectorXd composition_center(const Dataset& dataset,
                                   std::span<const std::string> input_columns);

struct SensitivitySample {
  double x = 0.0;                // axis value, original units
  Eigen::VectorXd prediction;    // all outputs, original units
  Eigen::VectorXd derivative;    // d output / d axis, original units
};

struct SensitivityCurve {
  std::string axis;
  std::size_t axis_index = 0;
  Eigen::VectorXd anchor;  // base point after overrides; axis coordinate is swept
  std::vector<std::string> output_names;
  std::vector<SensitivitySample> samples;
};

struct AxisRange {
  double min = 0.0;
  double max = 0.0;
};

/// Sweeps one input across [range.min, range.max] on an even grid of
/// n_samples points, holding every other coordinate at the anchor (after
/// `overrides` replace anchor entries). Derivatives are the axis column of
/// input_jacobian() at each grid point.
///
/// Throws UnknownAxis (axis or override key not a model input),
/// TooFewSamples (n_samples < 2), DegenerateAxis (min >= max),
/// DimensionMismatch (anchor size).
SensitivityCurve sensitivity_curve(const MlpModel& model, std::span<const double> anchor,
                                   const std::string& axis, AxisRange range,
                                   std::size_t n_samples,
                                   const std::map<std::string, double>& overrides = {});

}  // namespace alloyscope
