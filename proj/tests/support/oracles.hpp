#pragma once

// Reference implementations used only by tests. Each one takes the slow,
// obvious route so it can check the production code path independently.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alloyscope/dataset.hpp"
#include "alloyscope/filter.hpp"
#include "alloyscope/mlp.hpp"
#include "alloyscope/neighbors.hpp"
#include "alloyscope/random.hpp"

namespace alloyscope::oracle {

/// Direct per-row, per-column predicate evaluation of the match rules.
std::vector<MatchLabel> predicate_labels(const Dataset& dataset, const BoundsSpec& bounds,
                                         double tolerance);

struct RankedIndex {
  std::size_t row;
  double distance;
};

/// Computes every distance, sorts all rows by (distance, index), keeps k.
std::vector<RankedIndex> exhaustive_top_k(const Dataset& dataset, const TargetVector& target,
                                          std::size_t k);

/// Straight-line scalar re-implementation of the forward pass.
std::vector<double> forward_loops(const MlpModel& model, std::span<const double> x);

/// Central differences on the standardized inputs, rescaled to original
/// units: J_ij ~ (f_i(x + h s_j e_j) - f_i(x - h s_j e_j)) / (2 h s_j).
Eigen::MatrixXd central_difference_jacobian(
    const std::function<std::vector<double>(std::span<const double>)>& f,
    std::span<const double> x, std::span<const double> input_std, double step);

/// Random biases and standardization statistics on top of an existing model,
/// so tests exercise every affine term and not just the weights.
void perturb_affine_terms(MlpModel& model, std::uint64_t seed);

/// Max |a - b| / max(|b|, floor) over all entries.
double max_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double floor);

double column_mean(const Dataset& dataset, const std::string& name);
double column_min(const Dataset& dataset, const std::string& name);
double column_max(const Dataset& dataset, const std::string& name);

/// Random bounds over `columns`: a mix of two-sided, one-sided, and
/// contradictory (empty) intervals drawn relative to each column's range.
BoundsSpec random_bounds(const Dataset& dataset, const NormStats& stats,
                         std::span<const std::string> columns, Rng& rng);

/// Fully random dataset with named columns in [0, scale).
Dataset random_dataset(std::size_t rows, std::size_t cols, std::uint64_t seed,
                       double scale = 1.0);

}  // namespace alloyscope::oracle
