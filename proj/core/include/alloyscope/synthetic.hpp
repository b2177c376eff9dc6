#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "alloyscope/dataset.hpp"

namespace alloyscope {

/// Desk-scale stand-in for a simulated aluminium-alloy table.
///
/// Layout: 3 scrap-input fractions (passive), 12 element fractions in wt.%,
/// 14 property columns and 6 microstructure/solidification columns. Outputs
/// depend only on the element fractions:
///
///   u_i = (x_i - lo_i) / (hi_i - lo_i),   c_i = u_i - 1/2
///   a_ji = cos(0.7 (i+1)(j+1) + 0.3 j),   s_j = sqrt(sum_i a_ji^2 / 12)
///   lin_j = sum_i a_ji c_i
///   g_j = (lin_j + 0.4 sin(3 lin_j) + 4 c_p c_q) / s_j,  p = j mod 12,
///                                                      q = (j+5) mod 12
///   y_j = mean_j + std_j (g_j + noise * N(0,1))
///
/// Every term of g_j has zero mean under uniform element fractions, so the
/// column means land on the configured reference means. The linear variant
/// drops the sine and product terms and the noise: y_j = mean_j + std_j lin_j / s_j.
inline constexpr std::size_t kSyntheticInputs = 12;
inline constexpr std::size_t kSyntheticOutputs = 20;
inline constexpr std::size_t kSyntheticScrapInputs = 3;

struct ElementRange {
  std::string_view name;
  double lo;
  double hi;
};

struct OutputReference {
  std::string_view name;
  ColumnGroup group;
  std::string_view units;
  double mean;
  double std;
};

std::span<const ElementRange, kSyntheticInputs> synthetic_elements() noexcept;
std::span<const OutputReference, kSyntheticOutputs> synthetic_outputs() noexcept;

Schema synthetic_schema();

enum class SyntheticResponse { Nonlinear, Linear };

struct SyntheticOptions {
  SyntheticResponse response = SyntheticResponse::Nonlinear;
  /// Noise standard deviation in units of each output's reference std.
  double noise = 0.05;
};

/// Noise-free outputs for element fractions given in wt.%.
std::array<double, kSyntheticOutputs> synthetic_response(
    std::span<const double, kSyntheticInputs> elements,
    SyntheticResponse response = SyntheticResponse::Nonlinear);

/// n rows, pure function of (n, seed, options). Throws InvalidCount for n = 0.
Dataset synthesize_dataset(std::size_t n, std::uint64_t seed,
                           const SyntheticOptions& options = {});

}  // namespace alloyscope
