#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "alloyscope/dataset.hpp"
#include "alloyscope/filter.hpp"

namespace alloyscope {

/// Target values in original units, one per active column.
struct TargetVector {
  std::map<std::string, double> entries;
  friend bool operator==(const TargetVector&, const TargetVector&) = default;
};

struct Neighbor {
  std::size_t row;  // index into the queried table
  double distance;
  double score;  // 1 for the nearest entry, falling linearly to 0 at the k-th
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct NeighborRanking {
  std::vector<Neighbor> entries;
  std::size_t k = 0;
};

inline constexpr std::size_t kDefaultNeighborCount = 20;

/// Interval midpoints. Throws EmptyBounds.
TargetVector target_from_bounds(const BoundsSpec& bounds);

/// Euclidean distance over the given (already normalized) coordinates.
/// Throws DimensionMismatch when the spans differ in length.
double distance(std::span<const double> row, std::span<const double> target);

/// Exact k nearest rows of `table` to `target` in normalized space.
///
/// The target is normalized with `stats` but not clamped, so targets outside
/// the observed range keep their true offset. Ties break toward the lower
/// row index. Uses a bounded max-heap, O(n log k).
///
/// Throws EmptyTarget, InvalidK, UnknownColumn.
NeighborRanking top_k(const NormalizedTable& table, const NormStats& stats,
                      const TargetVector& target,
                      std::size_t k = kDefaultNeighborCount);

/// score_i = 1 - (d_i - d_min) / (d_max - d_min); all ones if the distances
/// are equal. Expects entries sorted by distance.
void assign_scores(std::vector<Neighbor>& entries);

}  // namespace alloyscope
