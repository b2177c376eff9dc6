#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "alloyscope/dataset.hpp"

namespace alloyscope {

/// Closed interval in original units. lo > hi is an empty interval, which
/// only arises from intersecting contradictory ranges.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const noexcept { return lo > hi; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Active property ranges keyed by column name.
struct BoundsSpec {
  std::map<std::string, Interval> entries;

  bool empty() const noexcept { return entries.empty(); }
  friend bool operator==(const BoundsSpec&, const BoundsSpec&) = default;
};

inline constexpr double kDefaultTolerance = 0.05;

enum class MatchLabel : std::uint8_t { NoMatch = 0, SoftMatch = 1, Match = 2 };

std::string_view to_string(MatchLabel label) noexcept;

struct MatchClassification {
  std::vector<MatchLabel> labels;
  std::size_t match_count = 0;
  std::size_t soft_count = 0;

  bool feasible() const noexcept { return match_count > 0; }
  friend bool operator==(const MatchClassification&,
                         const MatchClassification&) = default;
};

/// Labels every row of `dataset`.
///
/// Match: every active value lies in [lo, hi]. SoftMatch: not a Match, but
/// every active value lies in [lo - t*range, hi + t*range], where range is
/// the column's max - min from `stats`. Empty intervals match nothing.
/// Comparisons happen in original units so boundary rows are classified
/// exactly as the user's numbers say.
///
/// Throws UnknownColumn, NegativeTolerance.
MatchClassification classify(const Dataset& dataset, const NormStats& stats,
                             const BoundsSpec& bounds,
                             double tolerance = kDefaultTolerance);

/// Per-column intersection; keys present in only one side pass through.
BoundsSpec intersect(const BoundsSpec& a, const BoundsSpec& b);

/// Throws UnknownColumn for keys outside `dataset`, InvalidBounds for
/// non-finite endpoints or lo > hi.
void validate_bounds(const BoundsSpec& bounds, const Dataset& dataset);

}  // namespace alloyscope
