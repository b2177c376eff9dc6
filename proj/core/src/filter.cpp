#include "alloyscope/filter.hpp"

#include <algorithm>
#include <cmath>

#include "alloyscope/error.hpp"

namespace alloyscope {

std::string_view to_string(MatchLabel label) noexcept {
  switch (label) {
    case MatchLabel::NoMatch: return "no_match";
    case MatchLabel::SoftMatch: return "soft_match";
    case MatchLabel::Match: return "match";
  }
  return "no_match";
}

MatchClassification classify(const Dataset& dataset, const NormStats& stats,
                             const BoundsSpec& bounds, double tolerance) {
  if (!(tolerance >= 0.0)) {
    throw Error(ErrorCode::NegativeTolerance, std::to_string(tolerance));
  }
  struct Active {
    std::size_t column;
    Interval hard;
    Interval soft;
  };
  std::vector<Active> active;
  active.reserve(bounds.entries.size());
  for (const auto& [name, interval] : bounds.entries) {
    const auto col = dataset.find_column(name);
    const auto stat = stats.find(name);
    if (!col || !stat) throw Error(ErrorCode::UnknownColumn, name);
    const double margin = tolerance * stats.range(*stat);
    Interval soft{interval.lo - margin, interval.hi + margin};
    if (interval.empty()) soft = interval;
    active.push_back({*col, interval, soft});
  }

  const auto rows = dataset.row_count();
  MatchClassification result;
  result.labels.assign(rows, MatchLabel::Match);
  for (const auto& a : active) {
    for (std::size_t r = 0; r < rows; ++r) {
      auto& label = result.labels[r];
      if (label == MatchLabel::NoMatch) continue;
      const double x = dataset.at(r, a.column);
      if (a.hard.contains(x)) continue;
      label = a.soft.contains(x) ? MatchLabel::SoftMatch : MatchLabel::NoMatch;
    }
  }
  for (auto label : result.labels) {
    result.match_count += label == MatchLabel::Match;
    result.soft_count += label == MatchLabel::SoftMatch;
  }
  return result;
}

BoundsSpec intersect(const BoundsSpec& a, const BoundsSpec& b) {
  BoundsSpec out = a;
  for (const auto& [name, interval] : b.entries) {
    auto [it, inserted] = out.entries.emplace(name, interval);
    if (!inserted) {
      it->second.lo = std::max(it->second.lo, interval.lo);
      it->second.hi = std::min(it->second.hi, interval.hi);
    }
  }
  return out;
}

void validate_bounds(const BoundsSpec& bounds, const Dataset& dataset) {
  for (const auto& [name, interval] : bounds.entries) {
    if (!dataset.find_column(name)) throw Error(ErrorCode::UnknownColumn, name);
    if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) ||
        interval.lo > interval.hi) {
      throw Error(ErrorCode::InvalidBounds,
                  name + ": [" + std::to_string(interval.lo) + ", " +
                      std::to_string(interval.hi) + "]");
    }
  }
}

}  // namespace alloyscope
