#include "alloyscope/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

#include "alloyscope/error.hpp"

namespace alloyscope {

TargetVector target_from_bounds(const BoundsSpec& bounds) {
  if (bounds.empty()) throw Error(ErrorCode::EmptyBounds, "no active bounds");
  TargetVector target;
  for (const auto& [name, interval] : bounds.entries) {
    target.entries.emplace(name, (interval.lo + interval.hi) / 2.0);
  }
  return target;
}

double distance(std::span<const double> row, std::span<const double> target) {
  if (row.size() != target.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(row.size()) + " vs " + std::to_string(target.size()));
  }
  double sum = 0.0;
  for (std::size_t d = 0; d < row.size(); ++d) {
    const double diff = row[d] - target[d];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

void assign_scores(std::vector<Neighbor>& entries) {
  if (entries.empty()) return;
  const double lo = entries.front().distance;
  const double hi = entries.back().distance;
  for (auto& e : entries) {
    e.score = hi > lo ? 1.0 - (e.distance - lo) / (hi - lo) : 1.0;
  }
}

NeighborRanking top_k(const NormalizedTable& table, const NormStats& stats,
                      const TargetVector& target, std::size_t k) {
  if (target.entries.empty()) throw Error(ErrorCode::EmptyTarget, "no target dimensions");
  if (k == 0) throw Error(ErrorCode::InvalidK, "k must be >= 1");

  std::vector<std::size_t> columns;
  std::vector<double> goal;
  for (const auto& [name, value] : target.entries) {
    const auto col = table.find(name);
    const auto stat = stats.find(name);
    if (!col || !stat) throw Error(ErrorCode::UnknownColumn, name);
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::InvalidBounds, "non-finite target for " + name);
    }
    columns.push_back(*col);
    goal.push_back(stats.normalize_unclamped(*stat, value));
  }

  // Max-heap on (distance, row): the top is the worst of the kept entries.
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> heap;
  std::vector<double> point(columns.size());
  for (std::size_t r = 0; r < table.rows; ++r) {
    const auto row = table.row(r);
    for (std::size_t d = 0; d < columns.size(); ++d) point[d] = row[columns[d]];
    Entry candidate{distance(point, goal), r};
    if (heap.size() < k) {
      heap.push(candidate);
    } else if (candidate < heap.top()) {
      heap.pop();
      heap.push(candidate);
    }
  }

  NeighborRanking ranking;
  ranking.k = k;
  ranking.entries.resize(heap.size());
  for (auto i = heap.size(); i-- > 0;) {
    const auto [d, r] = heap.top();
    heap.pop();
    ranking.entries[i] = Neighbor{r, d, 0.0};
  }
  assign_scores(ranking.entries);
  return ranking;
}

}  // namespace alloyscope
