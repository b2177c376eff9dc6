#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "alloyscope/dataset.hpp"
#include "alloyscope/filter.hpp"
#include "alloyscope/mlp.hpp"
#include "alloyscope/neighbors.hpp"
#include "alloyscope/sensitivity.hpp"

namespace alloyscope {

/// A loaded table plus the normalization statistics every session uses.
struct DatasetEntry {
  Dataset data;
  NormStats stats;
};

struct RankedRow {
  std::int64_t row_id = 0;  // source row id
  std::size_t row = 0;      // index into the served rows
  double distance = 0.0;
  double score = 0.0;
  friend bool operator==(const RankedRow&, const RankedRow&) = default;
};

struct ExplorationResponse {
  std::vector<MatchLabel> labels;  // one per served row
  std::size_t match_count = 0;
  std::size_t soft_count = 0;
  bool feasible = true;
  std::optional<std::vector<RankedRow>> ranking;  // present iff !feasible
  friend bool operator==(const ExplorationResponse&, const ExplorationResponse&) = default;
};

/// Classification plus the nearest-neighbor fallback when nothing matches.
/// This is the whole per-slider-event computation; sessions and the CLI
/// query command both call it.
ExplorationResponse explore(const Dataset& served, const NormalizedTable& normalized,
                            const NormStats& stats, const BoundsSpec& bounds,
                            double tolerance, std::size_t k);

struct PointsPayload {
  std::vector<std::string> columns;
  std::size_t rows = 0;
  std::vector<double> normalized;  // row-major
  std::vector<std::int64_t> row_ids;
};

struct SessionState {
  std::string dataset_id;
  std::vector<std::string> active_columns;
  BoundsSpec bounds;
  double tolerance = kDefaultTolerance;
  ExplorationResponse last_response;
};

struct ModelInfo {
  std::shared_ptr<const MlpModel> model;
  nlohmann::json residual_report;
};

/// In-memory registry of datasets, an optional surrogate, and exploration
/// sessions. Datasets and the model are immutable once registered and are
/// shared lock-free between sessions; each session serializes its own
/// mutations.
class SessionManager {
 public:
  SessionManager();
  ~SessionManager();
  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  /// Replaces any dataset with the same id. Throws EmptyDataset, MissingValues.
  void add_dataset(const std::string& id, Dataset data);
  std::shared_ptr<const DatasetEntry> dataset(const std::string& id) const;
  std::vector<std::string> dataset_ids() const;

  void set_model(std::shared_ptr<const MlpModel> model, nlohmann::json residual_report = nullptr);
  ModelInfo model() const;

  /// Throws UnknownDataset, InvalidCount.
  std::string create_session(const std::string& dataset_id, std::size_t n, std::uint64_t seed);

  /// Throws UnknownSession plus the filter/neighbor errors.
  ExplorationResponse update_bounds(const std::string& session_id, const BoundsSpec& bounds,
                                    double tolerance, std::size_t k = kDefaultNeighborCount);

  /// Anchored at the composition center of the session's rows.
  /// Throws ModelNotLoaded, UnknownAxis, TooFewSamples.
  SensitivityCurve get_sensitivity(const std::string& session_id, const std::string& axis,
                                   const std::map<std::string, double>& overrides,
                                   std::size_t n_samples) const;

  /// CSV of every column for the given source row ids, in the given order.
  /// Throws UnknownRow.
  std::string export_selection(const std::string& session_id,
                               std::span<const std::int64_t> row_ids) const;

  PointsPayload points(const std::string& session_id) const;
  SessionState state(const std::string& session_id) const;
  /// The session's served rows, original units.
  const Dataset& served(const std::string& session_id) const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& session_id) const;

  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const DatasetEntry>> datasets_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  ModelInfo model_;
  std::uint64_t token_salt_;
  std::uint64_t next_session_ = 1;
};

}  // namespace alloyscope
