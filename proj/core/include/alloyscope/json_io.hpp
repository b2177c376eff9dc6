#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "alloyscope/dataset.hpp"
#include "alloyscope/filter.hpp"
#include "alloyscope/neighbors.hpp"
#include "alloyscope/sensitivity.hpp"
#include "alloyscope/session.hpp"
#include "alloyscope/train.hpp"

// JSON shapes shared by the HTTP API and the command-line tool.
namespace alloyscope {

using nlohmann::json;

/// {"YS": [200, null], "density": [null, 2.75], "hardness": [80, 130]}
///
/// A null endpoint is one-sided and resolves to the column's min or max in
/// `stats`. Throws BadRequest (malformed), UnknownColumn, InvalidBounds.
BoundsSpec bounds_from_json(const json& j, const NormStats& stats);
json bounds_to_json(const BoundsSpec& bounds);

struct QueryRequest {
  BoundsSpec bounds;
  double tolerance = kDefaultTolerance;
  std::size_t k = kDefaultNeighborCount;
};

/// {"bounds": {...}, "tolerance": 0.05, "k": 20}; every key optional.
QueryRequest query_from_json(const json& j, const NormStats& stats);

/// Labels are integer codes (see "label_codes" in the payload).
json response_to_json(const ExplorationResponse& response);

json curve_to_json(const SensitivityCurve& curve);
std::map<std::string, double> overrides_from_json(const json& j);

json residual_report_to_json(const ResidualReport& report);
json train_report_to_json(const TrainReport& report);

/// Column specs, groups and normalization stats.
json columns_to_json(const DatasetEntry& entry);
json points_to_json(const PointsPayload& points);

/// Per-group column counts and per-column mean/std for ingestion output.
json summary_to_json(const Dataset& dataset);

}  // namespace alloyscope
