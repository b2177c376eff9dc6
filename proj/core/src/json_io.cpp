#include "alloyscope/json_io.hpp"

#include <cmath>

#include "alloyscope/error.hpp"

namespace alloyscope {

namespace {

double endpoint(const json& value, double fallback, const std::string& column) {
  if (value.is_null()) return fallback;
  if (!value.is_number()) {
    throw Error(ErrorCode::BadRequest, column + ": bound endpoints must be numbers or null");
  }
  return value.get<double>();
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

BoundsSpec bounds_from_json(const json& j, const NormStats& stats) {
  if (j.is_null()) return {};
  if (!j.is_object()) throw Error(ErrorCode::BadRequest, "bounds must be a JSON object");
  BoundsSpec bounds;
  for (const auto& [name, value] : j.items()) {
    const auto col = stats.find(name);
    if (!col) throw Error(ErrorCode::UnknownColumn, name);
    if (!value.is_array() || value.size() != 2) {
      throw Error(ErrorCode::BadRequest, name + ": expected [lo, hi]");
    }
    Interval interval{endpoint(value[0], stats.min[*col], name),
                      endpoint(value[1], stats.max[*col], name)};
    if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) || interval.empty()) {
      throw Error(ErrorCode::InvalidBounds, name + ": lo must not exceed hi");
    }
    bounds.entries.emplace(name, interval);
  }
  return bounds;
}

json bounds_to_json(const BoundsSpec& bounds) {
  json out = json::object();
  for (const auto& [name, interval] : bounds.entries) {
    out[name] = {interval.lo, interval.hi};
  }
  return out;
}

QueryRequest query_from_json(const json& j, const NormStats& stats) {
  if (!j.is_object()) throw Error(ErrorCode::BadRequest, "request must be a JSON object");
  QueryRequest request;
  if (j.contains("bounds")) request.bounds = bounds_from_json(j.at("bounds"), stats);
  if (j.contains("tolerance")) {
    if (!j.at("tolerance").is_number()) throw Error(ErrorCode::BadRequest, "tolerance must be a number");
    request.tolerance = j.at("tolerance").get<double>();
  }
  if (j.contains("k")) {
    const auto& k = j.at("k");
    if (!k.is_number_integer() || k.get<long long>() < 1) {
      throw Error(ErrorCode::InvalidK, "k must be a positive integer");
    }
    request.k = k.get<std::size_t>();
  }
  return request;
}

json response_to_json(const ExplorationResponse& response) {
  std::vector<int> labels;
  labels.reserve(response.labels.size());
  for (auto l : response.labels) labels.push_back(static_cast<int>(l));
  json out = {
      {"label_codes", {{"no_match", 0}, {"soft_match", 1}, {"match", 2}}},
      {"labels", labels},
      {"row_count", response.labels.size()},
      {"match_count", response.match_count},
      {"soft_count", response.soft_count},
      {"feasible", response.feasible},
  };
  if (response.ranking) {
    json ranking = json::array();
    for (const auto& r : *response.ranking) {
      ranking.push_back({{"row_id", r.row_id}, {"distance", r.distance}, {"score", r.score}});
    }
    out["ranking"] = std::move(ranking);
  }
  return out;
}

json curve_to_json(const SensitivityCurve& curve) {
  json samples = json::array();
  for (const auto& s : curve.samples) {
    samples.push_back({{"x", s.x},
                       {"prediction", to_std(s.prediction)},
                       {"derivative", to_std(s.derivative)}});
  }
  return {{"axis", curve.axis},
          {"anchor", to_std(curve.anchor)},
          {"outputs", curve.output_names},
          {"samples", std::move(samples)}};
}

std::map<std::string, double> overrides_from_json(const json& j) {
  std::map<std::string, double> out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw Error(ErrorCode::BadRequest, "overrides must be a JSON object");
  for (const auto& [name, value] : j.items()) {
    if (!value.is_number() || !std::isfinite(value.get<double>())) {
      throw Error(ErrorCode::BadRequest, name + ": override must be a finite number");
    }
    out.emplace(name, value.get<double>());
  }
  return out;
}

json residual_report_to_json(const ResidualReport& report) {
  json rows = json::array();
  for (const auto& o : report.outputs) {
    rows.push_back({{"name", o.name},
                    {"mean", o.mean},
                    {"std", o.std},
                    {"max_residual_normalized", o.normalized_max},
                    {"max_residual_original", o.original_max}});
  }
  return {{"rows", report.rows},
          {"outputs", std::move(rows)},
          {"average_max_normalized_residual", report.average_normalized_max}};
}

json train_report_to_json(const TrainReport& report) {
  json history = json::array();
  for (const auto& e : report.history) {
    history.push_back({{"epoch", e.epoch},
                       {"train_loss", e.train_loss},
                       {"validation_loss", e.validation_loss}});
  }
  return {{"train_rows", report.train_rows},
          {"validation_rows", report.validation_rows},
          {"loss_history", std::move(history)},
          {"residuals_held_out", residual_report_to_json(report.held_out)},
          {"residuals_in_sample", residual_report_to_json(report.in_sample)}};
}

json columns_to_json(const DatasetEntry& entry) {
  json columns = json::array();
  for (std::size_t c = 0; c < entry.data.column_count(); ++c) {
    const auto& spec = entry.data.column(c);
    columns.push_back({{"name", spec.name},
                       {"group", std::string(to_string(spec.group))},
                       {"units", spec.units},
                       {"min", entry.stats.min[c]},
                       {"max", entry.stats.max[c]}});
  }
  return {{"rows", entry.data.row_count()}, {"columns", std::move(columns)}};
}

json points_to_json(const PointsPayload& points) {
  json rows = json::array();
  const auto cols = points.columns.size();
  for (std::size_t r = 0; r < points.rows; ++r) {
    rows.push_back(std::vector<double>(points.normalized.begin() + r * cols,
                                       points.normalized.begin() + (r + 1) * cols));
  }
  return {{"columns", points.columns}, {"row_ids", points.row_ids}, {"points", std::move(rows)}};
}

json summary_to_json(const Dataset& dataset) {
  json groups = json::object();
  for (auto g : kAllGroups) {
    groups[std::string(to_string(g))] = dataset.columns_in_group(g).size();
  }
  json columns = json::array();
  for (const auto& s : summarize(dataset)) {
    columns.push_back({{"name", s.name},
                       {"group", std::string(to_string(s.group))},
                       {"mean", s.mean},
                       {"std", s.std},
                       {"min", s.min},
                       {"max", s.max}});
  }
  return {{"rows", dataset.row_count()}, {"groups", std::move(groups)}, {"columns", std::move(columns)}};
}

}  // namespace alloyscope
