#include "alloyscope/session.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>
#include <unordered_set>

#include "alloyscope/error.hpp"

namespace alloyscope {

ExplorationResponse explore(const Dataset& served, const NormalizedTable& normalized,
                            const NormStats& stats, const BoundsSpec& bounds,
                            double tolerance, std::size_t k) {
  auto classification = classify(served, stats, bounds, tolerance);
  ExplorationResponse response;
  response.match_count = classification.match_count;
  response.soft_count = classification.soft_count;
  response.feasible = classification.feasible();
  response.labels = std::move(classification.labels);
  if (!response.feasible) {
    const auto ranking = top_k(normalized, stats, target_from_bounds(bounds), k);
    std::vector<RankedRow> rows;
    rows.reserve(ranking.entries.size());
    const auto ids = served.source_row_ids();
    for (const auto& e : ranking.entries) {
      rows.push_back({ids[e.row], e.row, e.distance, e.score});
    }
    response.ranking = std::move(rows);
  }
  return response;
}

struct SessionManager::Session {
  std::shared_ptr<const DatasetEntry> parent;
  Dataset served;
  NormalizedTable normalized;
  std::unordered_map<std::int64_t, std::size_t> row_of_id;

  mutable std::mutex mutex;
  SessionState state;
};

SessionManager::SessionManager() : token_salt_(std::random_device{}()) {
  token_salt_ = (token_salt_ << 32) ^ std::random_device{}();
}

SessionManager::~SessionManager() = default;

void SessionManager::add_dataset(const std::string& id, Dataset data) {
  auto entry = std::make_shared<DatasetEntry>();
  entry->stats = compute_norm_stats(data);
  entry->data = std::move(data);
  std::unique_lock lock(mutex_);
  datasets_[id] = std::move(entry);
}

std::shared_ptr<const DatasetEntry> SessionManager::dataset(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = datasets_.find(id);
  if (it == datasets_.end()) throw Error(ErrorCode::UnknownDataset, id);
  return it->second;
}

std::vector<std::string> SessionManager::dataset_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, entry] : datasets_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void SessionManager::set_model(std::shared_ptr<const MlpModel> model,
                               nlohmann::json residual_report) {
  if (model) model->validate();
  std::unique_lock lock(mutex_);
  model_ = ModelInfo{std::move(model), std::move(residual_report)};
}

ModelInfo SessionManager::model() const {
  std::shared_lock lock(mutex_);
  return model_;
}

std::string SessionManager::create_session(const std::string& dataset_id, std::size_t n,
                                           std::uint64_t seed) {
  auto parent = dataset(dataset_id);
  auto session = std::make_shared<Session>();
  session->parent = parent;
  session->served = subsample(parent->data, n, seed);
  session->normalized = normalize(session->served, parent->stats);
  const auto ids = session->served.source_row_ids();
  for (std::size_t r = 0; r < ids.size(); ++r) session->row_of_id.emplace(ids[r], r);
  session->state.dataset_id = dataset_id;
  session->state.last_response =
      explore(session->served, session->normalized, parent->stats, {}, kDefaultTolerance,
              kDefaultNeighborCount);

  std::unique_lock lock(mutex_);
  char token[40];
  std::snprintf(token, sizeof(token), "s%llx-%llu",
                static_cast<unsigned long long>(token_salt_ & 0xFFFFFFFFFFull),
                static_cast<unsigned long long>(next_session_++));
  sessions_.emplace(token, std::move(session));
  return token;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(
    const std::string& session_id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, session_id);
  return it->second;
}

ExplorationResponse SessionManager::update_bounds(const std::string& session_id,
                                                  const BoundsSpec& bounds, double tolerance,
                                                  std::size_t k) {
  auto session = find(session_id);
  validate_bounds(bounds, session->served);
  if (k == 0) throw Error(ErrorCode::InvalidK, "k must be >= 1");
  // Classification and ranking are computed and published under one lock.
  std::lock_guard lock(session->mutex);
  auto response = explore(session->served, session->normalized, session->parent->stats,
                          bounds, tolerance, k);
  session->state.bounds = bounds;
  session->state.tolerance = tolerance;
  session->state.active_columns.clear();
  for (const auto& [name, interval] : bounds.entries) {
    session->state.active_columns.push_back(name);
  }
  session->state.last_response = response;
  return response;
}

SensitivityCurve SessionManager::get_sensitivity(const std::string& session_id,
                                                 const std::string& axis,
                                                 const std::map<std::string, double>& overrides,
                                                 std::size_t n_samples) const {
  auto session = find(session_id);
  auto info = model();
  if (!info.model) throw Error(ErrorCode::ModelNotLoaded, "no surrogate model is loaded");
  const auto& model = *info.model;
  if (std::find(model.input_names.begin(), model.input_names.end(), axis) ==
      model.input_names.end()) {
    throw Error(ErrorCode::UnknownAxis, axis);
  }
  const auto anchor = composition_center(session->served, model.input_names);
  const auto& stats = session->parent->stats;
  const auto col = stats.find(axis);
  if (!col) throw Error(ErrorCode::UnknownAxis, axis + " is not a dataset column");
  return sensitivity_curve(model, std::span<const double>(anchor.data(), anchor.size()), axis,
                           {stats.min[*col], stats.max[*col]}, n_samples, overrides);
}

std::string SessionManager::export_selection(const std::string& session_id,
                                             std::span<const std::int64_t> row_ids) const {
  auto session = find(session_id);
  std::vector<std::size_t> rows;
  rows.reserve(row_ids.size());
  std::unordered_set<std::int64_t> seen;
  for (auto id : row_ids) {
    auto it = session->row_of_id.find(id);
    if (it == session->row_of_id.end()) throw Error(ErrorCode::UnknownRow, std::to_string(id));
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::BadRequest, "row " + std::to_string(id) + " selected twice");
    }
    rows.push_back(it->second);
  }
  std::ostringstream out;
  write_csv(out, session->served.select_rows(rows));
  return out.str();
}

PointsPayload SessionManager::points(const std::string& session_id) const {
  auto session = find(session_id);
  PointsPayload payload;
  payload.columns = session->normalized.names;
  payload.rows = session->normalized.rows;
  payload.normalized = session->normalized.values;
  const auto ids = session->served.source_row_ids();
  payload.row_ids.assign(ids.begin(), ids.end());
  return payload;
}

SessionState SessionManager::state(const std::string& session_id) const {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return session->state;
}

const Dataset& SessionManager::served(const std::string& session_id) const {
  return find(session_id)->served;
}

}  // namespace alloyscope
