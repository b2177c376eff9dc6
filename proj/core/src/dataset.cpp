#include "alloyscope/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_set>

#include "alloyscope/error.hpp"
#include "alloyscope/random.hpp"

namespace alloyscope {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string_view to_string(ColumnGroup group) noexcept {
  switch (group) {
    case ColumnGroup::ScrapInput: return "scrap_input";
    case ColumnGroup::ElementFraction: return "element_fraction";
    case ColumnGroup::Microstructure: return "microstructure";
    case ColumnGroup::Property: return "property";
  }
  return "property";
}

std::optional<ColumnGroup> parse_column_group(std::string_view text) noexcept {
  for (auto g : kAllGroups) {
    if (to_string(g) == text) return g;
  }
  return std::nullopt;
}

Schema parse_schema(std::istream& in) {
  Schema schema;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;

    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidSchema,
                  "line " + std::to_string(line_no) + ": expected 'name = group'");
    }
    ColumnSpec spec;
    spec.name = std::string(trim(view.substr(0, eq)));
    std::string_view rest = view.substr(eq + 1);
    std::string_view group_text = rest;
    if (auto semi = rest.find(';'); semi != std::string_view::npos) {
      group_text = rest.substr(0, semi);
      spec.units = std::string(trim(rest.substr(semi + 1)));
    }
    group_text = trim(group_text);
    if (spec.name.empty()) {
      throw Error(ErrorCode::InvalidSchema,
                  "line " + std::to_string(line_no) + ": empty column name");
    }
    auto group = parse_column_group(group_text);
    if (!group) {
      throw Error(ErrorCode::InvalidSchema,
                  "line " + std::to_string(line_no) + ": unknown group '" +
                      std::string(group_text) + "'");
    }
    spec.group = *group;
    if (!seen.insert(spec.name).second) {
      throw Error(ErrorCode::DuplicateColumn, spec.name);
    }
    schema.push_back(std::move(spec));
  }
  return schema;
}

Schema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open schema " + path.string());
  return parse_schema(in);
}

void write_schema(std::ostream& out, const Schema& schema) {
  for (const auto& c : schema) {
    out << c.name << " = " << to_string(c.group);
    if (!c.units.empty()) out << " ; " << c.units;
    out << '\n';
  }
}

Dataset::Dataset(Schema columns, std::vector<double> values,
                 std::vector<std::int64_t> source_row_ids)
    : columns_(std::move(columns)),
      values_(std::move(values)),
      source_row_ids_(std::move(source_row_ids)),
      row_count_(source_row_ids_.size()) {
  if (values_.size() != row_count_ * columns_.size()) {
    throw Error(ErrorCode::ShapeMismatch,
                "value count " + std::to_string(values_.size()) +
                    " != rows x columns");
  }
  std::unordered_set<std::string_view> names;
  for (const auto& c : columns_) {
    if (!names.insert(c.name).second) {
      throw Error(ErrorCode::DuplicateColumn, c.name);
    }
  }
  std::unordered_set<std::int64_t> ids(source_row_ids_.begin(),
                                       source_row_ids_.end());
  if (ids.size() != source_row_ids_.size()) {
    throw Error(ErrorCode::InvalidSchema, "duplicate source row ids");
  }
}

std::optional<std::size_t> Dataset::find_column(
    std::string_view name) const noexcept {
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].name == name) return c;
  }
  return std::nullopt;
}

std::size_t Dataset::column_index(std::string_view name) const {
  if (auto c = find_column(name)) return *c;
  throw Error(ErrorCode::UnknownColumn, std::string(name));
}

std::vector<std::size_t> Dataset::columns_in_group(ColumnGroup group) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].group == group) out.push_back(c);
  }
  return out;
}

bool Dataset::is_missing(std::size_t row, std::size_t col) const {
  return std::isnan(at(row, col));
}

bool Dataset::has_missing() const noexcept {
  return std::any_of(values_.begin(), values_.end(),
                     [](double v) { return std::isnan(v); });
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> values;
  values.reserve(rows.size() * columns_.size());
  std::vector<std::int64_t> ids;
  ids.reserve(rows.size());
  for (auto r : rows) {
    if (r >= row_count_) {
      throw Error(ErrorCode::UnknownRow, std::to_string(r));
    }
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    ids.push_back(source_row_ids_[r]);
  }
  return Dataset(columns_, std::move(values), std::move(ids));
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.columns_ != b.columns_ || a.source_row_ids_ != b.source_row_ids_) {
    return false;
  }
  return std::equal(a.values_.begin(), a.values_.end(), b.values_.begin(),
                    b.values_.end(), [](double x, double y) {
                      return x == y || (std::isnan(x) && std::isnan(y));
                    });
}

void require_complete(const Dataset& dataset) {
  if (dataset.has_missing()) {
    throw Error(ErrorCode::MissingValues,
                "dataset has missing cells; run zero_fill_missing first");
  }
}

Dataset zero_fill_missing(const Dataset& dataset, ZeroFillReport* report) {
  const auto rows = dataset.row_count();
  const auto cols = dataset.column_count();
  std::vector<double> values(dataset.values().begin(), dataset.values().end());
  ZeroFillReport local;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t missing = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      double& v = values[r * cols + c];
      if (std::isnan(v)) {
        v = 0.0;
        ++missing;
      }
    }
    if (missing == 0) continue;
    local.filled_cells += missing;
    (missing == rows ? local.fully_missing : local.partially_missing)
        .push_back(dataset.column(c).name);
  }
  if (report) *report = std::move(local);
  auto ids = dataset.source_row_ids();
  return Dataset(dataset.columns(), std::move(values),
                 std::vector<std::int64_t>(ids.begin(), ids.end()));
}

Dataset subsample(const Dataset& dataset, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidCount, "subsample size must be >= 1");
  if (n >= dataset.row_count()) return dataset;

  Rng rng(seed);
  std::vector<std::size_t> reservoir(n);
  for (std::size_t i = 0; i < n; ++i) reservoir[i] = i;
  for (std::size_t i = n; i < dataset.row_count(); ++i) {
    const auto j = rng.below(i + 1);
    if (j < n) reservoir[j] = i;
  }
  std::sort(reservoir.begin(), reservoir.end());
  return dataset.select_rows(reservoir);
}

std::optional<std::size_t> NormStats::find(std::string_view name) const noexcept {
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c] == name) return c;
  }
  return std::nullopt;
}

double NormStats::normalize(std::size_t c, double x) const {
  if (degenerate(c)) return 0.5;
  return std::clamp((x - min[c]) / (max[c] - min[c]), 0.0, 1.0);
}

double NormStats::normalize_unclamped(std::size_t c, double x) const {
  if (degenerate(c)) return 0.5;
  return (x - min[c]) / (max[c] - min[c]);
}

double NormStats::denormalize(std::size_t c, double u) const {
  if (degenerate(c)) return min[c];
  return min[c] + u * (max[c] - min[c]);
}

NormStats compute_norm_stats(const Dataset& dataset) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "no rows");
  require_complete(dataset);
  NormStats stats;
  const auto cols = dataset.column_count();
  stats.names.reserve(cols);
  for (const auto& c : dataset.columns()) stats.names.push_back(c.name);
  stats.min.assign(cols, std::numeric_limits<double>::infinity());
  stats.max.assign(cols, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < dataset.row_count(); ++r) {
    auto row = dataset.row(r);
    for (std::size_t c = 0; c < cols; ++c) {
      stats.min[c] = std::min(stats.min[c], row[c]);
      stats.max[c] = std::max(stats.max[c], row[c]);
    }
  }
  return stats;
}

std::optional<std::size_t> NormalizedTable::find(
    std::string_view name) const noexcept {
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c] == name) return c;
  }
  return std::nullopt;
}

NormalizedTable normalize(const Dataset& dataset, const NormStats& stats) {
  require_complete(dataset);
  const auto cols = dataset.column_count();
  bool same = stats.size() == cols;
  for (std::size_t c = 0; same && c < cols; ++c) {
    same = stats.names[c] == dataset.column(c).name;
  }
  if (!same) {
    throw Error(ErrorCode::ColumnMismatch,
                "normalization stats do not describe this dataset's columns");
  }
  NormalizedTable table;
  table.names = stats.names;
  table.rows = dataset.row_count();
  table.values.resize(table.rows * cols);
  for (std::size_t r = 0; r < table.rows; ++r) {
    auto row = dataset.row(r);
    for (std::size_t c = 0; c < cols; ++c) {
      table.values[r * cols + c] = stats.normalize(c, row[c]);
    }
  }
  return table;
}

std::vector<ColumnSummary> summarize(const Dataset& dataset) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "no rows");
  require_complete(dataset);
  const auto n = static_cast<double>(dataset.row_count());
  std::vector<ColumnSummary> out;
  for (std::size_t c = 0; c < dataset.column_count(); ++c) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t r = 0; r < dataset.row_count(); ++r) {
      const double v = dataset.at(r, c);
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t r = 0; r < dataset.row_count(); ++r) {
      const double d = dataset.at(r, c) - mean;
      ss += d * d;
    }
    out.push_back({dataset.column(c).name, dataset.column(c).group, mean,
                   std::sqrt(ss / n), lo, hi});
  }
  return out;
}

}  // namespace alloyscope
