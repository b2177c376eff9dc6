#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace alloyscope {

enum class ColumnGroup { ScrapInput, ElementFraction, Microstructure, Property };

inline constexpr ColumnGroup kAllGroups[] = {
    ColumnGroup::ScrapInput, ColumnGroup::ElementFraction,
    ColumnGroup::Microstructure, ColumnGroup::Property};

std::string_view to_string(ColumnGroup group) noexcept;
/// Accepts the snake_case spelling used in schema files ("element_fraction").
std::optional<ColumnGroup> parse_column_group(std::string_view text) noexcept;

struct ColumnSpec {
  std::string name;
  ColumnGroup group = ColumnGroup::Property;
  std::string units;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

using Schema = std::vector<ColumnSpec>;

/// Parses the key-value schema format:
///
///   # comment
///   Si = element_fraction ; wt.%
///   YS = property ; MPa
///
/// Units after ';' are optional. Throws InvalidSchema or DuplicateColumn.
Schema parse_schema(std::istream& in);
Schema load_schema(const std::filesystem::path& path);
void write_schema(std::ostream& out, const Schema& schema);

/// Immutable row-major numeric table with grouped columns.
///
/// Missing cells are stored as quiet NaN until zero_fill_missing() runs;
/// every other operation rejects a table that still has missing cells.
class Dataset {
 public:
  Dataset() = default;
  /// Validates shapes, column-name uniqueness and id uniqueness.
  Dataset(Schema columns, std::vector<double> values,
          std::vector<std::int64_t> source_row_ids);

  std::size_t row_count() const noexcept { return row_count_; }
  std::size_t column_count() const noexcept { return columns_.size(); }
  bool empty() const noexcept { return row_count_ == 0; }

  const Schema& columns() const noexcept { return columns_; }
  const ColumnSpec& column(std::size_t c) const { return columns_.at(c); }
  std::optional<std::size_t> find_column(std::string_view name) const noexcept;
  /// Throws UnknownColumn.
  std::size_t column_index(std::string_view name) const;
  std::vector<std::size_t> columns_in_group(ColumnGroup group) const;

  double at(std::size_t row, std::size_t col) const {
    return values_[row * columns_.size() + col];
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * columns_.size(), columns_.size()};
  }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const std::int64_t> source_row_ids() const noexcept {
    return source_row_ids_;
  }

  bool is_missing(std::size_t row, std::size_t col) const;
  bool has_missing() const noexcept;

  /// Rows in the given order; used by subsampling and export.
  Dataset select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  Schema columns_;
  std::vector<double> values_;
  std::vector<std::int64_t> source_row_ids_;
  std::size_t row_count_ = 0;
};

/// Throws MissingValues if the dataset still holds missing cells.
void require_complete(const Dataset& dataset);

struct ZeroFillReport {
  std::vector<std::string> fully_missing;
  std::vector<std::string> partially_missing;
  std::size_t filled_cells = 0;
};

/// Replaces every missing cell by 0. Columns that are missing in all rows
/// are reported separately from columns with scattered gaps.
Dataset zero_fill_missing(const Dataset& dataset,
                          ZeroFillReport* report = nullptr);

/// Uniform sample of n rows without replacement (reservoir sampling).
/// Survivors keep their relative order. n >= row_count returns the input.
Dataset subsample(const Dataset& dataset, std::size_t n, std::uint64_t seed);

struct NormStats {
  std::vector<std::string> names;
  std::vector<double> min;
  std::vector<double> max;

  std::size_t size() const noexcept { return names.size(); }
  std::optional<std::size_t> find(std::string_view name) const noexcept;
  double range(std::size_t c) const { return max[c] - min[c]; }
  bool degenerate(std::size_t c) const { return !(max[c] > min[c]); }

  /// (x - min) / (max - min), clamped to [0, 1]; constant columns map to 0.5.
  double normalize(std::size_t c, double x) const;
  /// Same affine map without clamping; for targets outside the data range.
  double normalize_unclamped(std::size_t c, double x) const;
  double denormalize(std::size_t c, double u) const;
};

NormStats compute_norm_stats(const Dataset& dataset);

/// Dense row-major table of normalized values.
struct NormalizedTable {
  std::vector<std::string> names;
  std::size_t rows = 0;
  std::vector<double> values;

  std::size_t cols() const noexcept { return names.size(); }
  double at(std::size_t r, std::size_t c) const {
    return values[r * names.size() + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * names.size(), names.size()};
  }
  std::optional<std::size_t> find(std::string_view name) const noexcept;
};

/// Throws ColumnMismatch if stats and dataset disagree on the column set.
NormalizedTable normalize(const Dataset& dataset, const NormStats& stats);

struct ColumnSummary {
  std::string name;
  ColumnGroup group;
  double mean;
  double std;  // population standard deviation
  double min;
  double max;
};

std::vector<ColumnSummary> summarize(const Dataset& dataset);

// CSV dialect: comma separated, header row, '.' decimal, empty cell = missing.

/// Reads the columns named by `schema` (the header may contain more).
/// A header column named "source_row_id" that is not part of the schema is
/// used as provenance; otherwise rows are numbered from 0.
Dataset read_csv(std::istream& in, const Schema& schema);
Dataset load_csv(const std::filesystem::path& path, const Schema& schema);

/// Writes source_row_id followed by every column. Values use the shortest
/// representation that round-trips, so read_csv(write_csv(d)) == d.
void write_csv(std::ostream& out, const Dataset& dataset);
void save_csv(const std::filesystem::path& path, const Dataset& dataset);

inline constexpr std::string_view kSourceRowIdColumn = "source_row_id";

}  // namespace alloyscope
