#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "alloyscope/dataset.hpp"
#include "alloyscope/error.hpp"

namespace alloyscope {

namespace {

// Splits one CSV record. Double-quoted fields may contain commas and ""
// escapes; embedded newlines are not supported.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Empty cell -> NaN (missing). Anything that is not a finite real -> nullopt.
std::optional<double> parse_cell(std::string_view text) {
  text = strip(text);
  if (text.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string quote_if_needed(const std::string& name) {
  if (name.find_first_of(",\"") == std::string::npos) return name;
  std::string out = "\"";
  for (char ch : name) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Dataset read_csv(std::istream& in, const Schema& schema) {
  std::string line;
  if (!std::getline(in, line) || strip(line).empty()) {
    throw Error(ErrorCode::EmptyFile, "no header row");
  }
  const auto header = split_record(line);
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) {
    position.emplace(std::string(strip(header[i])), i);
  }

  std::vector<std::size_t> source_of(schema.size());
  for (std::size_t c = 0; c < schema.size(); ++c) {
    auto it = position.find(schema[c].name);
    if (it == position.end()) throw Error(ErrorCode::MissingColumn, schema[c].name);
    source_of[c] = it->second;
  }
  std::optional<std::size_t> id_column;
  bool id_in_schema = false;
  for (const auto& spec : schema) id_in_schema |= spec.name == kSourceRowIdColumn;
  if (auto it = position.find(std::string(kSourceRowIdColumn));
      it != position.end() && !id_in_schema) {
    id_column = it->second;
  }

  std::vector<double> values;
  std::vector<std::int64_t> ids;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (strip(line).empty()) continue;
    const auto fields = split_record(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::ColumnMismatch,
                  "row " + std::to_string(data_row) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const auto src = source_of[c];
      std::string_view text = src < fields.size() ? std::string_view(fields[src])
                                                  : std::string_view();
      auto value = parse_cell(text);
      if (!value) {
        throw Error(ErrorCode::UnparseableCell,
                    "row " + std::to_string(data_row) + ", column " +
                        schema[c].name + ": '" + std::string(text) + "'");
      }
      values.push_back(*value);
    }
    if (id_column) {
      std::string_view text =
          *id_column < fields.size() ? strip(fields[*id_column]) : std::string_view();
      std::int64_t id = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::UnparseableCell,
                    "row " + std::to_string(data_row) + ", column " +
                        std::string(kSourceRowIdColumn) + ": '" +
                        std::string(text) + "'");
      }
      ids.push_back(id);
    } else {
      ids.push_back(static_cast<std::int64_t>(data_row));
    }
    ++data_row;
  }
  return Dataset(schema, std::move(values), std::move(ids));
}

Dataset load_csv(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_csv(in, schema);
}

void write_csv(std::ostream& out, const Dataset& dataset) {
  out << kSourceRowIdColumn;
  for (const auto& c : dataset.columns()) out << ',' << quote_if_needed(c.name);
  out << '\n';

  char buffer[64];
  const auto ids = dataset.source_row_ids();
  for (std::size_t r = 0; r < dataset.row_count(); ++r) {
    out << ids[r];
    for (double v : dataset.row(r)) {
      out << ',';
      if (std::isnan(v)) continue;
      auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
      out.write(buffer, ptr - buffer);
    }
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_csv(out, dataset);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace alloyscope
