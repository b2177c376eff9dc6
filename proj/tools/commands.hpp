#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "alloyscope/dataset.hpp"
#include "alloyscope/train.hpp"

// Each subcommand is a thin composition of library calls. Data goes to `out`,
// diagnostics to `err`; the return value is the process exit code.
namespace alloyscope::cli {

namespace fs = std::filesystem;

/// `<csv>.schema` when no schema path is given.
fs::path default_schema_path(const fs::path& csv);

/// load_csv + zero_fill_missing, reporting filled columns on `err`.
Dataset load_table(const fs::path& csv, const std::optional<fs::path>& schema,
                   std::ostream& err);

struct IngestOptions {
  fs::path csv;
  std::optional<fs::path> schema;
  std::optional<fs::path> out;
};
int run_ingest(const IngestOptions& options, std::ostream& out, std::ostream& err);

struct SynthOptions {
  std::size_t n = 20000;
  std::uint64_t seed = 1;
  fs::path out;
  bool linear = false;
  double noise = 0.05;
};
int run_synth(const SynthOptions& options, std::ostream& out, std::ostream& err);

struct TrainOptions {
  fs::path dataset;
  std::optional<fs::path> schema;
  fs::path model_out;
  TrainConfig config;
  std::string format = "json";  // or "table"
};
int run_train(const TrainOptions& options, std::ostream& out, std::ostream& err);

struct QueryOptions {
  fs::path dataset;
  std::optional<fs::path> schema;
  fs::path bounds;
  std::optional<fs::path> model;
  std::optional<fs::path> export_path;
  std::optional<double> tolerance;
  std::optional<std::size_t> k;
  std::optional<std::size_t> subsample;
  std::uint64_t seed = 0;
};
int run_query(const QueryOptions& options, std::ostream& out, std::ostream& err);

struct ServeOptions {
  fs::path dataset;
  std::optional<fs::path> schema;
  std::optional<fs::path> model;
  std::optional<fs::path> static_dir;
  std::string host = "127.0.0.1";
  int port = 7341;
};
int run_serve(const ServeOptions& options, std::ostream& out, std::ostream& err);

}  // namespace alloyscope::cli
