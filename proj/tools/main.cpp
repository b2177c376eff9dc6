#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

std::vector<std::size_t> parse_widths(const std::string& text) {
  std::vector<std::size_t> widths;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) widths.push_back(std::stoul(item));
  }
  return widths;
}

template <typename T>
void optional_path(CLI::App* app, const std::string& flag, std::optional<T>& target,
                   const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&target](const std::string& v) { target = T(v); }, help);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace alloyscope::cli;

  CLI::App app{"alloyscope: target-range exploration over alloy composition/property tables"};
  app.set_config("--config", "", "TOML/INI file with option defaults; flags override");
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a CSV against a schema and summarize it");
  ingest_cmd->add_option("--csv", ingest.csv, "Input CSV")->required()->check(CLI::ExistingFile);
  optional_path(ingest_cmd, "--schema", ingest.schema, "Schema file (default: <csv>.schema)");
  optional_path(ingest_cmd, "--out", ingest.out, "Write the zero-filled table here");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic alloy table");
  synth_cmd->add_option("--n", synth.n, "Rows")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output CSV (schema written to <out>.schema)")->required();
  synth_cmd->add_flag("--linear", synth.linear, "Noise-free linear response");
  synth_cmd->add_option("--noise", synth.noise, "Noise std in units of each output std")
      ->capture_default_str();

  TrainOptions train;
  std::string hidden = "1024,1024";
  auto* train_cmd = app.add_subcommand("train", "Train the surrogate and report residuals");
  train_cmd->add_option("--dataset", train.dataset, "Training CSV")->required()->check(CLI::ExistingFile);
  optional_path(train_cmd, "--schema", train.schema, "Schema file (default: <dataset>.schema)");
  train_cmd->add_option("--model", train.model_out, "Model output path (sidecar: <model>.json)")->required();
  train_cmd->add_option("--hidden", hidden, "Hidden layer widths")->capture_default_str();
  train_cmd->add_option("--epochs", train.config.epochs)->capture_default_str();
  train_cmd->add_option("--batch-size", train.config.batch_size)->capture_default_str();
  train_cmd->add_option("--learning-rate", train.config.learning_rate)->capture_default_str();
  train_cmd->add_option("--momentum", train.config.momentum)->capture_default_str();
  train_cmd->add_option("--seed", train.config.seed)->capture_default_str();
  train_cmd->add_option("--validation-fraction", train.config.validation_fraction)
      ->capture_default_str();
  train_cmd->add_option("--format", train.format, "json or table")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  QueryOptions query;
  auto* query_cmd = app.add_subcommand("query", "Classify rows against bounds, with fallback ranking");
  query_cmd->add_option("--dataset", query.dataset, "CSV")->required()->check(CLI::ExistingFile);
  optional_path(query_cmd, "--schema", query.schema, "Schema file (default: <dataset>.schema)");
  query_cmd->add_option("--bounds", query.bounds, "Bounds JSON")->required()->check(CLI::ExistingFile);
  optional_path(query_cmd, "--model", query.model, "Surrogate model for a centroid prediction");
  optional_path(query_cmd, "--export", query.export_path, "Write matched rows as CSV");
  query_cmd->add_option_function<double>("--tolerance", [&](double v) { query.tolerance = v; },
                                         "Soft-match margin (fraction of range)");
  query_cmd->add_option_function<std::size_t>("--k", [&](std::size_t v) { query.k = v; },
                                              "Neighbors in the fallback ranking");
  query_cmd->add_option_function<std::size_t>("--subsample", [&](std::size_t v) { query.subsample = v; },
                                              "Query a seeded subsample of this many rows");
  query_cmd->add_option("--seed", query.seed)->capture_default_str();

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the exploration API over HTTP");
  serve_cmd->add_option("--dataset", serve.dataset, "CSV")->required()->check(CLI::ExistingFile);
  optional_path(serve_cmd, "--schema", serve.schema, "Schema file (default: <dataset>.schema)");
  optional_path(serve_cmd, "--model", serve.model, "Surrogate model");
  optional_path(serve_cmd, "--static", serve.static_dir, "Directory with the browser client");
  serve_cmd->add_option("--host", serve.host)->capture_default_str();
  serve_cmd->add_option("--port", serve.port)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (ingest_cmd->parsed()) return run_ingest(ingest, std::cout, std::cerr);
  if (synth_cmd->parsed()) return run_synth(synth, std::cout, std::cerr);
  if (train_cmd->parsed()) {
    try {
      train.config.hidden = parse_widths(hidden);
    } catch (const std::exception&) {
      std::cerr << "error: --hidden expects comma-separated integers\n";
      return 2;
    }
    return run_train(train, std::cout, std::cerr);
  }
  if (query_cmd->parsed()) return run_query(query, std::cout, std::cerr);
  if (serve_cmd->parsed()) return run_serve(serve, std::cout, std::cerr);
  return 1;
}
