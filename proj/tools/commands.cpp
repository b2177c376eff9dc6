#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>

#include "alloyscope/error.hpp"
#include "alloyscope/http_api.hpp"
#include "alloyscope/json_io.hpp"
#include "alloyscope/model_io.hpp"
#include "alloyscope/session.hpp"
#include "alloyscope/synthetic.hpp"

namespace alloyscope::cli {

namespace {

int fail(std::ostream& err, const Error& e) {
  err << "error: " << e.what() << '\n';
  return 1;
}

void print_residual_table(std::ostream& out, const ResidualReport& report) {
  out << std::left << std::setw(22) << "Property" << std::right << std::setw(14) << "Mean"
      << std::setw(14) << "Std Dev" << std::setw(16) << "MaxRes (norm)" << std::setw(16)
      << "MaxRes (orig)" << '\n';
  for (const auto& o : report.outputs) {
    out << std::left << std::setw(22) << o.name << std::right << std::setprecision(6)
        << std::setw(14) << o.mean << std::setw(14) << o.std << std::setw(16)
        << o.normalized_max << std::setw(16) << o.original_max << '\n';
  }
  out << "average max normalized residual: " << report.average_normalized_max << " ("
      << report.rows << " rows)\n";
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::BadRequest, path.string() + ": " + e.what());
  }
}

void write_schema_file(const fs::path& path, const Schema& schema) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_schema(out, schema);
}

}  // namespace

fs::path default_schema_path(const fs::path& csv) {
  auto p = csv;
  p += ".schema";
  return p;
}

Dataset load_table(const fs::path& csv, const std::optional<fs::path>& schema,
                   std::ostream& err) {
  const auto columns = load_schema(schema.value_or(default_schema_path(csv)));
  ZeroFillReport report;
  auto data = zero_fill_missing(load_csv(csv, columns), &report);
  for (const auto& name : report.fully_missing) {
    err << "note: column " << name << " is empty in every row; filled with 0\n";
  }
  for (const auto& name : report.partially_missing) {
    err << "warning: column " << name << " has missing cells; filled with 0\n";
  }
  return data;
}

int run_ingest(const IngestOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const auto schema = load_schema(options.schema.value_or(default_schema_path(options.csv)));
    const auto data = load_table(options.csv, options.schema, err);
    if (data.empty()) throw Error(ErrorCode::EmptyDataset, options.csv.string() + " has no rows");
    if (options.out) {
      save_csv(*options.out, data);
      write_schema_file(default_schema_path(*options.out), schema);
    }
    out << summary_to_json(data).dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

int run_synth(const SynthOptions& options, std::ostream& out, std::ostream& err) {
  try {
    SyntheticOptions synth;
    synth.response = options.linear ? SyntheticResponse::Linear : SyntheticResponse::Nonlinear;
    synth.noise = options.noise;
    const auto data = synthesize_dataset(options.n, options.seed, synth);
    save_csv(options.out, data);
    write_schema_file(default_schema_path(options.out), data.columns());
    out << json{{"rows", data.row_count()},
                {"columns", data.column_count()},
                {"csv", options.out.string()},
                {"schema", default_schema_path(options.out).string()}}
               .dump()
        << '\n';
    return 0;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

int run_train(const TrainOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const auto data = load_table(options.dataset, options.schema, err);
    const auto start = std::chrono::steady_clock::now();
    const auto result = train(data, options.config);
    const auto seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    err << "trained " << result.report.history.size() << " epochs in " << std::fixed
        << std::setprecision(2) << seconds << " s\n"
        << std::defaultfloat;

    const auto report = train_report_to_json(result.report);
    save_model(options.model_out, result.model, {{"train_report", report}});
    if (options.format == "table") {
      out << "held-out residuals\n";
      print_residual_table(out, result.report.held_out);
      out << "\nin-sample residuals\n";
      print_residual_table(out, result.report.in_sample);
    } else {
      out << report.dump(2) << '\n';
    }
    return 0;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

int run_query(const QueryOptions& options, std::ostream& out, std::ostream& err) {
  try {
    auto full = load_table(options.dataset, options.schema, err);
    const auto stats = compute_norm_stats(full);
    const auto served =
        options.subsample ? subsample(full, *options.subsample, options.seed) : std::move(full);
    auto request = query_from_json(read_json_file(options.bounds), stats);
    if (options.tolerance) request.tolerance = *options.tolerance;
    if (options.k) request.k = *options.k;
    validate_bounds(request.bounds, served);

    const auto normalized = normalize(served, stats);
    const auto response =
        explore(served, normalized, stats, request.bounds, request.tolerance, request.k);
    auto body = response_to_json(response);
    body["bounds"] = bounds_to_json(request.bounds);
    body["tolerance"] = request.tolerance;

    std::vector<std::size_t> matched;
    for (std::size_t r = 0; r < response.labels.size(); ++r) {
      if (response.labels[r] == MatchLabel::Match) matched.push_back(r);
    }

    if (options.model) {
      // Surrogate prediction at the centroid of the candidate set.
      const auto stored = load_model(*options.model);
      std::vector<std::size_t> focus = matched;
      if (response.ranking) {
        for (const auto& r : *response.ranking) focus.push_back(r.row);
      }
      const auto center = composition_center(served.select_rows(focus), stored.model.input_names);
      const auto prediction =
          forward(stored.model, std::span<const double>(center.data(), center.size()));
      json predicted = json::object();
      for (std::size_t j = 0; j < stored.model.output_dim(); ++j) {
        predicted[stored.model.output_names[j]] = prediction(static_cast<Eigen::Index>(j));
      }
      body["surrogate"] = {
          {"anchor", std::vector<double>(center.data(), center.data() + center.size())},
          {"inputs", stored.model.input_names},
          {"prediction", std::move(predicted)}};
    }

    if (options.export_path) save_csv(*options.export_path, served.select_rows(matched));
    out << body.dump() << '\n';
    return 0;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

int run_serve(const ServeOptions& options, std::ostream& out, std::ostream& err) {
  try {
    SessionManager sessions;
    sessions.add_dataset("default", load_table(options.dataset, options.schema, err));
    if (options.model) {
      auto stored = load_model(*options.model);
      json report = stored.metadata.is_object() && stored.metadata.contains("train_report")
                        ? stored.metadata["train_report"]
                        : json();
      sessions.set_model(std::make_shared<const MlpModel>(std::move(stored.model)),
                         std::move(report));
    }
    ApiServer server(sessions);
    if (options.static_dir) server.mount_static(*options.static_dir);
    const int port = server.bind(options.host, options.port);
    out << "listening on http://" << options.host << ':' << port << std::endl;
    server.run();
    return 0;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

}  // namespace alloyscope::cli
