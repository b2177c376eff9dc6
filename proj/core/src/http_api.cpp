#include "alloyscope/http_api.hpp"

#include <httplib.h>

#include "alloyscope/error.hpp"
#include "alloyscope/json_io.hpp"

namespace alloyscope {

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownDataset:
    case ErrorCode::UnknownRow:
      return 404;
    case ErrorCode::ModelNotLoaded:
      return 409;
    default:
      return 400;
  }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  send_json(res, {{"error", std::string(to_string(code))}, {"message", message}},
            status_for(code));
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::BadRequest, std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T field_or(const json& body, const char* key, T fallback) {
  if (!body.contains(key) || body.at(key).is_null()) return fallback;
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::BadRequest, std::string("field '") + key + "' has the wrong type");
  }
}

// Runs a handler, translating library errors into JSON error bodies.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.detail());
    } catch (const json::exception& e) {
      send_error(res, ErrorCode::BadRequest, e.what());
    } catch (const std::exception& e) {
      send_json(res, {{"error", "Internal"}, {"message", e.what()}}, 500);
    }
  };
}

}  // namespace

struct ApiServer::Impl {
  SessionManager& sessions;
  std::string default_dataset;
  httplib::Server server;

  Impl(SessionManager& s, std::string dataset)
      : sessions(s), default_dataset(std::move(dataset)) {
    // httplib's default adds SO_REUSEPORT, which lets a second server share the port.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    register_routes();
  }

  void register_routes() {
    server.Get("/api/columns", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto id = req.has_param("dataset") ? req.get_param_value("dataset") : default_dataset;
      auto body = columns_to_json(*sessions.dataset(id));
      body["dataset"] = id;
      send_json(res, body);
    }));

    server.Post("/api/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const auto dataset = field_or<std::string>(body, "dataset", default_dataset);
      const auto n = field_or<long long>(body, "n", 20000);
      const auto seed = field_or<std::uint64_t>(body, "seed", 0);
      if (n < 1) throw Error(ErrorCode::InvalidCount, "n must be >= 1");
      const auto id = sessions.create_session(dataset, static_cast<std::size_t>(n), seed);
      send_json(res, {{"session_id", id}, {"rows", sessions.served(id).row_count()}}, 201);
    }));

    server.Get(R"(/api/sessions/([^/]+)/points)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, points_to_json(sessions.points(req.matches[1])));
               }));

    server.Post(R"(/api/sessions/([^/]+)/bounds)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const std::string id = req.matches[1];
                  const auto entry = sessions.dataset(sessions.state(id).dataset_id);
                  const auto request = query_from_json(parse_body(req), entry->stats);
                  const auto response =
                      sessions.update_bounds(id, request.bounds, request.tolerance, request.k);
                  send_json(res, response_to_json(response));
                }));

    server.Post(R"(/api/sessions/([^/]+)/sensitivity)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_body(req);
                  const auto axis = field_or<std::string>(body, "axis", "");
                  const auto n = field_or<long long>(body, "n_samples", 51);
                  if (n < 0) throw Error(ErrorCode::TooFewSamples, "n_samples must be >= 2");
                  const auto overrides =
                      overrides_from_json(body.value("overrides", json::object()));
                  const auto curve = sessions.get_sensitivity(req.matches[1], axis, overrides,
                                                              static_cast<std::size_t>(n));
                  send_json(res, curve_to_json(curve));
                }));

    server.Post(R"(/api/sessions/([^/]+)/export)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_body(req);
                  const auto rows = field_or<std::vector<std::int64_t>>(body, "rows", {});
                  res.set_content(sessions.export_selection(req.matches[1], rows), "text/csv");
                }));

    server.Get("/api/model", guarded([this](const httplib::Request&, httplib::Response& res) {
      const auto info = sessions.model();
      json body = {{"loaded", static_cast<bool>(info.model)}};
      if (info.model) {
        body["layer_dims"] = info.model->layer_dims;
        body["input_names"] = info.model->input_names;
        body["output_names"] = info.model->output_names;
        body["residual_report"] = info.residual_report;
      }
      send_json(res, body);
    }));
  }
};

ApiServer::ApiServer(SessionManager& sessions, std::string default_dataset)
    : impl_(std::make_unique<Impl>(sessions, std::move(default_dataset))) {}

ApiServer::~ApiServer() { stop(); }

void ApiServer::mount_static(const std::filesystem::path& root) {
  if (!impl_->server.set_mount_point("/", root.string())) {
    throw Error(ErrorCode::Io, "cannot serve static files from " + root.string());
  }
}

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::PortInUse, host + ": no free port");
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::PortInUse, host + ":" + std::to_string(port));
  }
  return port;
}

void ApiServer::run() { impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace alloyscope
