#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "alloyscope/session.hpp"

namespace alloyscope {

/// JSON-over-HTTP front end for a SessionManager.
///
///   GET  /api/columns                        column specs, groups, norm stats
///   POST /api/sessions                       {dataset, n, seed} -> {session_id}
///   GET  /api/sessions/{id}/points           normalized matrix + row ids
///   POST /api/sessions/{id}/bounds           {bounds, tolerance, k} -> response
///   POST /api/sessions/{id}/sensitivity      {axis, overrides, n_samples} -> curve
///   POST /api/sessions/{id}/export           {rows} -> text/csv
///   GET  /api/model                          {loaded, layer_dims, residual_report}
///
/// Errors come back as {"error": <code>, "message": <detail>} with a 4xx
/// status. Requests run on the server's worker threads.
class ApiServer {
 public:
  explicit ApiServer(SessionManager& sessions, std::string default_dataset = "default");
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Serves files under `root` at "/" (the browser client).
  void mount_static(const std::filesystem::path& root);

  /// Port 0 picks a free port. Returns the bound port; throws PortInUse.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace alloyscope
