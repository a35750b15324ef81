#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "hforge/service/run_manager.hpp"

namespace httplib {
class Server;
}

namespace hforge::service {

/// JSON run-control API over a RunManager.
///
///   POST /runs                      body: run config (same schema as the TOML file)
///   GET  /runs                      all run snapshots
///   GET  /runs/{id}                 snapshot
///   POST /runs/{id}/stop            cooperative stop, idempotent
///   GET  /runs/{id}/events?since=N  events with seq > N (default -1)
///   GET  /runs/{id}/best            best candidate so far, or null
///   GET  /tasks, GET /methods       registries
///
/// Errors are {code, message[, field]} with status 400, 404, 429 or 500.
/// When `static_dir` is set its files are served under "/".
class ApiServer {
 public:
  explicit ApiServer(RunManager& runs, std::filesystem::path static_dir = {});
  ~ApiServer();

  /// Binds and serves until stop(). Returns false when binding fails.
  bool listen(const std::string& host, int port);
  /// Binds to a free port and returns it; call serve() afterwards.
  int bind_any_port(const std::string& host);
  bool serve();
  void stop();
  bool running() const;

 private:
  void install_routes();

  RunManager& runs_;
  std::filesystem::path static_dir_;
  std::unique_ptr<httplib::Server> server_;
};

/// Body of GET /tasks and GET /methods (also used by the CLI list commands).
nlohmann::json tasks_json();
nlohmann::json methods_json();

}  // namespace hforge::service
