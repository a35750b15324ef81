#include "hforge/service/api_server.hpp"

#include <charconv>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "hforge/core/errors.hpp"
#include "hforge/search/method_config.hpp"
#include "hforge/tasks/registry.hpp"

namespace hforge::service {

namespace {

using Json = nlohmann::json;

void send_json(httplib::Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message,
                const std::string& field = {}) {
  Json body = {{"code", code}, {"message", message}};
  if (!field.empty()) body["field"] = field;
  send_json(res, body, status);
}

// Maps engine exceptions to API errors.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ConfigError& e) {
      send_error(res, 400, "invalid_config", e.what(), e.field());
    } catch (const NotFoundError& e) {
      send_error(res, 404, "not_found", e.what());
    } catch (const CapacityError& e) {
      send_error(res, 429, "capacity", e.what());
    } catch (const Json::exception& e) {
      send_error(res, 400, "bad_request", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

std::int64_t since_param(const httplib::Request& req) {
  if (!req.has_param("since")) return -1;
  const auto text = req.get_param_value("since");
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || v < -1) {
    throw ConfigError("since must be an integer >= -1", "since");
  }
  return v;
}

}  // namespace

Json tasks_json() {
  Json out = Json::array();
  for (const auto& id : tasks::task_ids()) {
    const auto task = tasks::make_task(id);
    out.push_back({{"id", id},
                   {"function", task->template_program().function_name},
                   {"template", task->template_program().source},
                   {"description", task->description()},
                   {"instance_seed", task->instance_seed()},
                   {"instance_count", task->instance_count()},
                   {"timeout_s", task->default_timeout_s()}});
  }
  return out;
}

Json methods_json() {
  Json out = Json::array();
  for (auto m : search::all_methods()) {
    search::MethodConfig c;
    c.method = m;
    out.push_back({{"name", std::string(search::to_string(m))},
                   {"multi_objective", search::is_multi_objective(m)},
                   {"defaults", search::to_json(c)}});
  }
  return out;
}

ApiServer::ApiServer(RunManager& runs, std::filesystem::path static_dir)
    : runs_(runs), static_dir_(std::move(static_dir)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::install_routes() {
  auto& s = *server_;
  s.Post("/runs", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto body = Json::parse(req.body);
           auto config = run_config_from_json(body);
           send_json(res, to_json(runs_.start(std::move(config))), 201);
         }));
  s.Get("/runs", guarded([this](const httplib::Request&, httplib::Response& res) {
          Json out = Json::array();
          for (const auto& snap : runs_.list()) out.push_back(to_json(snap));
          send_json(res, out);
        }));
  s.Get(R"(/runs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_json(res, to_json(runs_.status(req.matches[1])));
        }));
  s.Post(R"(/runs/([^/]+)/stop)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           send_json(res, to_json(runs_.stop(req.matches[1])));
         }));
  s.Get(R"(/runs/([^/]+)/events)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto since = since_param(req);
          const std::string id = req.matches[1];
          Json events = Json::array();
          auto last = since;
          for (const auto& e : runs_.events(id, since)) {
            events.push_back(to_json(e));
            last = static_cast<std::int64_t>(e.seq);
          }
          send_json(res, {{"run_id", id}, {"events", events}, {"last_seq", last}});
        }));
  s.Get(R"(/runs/([^/]+)/best)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto snap = runs_.status(req.matches[1]);
          send_json(res, {{"run_id", snap.run_id}, {"best", snap.best}});
        }));
  s.Get("/tasks", guarded([](const httplib::Request&, httplib::Response& res) { send_json(res, tasks_json()); }));
  s.Get("/methods", guarded([](const httplib::Request&, httplib::Response& res) { send_json(res, methods_json()); }));

  if (!static_dir_.empty() && !s.set_mount_point("/", static_dir_.string())) {
    throw ConfigError("static directory " + static_dir_.string() + " does not exist", "static_dir");
  }
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_error(res, res.status, res.status == 404 ? "not_found" : "http_error", "no such route");
  });
}

bool ApiServer::listen(const std::string& host, int port) {
  spdlog::info("serving on http://{}:{}", host, port);
  return server_->listen(host, port);
}

int ApiServer::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool ApiServer::serve() { return server_->listen_after_bind(); }

void ApiServer::stop() {
  if (server_) server_->stop();
}

bool ApiServer::running() const { return server_->is_running(); }

}  // namespace hforge::service
