#include "hforge/service/cli.hpp"

#include <csignal>
#include <ctime>
#include <fstream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>
#include <unistd.h>

#include "hforge/core/errors.hpp"
#include "hforge/profiler/report.hpp"
#include "hforge/service/api_server.hpp"
#include "hforge/service/run_manager.hpp"

namespace hforge::service {

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

// Restores the previous SIGINT/SIGTERM handlers on scope exit.
class SignalScope {
 public:
  SignalScope() {
    g_interrupted = false;
    old_int_ = std::signal(SIGINT, on_signal);
    old_term_ = std::signal(SIGTERM, on_signal);
  }
  ~SignalScope() {
    std::signal(SIGINT, old_int_);
    std::signal(SIGTERM, old_term_);
  }

 private:
  void (*old_int_)(int);
  void (*old_term_)(int);
};

std::string timestamp_run_id() {
  char buf[32];
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return std::string(buf) + "-" + std::to_string(::getpid());
}

void print_config_error(std::ostream& err, const ConfigError& e) {
  err << "config error";
  if (!e.field().empty()) err << " [" << e.field() << "]";
  err << ": " << e.what() << "\n";
}

int cmd_run(const std::string& config_file, const std::string& log_dir, const std::string& run_id, std::ostream& out,
            std::ostream& err) {
  RunConfig config;
  try {
    config = load_run_config(config_file);
  } catch (const ConfigError& e) {
    print_config_error(err, e);
    return kExitConfig;
  }
  if (!log_dir.empty()) config.log_dir = log_dir;
  if (!run_id.empty()) config.run_id = run_id;
  if (config.run_id.empty()) config.run_id = timestamp_run_id();

  SignalScope signals;
  RunManager manager(1);
  RunSnapshot snap;
  try {
    snap = manager.start(config);
  } catch (const ConfigError& e) {
    print_config_error(err, e);
    return kExitConfig;
  }
  while (!is_terminal(snap.state)) {
    snap = manager.wait(snap.run_id, 0.1);
    if (g_interrupted) manager.stop(snap.run_id);
  }
  const auto summary = std::filesystem::path(snap.log_dir) / "summary.json";
  if (snap.state == RunState::Failed) {
    err << "run failed: " << (snap.message.empty() ? snap.reason : snap.message) << "\n";
    if (std::filesystem::exists(summary)) out << summary.string() << "\n";
    return kExitRuntime;
  }
  out << summary.string() << "\n";
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& dirs, const std::string& aggregate_out, std::ostream& out,
               std::ostream& err) {
  std::vector<std::vector<profiler::ConvergencePoint>> series;
  int code = kExitOk;
  for (const auto& d : dirs) {
    const std::filesystem::path dir(d);
    std::vector<RunEvent> events;
    try {
      events = profiler::read_events(dir / "events.jsonl");
    } catch (const ParseError& e) {
      err << e.what() << "\n";
      return kExitRuntime;
    }
    series.push_back(profiler::convergence(events));
    std::ofstream(dir / "convergence.csv") << profiler::convergence_csv(series.back());
    out << (dir / "convergence.csv").string() << "\n";
    try {
      const auto s = profiler::summarize(events);
      out << "  reason " << s["reason"].get<std::string>() << ", samples " << s["samples_used"]
          << ", best fitness " << (s["best"].is_null() ? std::string("none") : s["best"]["fitness"].dump()) << "\n";
    } catch (const ContractViolation& e) {
      err << dir.string() << ": " << e.what() << "\n";
      code = kExitRuntime;
    }
  }
  if (dirs.size() > 1) {
    std::ofstream(aggregate_out) << profiler::aggregate_csv(series);
    out << aggregate_out << "\n";
  }
  return code;
}

int cmd_serve(const std::string& host, int port, const std::string& static_dir, int max_runs, std::ostream& out,
              std::ostream& err) {
  RunManager manager(static_cast<std::size_t>(max_runs));
  ApiServer server(manager, static_dir);
  SignalScope signals;
  const int bound = port == 0 ? server.bind_any_port(host) : -1;
  std::thread watcher([&] {
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  out << "listening on http://" << host << ":" << (port == 0 ? bound : port) << "\n" << std::flush;
  const bool ok = port == 0 ? (bound > 0 && server.serve()) : server.listen(host, port);
  g_interrupted = true;
  watcher.join();
  if (!ok) {
    err << "cannot listen on " << host << ":" << port << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Language-model-guided algorithm design engine", "hforge"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  std::string config_file, log_dir, run_id, aggregate_out = "aggregate.csv", host = "127.0.0.1", static_dir;
  std::vector<std::string> report_dirs;
  int port = 8080, max_runs = 4;
  bool as_json = false;

  auto* run = app.add_subcommand("run", "Execute a run to completion and print the summary path");
  run->add_option("--config", config_file, "TOML run config")->required();
  run->add_option("--log-dir", log_dir, "Override profiler.log_dir");
  run->add_option("--run-id", run_id, "Run directory name (default: timestamp)");

  auto* report = app.add_subcommand("report", "Write convergence.csv for run logs; aggregate when several");
  report->add_option("--log", report_dirs, "Run log directory (repeatable)")->required();
  report->add_option("--out", aggregate_out, "Aggregate CSV path for multiple logs");

  auto* list_tasks = app.add_subcommand("list-tasks", "List registered tasks");
  list_tasks->add_flag("--json", as_json, "Print the full registry as JSON");
  auto* list_methods = app.add_subcommand("list-methods", "List search methods");
  list_methods->add_flag("--json", as_json, "Print names with default parameters as JSON");

  auto* serve = app.add_subcommand("serve", "Start the HTTP run-control API");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port, 0 for any free port");
  serve->add_option("--static", static_dir, "Directory served under /");
  serve->add_option("--max-runs", max_runs, "Concurrent run limit")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check a config without sampling");
  validate->add_option("--config", config_file, "TOML run config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    if (*run) return cmd_run(config_file, log_dir, run_id, out, err);
    if (*report) return cmd_report(report_dirs, aggregate_out, out, err);
    if (*list_tasks) {
      if (as_json) out << tasks_json().dump(2) << "\n";
      else for (const auto& t : tasks_json()) out << t["id"].get<std::string>() << "\n";
      return kExitOk;
    }
    if (*list_methods) {
      if (as_json) out << methods_json().dump(2) << "\n";
      else for (const auto& m : methods_json()) out << m["name"].get<std::string>() << "\n";
      return kExitOk;
    }
    if (*serve) return cmd_serve(host, port, static_dir, max_runs, out, err);
    if (*validate) {
      const auto c = load_run_config(config_file);
      out << "ok: method " << search::to_string(c.method.method) << ", task " << c.task_id << ", "
          << c.budget.max_samples << " samples, sampler " << c.llm.kind << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    print_config_error(err, e);
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace hforge::service
