#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "hforge/service/api_server.hpp"
#include "hforge/service/run_manager.hpp"

namespace hforge::testing {

// OpenAI-format endpoint that holds every request until released.
struct HangingEndpoint {
  httplib::Server server;
  int port;
  std::thread thread;
  std::mutex mu;
  std::condition_variable cv;
  bool released = false;
  std::atomic<int> requests{0};
  HangingEndpoint() {
    server.Post(".*", [this](const httplib::Request&, httplib::Response& res) {
      ++requests;
      std::unique_lock lock(mu);
      cv.wait_for(lock, std::chrono::seconds(10), [this] { return released; });
      res.status = 503;
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    for (int i = 0; i < 200 && !server.is_running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  void release() {
    {
      std::lock_guard lock(mu);
      released = true;
    }
    cv.notify_all();
  }
  ~HangingEndpoint() {
    release();
    server.stop();
    thread.join();
  }
};

// API server on a free loopback port, served from a background thread.
struct LiveServer {
  service::RunManager manager;
  service::ApiServer server;
  int port;
  std::thread thread;
  explicit LiveServer(std::size_t cap = 4) : manager(cap), server(manager) {
    port = server.bind_any_port("127.0.0.1");
    thread = std::thread([this] { server.serve(); });
    for (int i = 0; i < 200 && !server.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~LiveServer() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(10, 0);
    return c;
  }
};

}  // namespace hforge::testing
