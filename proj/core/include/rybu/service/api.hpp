#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "rybu/lts/deadlock.hpp"
#include "rybu/service/loader.hpp"
#include "rybu/service/session.hpp"

namespace rybu::service {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

struct ApiOptions {
  lts::ExplorationLimits limits;
  std::size_t default_graph_cap = 2000;
};

/// Routes of the local JSON API, independent of any HTTP library:
///
///   POST /sessions                 -> 201 new session state
///   GET  /sessions/{id}/state
///   POST /sessions/{id}/step       {"action_id": n}; 409 with "enabled" if not enabled
///   POST /sessions/{id}/undo
///   GET  /model
///   GET  /verify
///   GET  /graph?cap=N              413 when the LTS has more than N nodes
class Api {
 public:
  Api(LoadedModel model, ApiOptions options = {});

  ApiResponse handle(const ApiRequest& request);

  const LoadedModel& loaded() const { return loaded_; }

 private:
  ApiResponse session_route(const ApiRequest& request, const std::string& id, const std::string& action);
  ApiResponse verify();
  ApiResponse graph(const ApiRequest& request);

  LoadedModel loaded_;
  ApiOptions options_;
  SessionStore sessions_;

  std::mutex verify_mutex_;
  std::unique_ptr<lts::Lts> verified_lts_;
  std::optional<nlohmann::json> verified_report_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> static_dir;
};

/// Serves an Api over HTTP. start() binds and runs in a background thread.
class HttpServer {
 public:
  HttpServer(Api& api, ServeOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Returns the bound port; throws std::runtime_error if binding fails.
  int start();
  /// Blocks serving requests on the calling thread.
  void run();
  void stop();
  int port() const { return port_; }

 private:
  void bind();

  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string host_;
  int port_ = 0;
};

/// Port from RYBU_PORT, else 8080.
int default_port();

}  // namespace rybu::service
