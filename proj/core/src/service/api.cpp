#include "rybu/service/api.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "rybu/service/json_codec.hpp"

namespace rybu::service {

using nlohmann::json;

namespace {

ApiResponse error(int status, const std::string& message) { return {status, error_json(message)}; }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    std::size_t j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    out.push_back(path.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Api::Api(LoadedModel model, ApiOptions options) : loaded_(std::move(model)), options_(options) {}

ApiResponse Api::handle(const ApiRequest& request) {
  const std::vector<std::string> parts = split_path(request.path);
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";

  if (parts.size() == 1 && parts[0] == "model") {
    if (!get) return error(405, "use GET");
    return {200, model_json(*loaded_.model, loaded_.name)};
  }
  if (parts.size() == 1 && parts[0] == "verify") {
    if (!get) return error(405, "use GET");
    return verify();
  }
  if (parts.size() == 1 && parts[0] == "graph") {
    if (!get) return error(405, "use GET");
    return graph(request);
  }
  if (parts.size() == 1 && parts[0] == "sessions") {
    if (!post) return error(405, "use POST");
    if (!request.body.empty() && !json::accept(request.body)) return error(422, "body is not JSON");
    const std::string id = sessions_.create(loaded_.model);
    ApiResponse r;
    r.status = 201;
    sessions_.with(id, [&](Session& s) { r.body = session_json(id, s); });
    return r;
  }
  if (parts.size() == 3 && parts[0] == "sessions") return session_route(request, parts[1], parts[2]);
  return error(404, "no route for " + request.method + " " + request.path);
}

ApiResponse Api::session_route(const ApiRequest& request, const std::string& id, const std::string& action) {
  ApiResponse r;
  bool known_route = true;
  const bool found = sessions_.with(id, [&](Session& s) {
    if (action == "state") {
      if (request.method != "GET") {
        r = error(405, "use GET");
        return;
      }
      r.body = session_json(id, s);
    } else if (action == "undo") {
      if (request.method != "POST") {
        r = error(405, "use POST");
        return;
      }
      s.undo();
      r.body = session_json(id, s);
    } else if (action == "step") {
      if (request.method != "POST") {
        r = error(405, "use POST");
        return;
      }
      json body = json::parse(request.body, nullptr, false);
      if (body.is_discarded() || !body.is_object() || !body.contains("action_id") ||
          !body["action_id"].is_number_integer() || body["action_id"].get<std::int64_t>() < 0) {
        r = error(422, "expected {\"action_id\": <non-negative integer>}");
        return;
      }
      const auto raw = body["action_id"].get<std::uint64_t>();
      const imds::ActionId chosen(raw < s.model().action_count() ? static_cast<std::size_t>(raw) : s.model().action_count());
      try {
        s.step(chosen);
        r.body = session_json(id, s);
      } catch (const lts::StepRejected& e) {
        r = error(409, e.what());
        r.body["enabled"] = session_json(id, s)["enabled"];
      }
    } else {
      known_route = false;
    }
  });
  if (!found) return error(404, "unknown session '" + id + "'");
  if (!known_route) return error(404, "no route for " + request.method + " " + request.path);
  return r;
}

ApiResponse Api::verify() {
  std::lock_guard lock(verify_mutex_);
  if (!verified_report_) {
    verified_lts_ = std::make_unique<lts::Lts>(lts::build_lts(*loaded_.model, options_.limits));
    const lts::DeadlockReport report = lts::analyze(*verified_lts_);
    verified_report_ = report_json(*loaded_.model, *verified_lts_, report);
  }
  return {200, *verified_report_};
}

ApiResponse Api::graph(const ApiRequest& request) {
  std::size_t cap = options_.default_graph_cap;
  if (auto it = request.query.find("cap"); it != request.query.end()) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(it->second, &used);
      if (used != it->second.size() || v == 0) throw std::invalid_argument("cap");
      cap = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      return error(422, "cap must be a positive integer");
    }
  }
  lts::ExplorationLimits limits = options_.limits;
  limits.max_nodes = std::min(limits.max_nodes, cap + 1);
  const lts::Lts lts = lts::build_lts(*loaded_.model, limits);
  if (lts.node_count() > cap || lts.status() == lts::LtsStatus::NodeLimitExceeded)
    return error(413, "the LTS has more than " + std::to_string(cap) + " nodes; raise cap or use projections");
  return {200, graph_json(lts)};
}

struct HttpServer::Impl {
  httplib::Server server;
  std::thread thread;
};

HttpServer::HttpServer(Api& api, ServeOptions options) : impl_(std::make_unique<Impl>()) {
  port_ = options.port;
  auto& server = impl_->server;
  auto dispatch = [&api](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    ApiResponse out;
    try {
      out = api.handle(r);
    } catch (const std::exception& e) {
      out = error(500, e.what());
    }
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  for (const char* pattern : {"/model", "/verify", "/graph", "/sessions", R"(/sessions/([^/]+)/([^/]+))"}) {
    server.Get(pattern, dispatch);
    server.Post(pattern, dispatch);
  }
  if (options.static_dir) server.set_mount_point("/", options.static_dir->string());
  host_ = options.host;
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start() {
  bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void HttpServer::run() {
  bind();
  impl_->server.listen_after_bind();
}

void HttpServer::bind() {
  if (port_ == 0) {
    port_ = impl_->server.bind_to_any_port(host_);
    if (port_ < 0) throw std::runtime_error("cannot bind " + host_);
  } else if (!impl_->server.bind_to_port(host_, port_)) {
    throw std::runtime_error("cannot bind " + host_ + ":" + std::to_string(port_));
  }
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int default_port() {
  if (const char* env = std::getenv("RYBU_PORT")) {
    try {
      const int p = std::stoi(env);
      if (p > 0 && p < 65536) return p;
    } catch (const std::exception&) {
    }
  }
  return 8080;
}

}  // namespace rybu::service
