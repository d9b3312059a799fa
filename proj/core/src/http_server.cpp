#include "hba/http_server.hpp"

#include <filesystem>

#include <httplib.h>

#include "hba/log.hpp"

namespace hba {

using nlohmann::json;

struct HttpServer::Impl {
  MatchService& service;
  HttpOptions options;
  httplib::Server server;
  bool bound = false;

  Impl(MatchService& s, HttpOptions o) : service(s), options(std::move(o)) {}

  static void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void send_error(httplib::Response& res, int status, const std::string& code,
                         const std::string& message) {
    send(res, status, {{"error", {{"code", code}, {"message", message}}}});
  }

  // Runs a handler and maps failures to JSON error responses.
  template <class F>
  static void guarded(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.code(), e.what());
    } catch (const std::exception& e) {
      log::error("request failed: ", e.what());
      send_error(res, 500, "internal", e.what());
    }
  }

  static json body_of(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
      return json::parse(req.body);
    } catch (const json::parse_error& e) {
      throw ServiceError(400, "invalid_request",
                         "request body is not JSON (byte " + std::to_string(e.byte) + ")");
    }
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Cache-Control", "no-store"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
    server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] { send(res, 200, service.health()); });
    });
    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { send(res, 201, service.create_session(body_of(req))); });
    });
    server.Get(R"(/sessions/([0-9A-Za-z_-]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] { send(res, 200, service.session_view(req.matches[1])); });
               });
    server.Get(R"(/sessions/([0-9A-Za-z_-]+)/summary)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] { send(res, 200, service.session_summary(req.matches[1])); });
               });
    server.Post(R"(/sessions/([0-9A-Za-z_-]+)/moves)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    send(res, 200, service.submit_move(req.matches[1], body_of(req)));
                  });
                });
    if (!options.static_dir.empty() && std::filesystem::is_directory(options.static_dir)) {
      server.set_mount_point("/", options.static_dir);
      log::info("serving static files from ", options.static_dir);
    }
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) send_error(res, res.status, "not_found", "no such resource");
    });
  }
};

HttpServer::HttpServer(MatchService& service, HttpOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  impl_->routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& o = impl_->options;
  int port = o.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(o.host);
    if (port < 0) throw Error("cannot bind " + o.host + " to a free port");
  } else if (!impl_->server.bind_to_port(o.host, port)) {
    throw Error("cannot bind " + o.host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  o.port = port;
  return port;
}

void HttpServer::run() {
  if (!impl_->bound) throw Error("HttpServer::run before bind");
  log::info("listening on ", impl_->options.host, ":", impl_->options.port);
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace hba
