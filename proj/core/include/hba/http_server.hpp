#pragma once

// HTTP/JSON front end of the match service.
//
//   POST /sessions               {"game": "PD"|"RPS"}
//   POST /sessions/{id}/moves    {"action": "C", "round": 3}
//   GET  /sessions/{id}
//   GET  /sessions/{id}/summary
//   GET  /health
//
// Errors are {"error": {"code": ..., "message": ...}} with status 400, 404
// or 409. CORS headers are sent on every response.

#include <memory>
#include <string>

#include "hba/service.hpp"

namespace hba {

struct HttpOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "*";
  // Served under / when the directory exists (the built browser client).
  std::string static_dir;
};

class HttpServer {
 public:
  HttpServer(MatchService& service, HttpOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the socket; returns the port. Throws Error on bind failure.
  int bind();
  // Serves until stop(); bind() must have succeeded.
  void run();
  void stop();
  bool running() const;
  // Blocks until run() accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hba
