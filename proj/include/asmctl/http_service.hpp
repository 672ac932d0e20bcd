#pragma once

#include <memory>
#include <string>

#include "asmctl/service.hpp"

namespace httplib {
class Server;
}

namespace asmctl {

// JSON-over-HTTP front for SessionService:
//   POST /sessions                 {"plan":{...}, "config":{...}?}  -> 201 descriptor
//   POST /sessions/{id}/events     {"client_ts_ms":..,"action":{..}} -> messages + state
//   GET  /sessions/{id}                                              -> descriptor
//   GET  /sessions/{id}/stream     text/event-stream of push records
//   GET  /sessions/{id}/timeline   text/csv
// Errors are {"code":..., "message":...} with 400, 404 or 409.
class HttpSessionServer {
 public:
  explicit HttpSessionServer(SessionService& service);
  ~HttpSessionServer();

  HttpSessionServer(const HttpSessionServer&) = delete;
  HttpSessionServer& operator=(const HttpSessionServer&) = delete;

  // Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  int bind_any_port(const std::string& host);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  SessionService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace asmctl
