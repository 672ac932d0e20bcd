#include "asmctl/http_service.hpp"

#include <httplib.h>

#include "asmctl/error.hpp"
#include "asmctl/plan_io.hpp"

namespace asmctl {

using nlohmann::json;

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kIo:
      return 500;
    default:
      return 400;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  send_json(res, http_status(code), {{"code", std::string(to_string(code))}, {"message", message}});
}

template <typename Handler>
auto guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, ErrorCode::kValidation, e.what());
    }
  };
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kValidation, std::string("request body is not JSON: ") + e.what());
  }
}

std::int64_t resume_point(const httplib::Request& req) {
  std::string value;
  if (req.has_param("after")) {
    value = req.get_param_value("after");
  } else if (req.has_header("Last-Event-ID")) {
    value = req.get_header_value("Last-Event-ID");
  }
  if (value.empty()) return 0;
  try {
    return std::max<std::int64_t>(0, std::stoll(value));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidInput, "bad stream resume point '" + value + "'");
  }
}

}  // namespace

HttpSessionServer::HttpSessionServer(SessionService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpSessionServer::~HttpSessionServer() { stop(); }

void HttpSessionServer::install_routes() {
  server_->Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    json_util::require_object(body, "request");
    json_util::reject_unknown_keys(body, {"plan", "config"}, "request");
    const AssemblyPlan plan = plan_from_json(json_util::field(body, "plan", "request"));
    const EngineConfig config = body.contains("config") ? config_from_json(body["config"]) : EngineConfig{};
    send_json(res, 201, descriptor_to_json(service_.create_session(plan, config)));
  }));

  server_->Post(R"(/sessions/([^/]+)/events)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const std::string id = req.matches[1];
                  const auto plan = service_.plan_of(id);
                  const ClientEvent event = client_event_from_json(parse_body(req), plan.get());
                  send_json(res, 200, event_response_to_json(service_.post_event(id, event)));
                }));

  server_->Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, descriptor_to_json(service_.get_state(req.matches[1])));
  }));

  server_->Get(R"(/sessions/([^/]+)/timeline)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 res.set_content(service_.export_timeline(req.matches[1]), "text/csv");
               }));

  server_->Get(R"(/sessions/([^/]+)/stream)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 service_.get_state(id);  // not-found before the stream opens
                 auto cursor = std::make_shared<std::int64_t>(resume_point(req));
                 res.set_header("Cache-Control", "no-cache");
                 res.set_chunked_content_provider(
                     "text/event-stream", [this, id, cursor](std::size_t, httplib::DataSink& sink) {
                       if (service_.is_shut_down()) return false;
                       auto records = service_.wait_records(id, *cursor, std::chrono::milliseconds(250));
                       for (const auto& r : records) {
                         const std::string frame = "id: " + std::to_string(r.seq) +
                                                   "\nevent: update\ndata: " + r.payload.dump() + "\n\n";
                         if (!sink.write(frame.data(), frame.size())) return false;
                         *cursor = r.seq;
                       }
                       if (records.empty() && service_.is_completed(id)) {
                         sink.done();
                       } else if (records.empty() && !sink.is_writable()) {
                         return false;
                       }
                       return true;
                     });
               }));
}

int HttpSessionServer::bind(const std::string& host, int port) {
  return server_->bind_to_port(host.c_str(), port) ? port : -1;
}

int HttpSessionServer::bind_any_port(const std::string& host) {
  return server_->bind_to_any_port(host.c_str());
}

bool HttpSessionServer::listen_after_bind() { return server_->listen_after_bind(); }

void HttpSessionServer::stop() {
  service_.shutdown();
  server_->stop();
}

void HttpSessionServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace asmctl
