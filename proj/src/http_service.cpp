#include "dwb/http_service.hpp"

#include <httplib.h>

#include "dwb/text.hpp"

namespace dwb::http {

namespace {

using api::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump() + "\n", "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, api::http_status(e.code()), api::error_body(e));
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON body: ") + e.what());
  }
}

int int_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) throw Error(ErrorCode::ParseError, std::string("missing query parameter '") + name + "'");
  auto v = text::parse_int(req.get_param_value(name));
  if (!v) throw Error(ErrorCode::ParseError, std::string("query parameter '") + name + "' must be an integer");
  return static_cast<int>(*v);
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const json::exception& e) {
      send_error(res, Error(ErrorCode::ParseError, e.what()));
    } catch (const std::exception& e) {
      send_json(res, 500, {{"code", "Internal"}, {"message", e.what()}});
    }
  };
}

}  // namespace

Service::Service(api::Workbench& workbench)
    : workbench_(workbench), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

Service::~Service() { stop(); }

void Service::install_routes() {
  auto& wb = workbench_;
  server_->Get("/industries", guarded([&wb](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, wb.industries());
  }));
  server_->Get("/indices", guarded([&wb](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, wb.indices());
  }));
  server_->Get("/series", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
    std::optional<TimeRange> range;
    if (req.has_param("from") || req.has_param("to")) {
      range.emplace();
      if (req.has_param("from")) range->from = TimeKey{int_param(req, "from"), 0};
      if (req.has_param("to")) range->to = TimeKey{int_param(req, "to"), 4};
    }
    send_json(res, 200, wb.series(int_param(req, "industry"), int_param(req, "index"), range));
  }));
  server_->Post("/predict", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, wb.predict(parse_body(req)));
  }));
  server_->Post("/correlate", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, wb.correlate(parse_body(req)));
  }));
  server_->Post("/mdp/solve", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, wb.mdp_solve(parse_body(req)));
  }));
  server_->Post("/ingest", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, wb.ingest(parse_body(req)));
  }));
  server_->Get(R"(/templates/([^/]+))", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
    auto body = wb.get_template(req.matches[1]);
    if (!body) throw Error(ErrorCode::NotFound, "no template '" + std::string(req.matches[1]) + "'");
    res.status = 200;
    res.set_content(*body, "application/json");
  }));
  server_->Put(R"(/templates/([^/]+))", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
    wb.put_template(req.matches[1], req.body);
    res.status = 200;
    res.set_content(req.body, "application/json");
  }));
}

int Service::bind_any(const std::string& host) { return server_->bind_to_any_port(host); }

bool Service::bind(const std::string& host, int port) { return server_->bind_to_port(host, port); }

bool Service::listen_after_bind() { return server_->listen_after_bind(); }

void Service::stop() {
  if (server_) server_->stop();
}

void Service::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace dwb::http
