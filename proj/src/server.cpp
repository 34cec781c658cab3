/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "server.hpp"

#include <algorithm>
#include <regex>

// The default backlog of 5 drops connections under a burst of clients.
#define CPPHTTPLIB_LISTEN_BACKLOG 128
#include "httplib.h"
#include "json.hpp"
#include "lifeins/error.hpp"
#include "service.hpp"

namespace lifeins::server {

namespace {

bool local_origin(const std::string& origin) {
  static const std::regex local(R"(^http://(localhost|127\.0\.0\.1|\[::1\])(:[0-9]+)?$)");
  return std::regex_match(origin, local);
}

}  // namespace

struct Server::Impl {
  Options options;
  httplib::Server http;
  int port = -1;

  void allow_origin(const httplib::Request& req, httplib::Response& res) const {
    if (!req.has_header("Origin")) return;
    const std::string origin = req.get_header_value("Origin");
    const auto& extra = options.cors_origins;
    if (local_origin(origin) || std::find(extra.begin(), extra.end(), origin) != extra.end()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
  }

  void routes() {
    http.Options(R"(/v1/.*)", [this](const httplib::Request& req, httplib::Response& res) {
      allow_origin(req, res);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    http.Get("/v1/health", [this](const httplib::Request& req, httplib::Response& res) {
      allow_origin(req, res);
      const nlohmann::json body = {{"schema", "v1"}, {"status", "ok"}, {"version", LIFEINS_VERSION}};
      res.set_content(body.dump(), "application/json");
    });
    http.Post(R"(/v1/([a-z_]+))", [this](const httplib::Request& req, httplib::Response& res) {
      allow_origin(req, res);
      const std::string endpoint = req.matches[1];
      service::Reply reply;
      if (service::served_over_http(endpoint)) {
        reply = service::handle(endpoint, req.body);
      } else {
        const nlohmann::json err = {
            {"schema", "v1"},
            {"error",
             {{"code", "NotFound"}, {"message", "no endpoint /v1/" + endpoint}, {"field", ""}}}};
        reply = {404, err.dump()};
      }
      res.status = reply.status;
      res.set_content(reply.body, "application/json");
    });
  }
};

Server::Server(Options options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  // httplib's default sets SO_REUSEPORT, which lets a second server share the port.
  impl_->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  impl_->routes();
}

Server::~Server() { stop(); }

int Server::bind() {
  if (impl_->port >= 0) return impl_->port;
  const std::string& host = impl_->options.host;
  int port = impl_->options.port;
  if (port == 0) {
    port = impl_->http.bind_to_any_port(host);
  } else if (!impl_->http.bind_to_port(host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorCode::ConfigInvalid,
                "cannot bind " + host + ":" + std::to_string(impl_->options.port), "bind");
  }
  impl_->port = port;
  return port;
}

void Server::run() {
  bind();
  impl_->http.listen_after_bind();
}

void Server::stop() {
  if (impl_) impl_->http.stop();
}

int Server::port() const { return impl_->port; }

}  // namespace lifeins::server
