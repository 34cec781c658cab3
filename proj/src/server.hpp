/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <memory>
#include <string>
#include <vector>

namespace lifeins::server {

struct Options {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Origins allowed besides http://localhost:* and http://127.0.0.1:*.
  std::vector<std::string> cors_origins;
};

// /v1 JSON service. Handlers share no mutable state.
class Server {
 public:
  explicit Server(Options options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the socket and returns the port; throws on failure.
  int bind();
  // Serves until stop(). Binds first if needed.
  void run();
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lifeins::server
