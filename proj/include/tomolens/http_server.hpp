//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>

// Eigen must come before httplib: <resolv.h> defines a `_res` macro that
// collides with Eigen parameter names.
#include "tomolens/service.hpp"

#include "httplib.h"

namespace tomolens {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "*";
};

struct ListenAddress {
  std::string host;
  std::optional<int> port;
};

/// Parses "host", "host:port" or ":port".
inline ListenAddress parse_listen_address(std::string_view text) {
  ListenAddress out;
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    out.host = std::string(text);
    return out;
  }
  out.host = std::string(text.substr(0, colon));
  const std::string port_text(text.substr(colon + 1));
  char *end = nullptr;
  const long port = std::strtol(port_text.c_str(), &end, 10);
  if (port_text.empty() || *end != '\0' || port < 0 || port > 65535)
    throw InvalidArgument("invalid_address", "bad port in address \"" + std::string(text) + "\"");
  out.port = static_cast<int>(port);
  return out;
}

/// Resolution order: explicit flags, then TOMOLENS_ADDR, then defaults.
inline ServerConfig resolve_server_config(const std::optional<std::string> &addr_flag,
                                          const std::optional<int> &port_flag,
                                          const char *env_addr = std::getenv("TOMOLENS_ADDR")) {
  ServerConfig cfg;
  auto apply = [&](std::string_view text) {
    const ListenAddress a = parse_listen_address(text);
    if (!a.host.empty())
      cfg.host = a.host;
    if (a.port)
      cfg.port = *a.port;
  };
  if (env_addr && *env_addr)
    apply(env_addr);
  if (addr_flag)
    apply(*addr_flag);
  if (port_flag)
    cfg.port = *port_flag;
  return cfg;
}

using RequestLogger = std::function<void(const std::string &)>;

inline RequestLogger stderr_logger() {
  return [](const std::string &line) {
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << line << '\n';
  };
}

/// Registers the API routes and CORS handling on an httplib server.
inline void install_routes(httplib::Server &server, const ServerConfig &cfg, RequestLogger log) {
  const std::string origin = cfg.cors_origin;
  auto send = [origin, log](const httplib::Request &req, httplib::Response &res,
                            const HttpReply &reply, std::chrono::steady_clock::time_point t0) {
    res.status = reply.status;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_content(reply.body.dump(), "application/json");
    if (log) {
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      std::ostringstream line;
      line << "method=" << req.method << " path=" << req.path << " status=" << reply.status
           << " elapsed_ms=" << ms << " seed=" << reply.seed;
      if (reply.body.contains("error") && reply.body["error"].contains("correlation_id"))
        line << " correlation_id=" << reply.body["error"]["correlation_id"].get<std::string>();
      log(line.str());
    }
  };

  server.Get("/api/v1/health", [send](const httplib::Request &req, httplib::Response &res) {
    send(req, res, handle_health(), std::chrono::steady_clock::now());
  });
  server.Post("/api/v1/tomography/run", [send](const httplib::Request &req, httplib::Response &res) {
    const auto t0 = std::chrono::steady_clock::now();
    send(req, res, handle_run(req.body), t0);
  });
  server.Options(R"(/api/v1/.*)", [origin](const httplib::Request &, httplib::Response &res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Max-Age", "600");
  });
}

} // namespace tomolens
