/* Copyright 2026 The TestAug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "http_util.h"

#include "testaug/error.h"

namespace testaug {
namespace internal {

Endpoint ParseEndpoint(std::string_view url) {
  size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorCode::kConfigError,
                "endpoint must be an http(s) URL: " + std::string(url));
  }
  std::string_view scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::kConfigError,
                "unsupported scheme: " + std::string(scheme));
  }
  size_t path_begin = url.find('/', scheme_end + 3);
  Endpoint e;
  if (path_begin == std::string_view::npos) {
    e.origin = std::string(url);
    e.path = "/";
  } else {
    e.origin = std::string(url.substr(0, path_begin));
    e.path = std::string(url.substr(path_begin));
  }
  if (e.origin.size() <= scheme_end + 3) {
    throw Error(ErrorCode::kConfigError, "endpoint has no host");
  }
  return e;
}

std::unique_ptr<httplib::Client> MakeClient(const Endpoint& endpoint,
                                            std::chrono::milliseconds timeout) {
  auto client = std::make_unique<httplib::Client>(endpoint.origin);
  client->set_connection_timeout(timeout);
  client->set_read_timeout(timeout);
  client->set_write_timeout(timeout);
  return client;
}

void UseExclusivePort(httplib::Server& server) {
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
               reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
}

int BindAndServe(httplib::Server& server, const std::string& host, int port,
                 std::thread& thread) {
  UseExclusivePort(server);
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
    if (bound < 0) bound = 0;
  } else if (!server.bind_to_port(host, port)) {
    bound = 0;
  }
  if (bound == 0) {
    throw Error(ErrorCode::kPortInUse,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  thread = std::thread([&server] { server.listen_after_bind(); });
  server.wait_until_ready();
  return bound;
}

std::string JoinUrl(std::string_view base, std::string_view route) {
  std::string out(base);
  while (!out.empty() && out.back() == '/') out.pop_back();
  if (route.empty() || route.front() != '/') out.push_back('/');
  out += route;
  return out;
}

}  // namespace internal
}  // namespace testaug
