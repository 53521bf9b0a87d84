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

#ifndef TESTAUG_SRC_HTTP_UTIL_H_
#define TESTAUG_SRC_HTTP_UTIL_H_

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <thread>

#include "httplib.h"

namespace testaug {
namespace internal {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // begins with '/'
};

// Splits an http(s) URL. Throws kConfigError for anything else.
Endpoint ParseEndpoint(std::string_view url);

std::unique_ptr<httplib::Client> MakeClient(const Endpoint& endpoint,
                                            std::chrono::milliseconds timeout);

// Plain SO_REUSEADDR so a second bind on a live port fails instead of
// silently sharing it (httplib defaults to SO_REUSEPORT).
void UseExclusivePort(httplib::Server& server);

// Binds `server` to host:port (0 = any free port) and serves on a
// background thread. Returns the bound port; throws kPortInUse.
int BindAndServe(httplib::Server& server, const std::string& host, int port,
                 std::thread& thread);

// Joins a base URL and a route without doubling slashes.
std::string JoinUrl(std::string_view base, std::string_view route);

}  // namespace internal
}  // namespace testaug

#endif  // TESTAUG_SRC_HTTP_UTIL_H_
