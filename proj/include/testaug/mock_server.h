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

#ifndef TESTAUG_MOCK_SERVER_H_
#define TESTAUG_MOCK_SERVER_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "testaug/jsonl.h"

namespace testaug {

// Offline stand-in for a completions endpoint.
//
// Fixture format: an object keyed by test id. Each value is either an array
// of canned completion strings or {"description": ..., "completions": [...]}.
// A request is routed to the entry whose description equals the first line
// of the prompt; otherwise to the "*" entry; otherwise, when the fixture has
// exactly one entry, to that entry. The choice within an entry is a hash of
// the prompt, so replies are deterministic and independent of request order.
// Any POST path is accepted and the model name is ignored.
class MockLlmServer {
 public:
  // Throws kFixtureParseError.
  explicit MockLlmServer(const Json& fixture);
  static MockLlmServer FromFile(const std::filesystem::path& path);

  MockLlmServer(MockLlmServer&&) noexcept;
  MockLlmServer& operator=(MockLlmServer&&) noexcept;
  ~MockLlmServer();

  // Binds and serves on a background thread. Port 0 picks a free port.
  // Returns the bound port. Throws kPortInUse.
  int Start(const std::string& host = "127.0.0.1", int port = 0);
  void Stop();
  // Blocks the caller until Stop() is called from elsewhere.
  void Wait();
  int port() const;

  // What the server answers for `prompt`, choice `index`.
  std::string Reply(const std::string& prompt, size_t index) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace testaug

#endif  // TESTAUG_MOCK_SERVER_H_
