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

#include "testaug/mock_server.h"

#include <map>
#include <thread>

#include "http_util.h"
#include "testaug/error.h"
#include "testaug/hash.h"

namespace testaug {

namespace {

struct FixtureEntry {
  std::string description;
  std::vector<std::string> completions;
};

std::vector<std::string> CompletionList(const Json& value,
                                        const std::string& key) {
  if (!value.is_array() || value.empty()) {
    throw Error(ErrorCode::kFixtureParseError,
                "entry '" + key + "' needs a non-empty completion list");
  }
  std::vector<std::string> out;
  for (const Json& item : value) {
    if (!item.is_string()) {
      throw Error(ErrorCode::kFixtureParseError,
                  "entry '" + key + "' has a non-string completion");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

struct MockLlmServer::Impl {
  std::map<std::string, FixtureEntry> entries;
  httplib::Server server;
  std::thread thread;
  int port = 0;

  const FixtureEntry* Route(const std::string& prompt) const {
    std::string first_line = prompt.substr(0, prompt.find('\n'));
    for (const auto& [key, entry] : entries) {
      if (!entry.description.empty() && entry.description == first_line) {
        return &entry;
      }
    }
    if (auto it = entries.find("*"); it != entries.end()) return &it->second;
    if (entries.size() == 1) return &entries.begin()->second;
    return nullptr;
  }
};

MockLlmServer::MockLlmServer(const Json& fixture)
    : impl_(std::make_unique<Impl>()) {
  if (!fixture.is_object() || fixture.empty()) {
    throw Error(ErrorCode::kFixtureParseError,
                "fixture must be a non-empty object keyed by test id");
  }
  for (auto it = fixture.begin(); it != fixture.end(); ++it) {
    FixtureEntry entry;
    if (it->is_object()) {
      if (it->contains("description")) {
        if (!(*it)["description"].is_string()) {
          throw Error(ErrorCode::kFixtureParseError,
                      "entry '" + it.key() + "' description must be a string");
        }
        entry.description = (*it)["description"].get<std::string>();
      }
      entry.completions = CompletionList(it->value("completions", Json()),
                                         it.key());
    } else {
      entry.completions = CompletionList(it.value(), it.key());
    }
    impl_->entries.emplace(it.key(), std::move(entry));
  }

  impl_->server.Post(".*", [impl = impl_.get()](const httplib::Request& req,
                                                httplib::Response& res) {
    Json request;
    try {
      request = Json::parse(req.body);
    } catch (const nlohmann::json::parse_error&) {
      res.status = 400;
      res.set_content(R"({"error":"malformed JSON"})", "application/json");
      return;
    }
    if (!request.is_object() || !request.contains("prompt") ||
        !request["prompt"].is_string()) {
      res.status = 400;
      res.set_content(R"({"error":"prompt must be a string"})",
                      "application/json");
      return;
    }
    const std::string prompt = request["prompt"].get<std::string>();
    const FixtureEntry* entry = impl->Route(prompt);
    if (entry == nullptr) {
      res.status = 404;
      res.set_content(R"({"error":"no fixture entry for prompt"})",
                      "application/json");
      return;
    }
    int n = 1;
    if (request.contains("n") && request["n"].is_number_integer()) {
      n = std::max(1, request["n"].get<int>());
    }
    const uint64_t h = Fnv1a64(prompt);
    Json choices = Json::array();
    for (int j = 0; j < n; ++j) {
      const std::string& text =
          entry->completions[(h + j) % entry->completions.size()];
      choices.push_back({{"text", text}, {"index", j}});
    }
    Json reply;
    reply["object"] = "text_completion";
    reply["model"] = request.value("model", "");
    reply["choices"] = std::move(choices);
    res.set_content(reply.dump(), "application/json");
  });
}

MockLlmServer MockLlmServer::FromFile(const std::filesystem::path& path) {
  Json fixture;
  try {
    fixture = Json::parse(ReadFile(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kFixtureParseError, path.string() + ": " + e.what());
  }
  return MockLlmServer(fixture);
}

MockLlmServer::MockLlmServer(MockLlmServer&&) noexcept = default;
MockLlmServer& MockLlmServer::operator=(MockLlmServer&&) noexcept = default;

MockLlmServer::~MockLlmServer() {
  if (impl_) Stop();
}

int MockLlmServer::Start(const std::string& host, int port) {
  impl_->port = internal::BindAndServe(impl_->server, host, port, impl_->thread);
  return impl_->port;
}

void MockLlmServer::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void MockLlmServer::Wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

int MockLlmServer::port() const { return impl_->port; }

std::string MockLlmServer::Reply(const std::string& prompt,
                                 size_t index) const {
  const FixtureEntry* entry = impl_->Route(prompt);
  if (entry == nullptr) return "";
  return entry->completions[(Fnv1a64(prompt) + index) %
                            entry->completions.size()];
}

}  // namespace testaug
