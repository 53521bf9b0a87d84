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

#include <cstdlib>
#include <thread>

#include "http_util.h"
#include "testaug/error.h"
#include "testaug/generation.h"

namespace testaug {

HttpCompletionClient::HttpCompletionClient(GenerationConfig config)
    : config_(std::move(config)) {
  config_.Validate();
  internal::ParseEndpoint(config_.endpoint_url);
}

std::vector<std::string> HttpCompletionClient::Complete(
    const CompletionRequest& request) {
  const internal::Endpoint endpoint =
      internal::ParseEndpoint(config_.endpoint_url);
  httplib::Headers headers;
  if (const char* key = std::getenv(kApiKeyEnv); key != nullptr && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string body = CompletionRequestToJson(request).dump();

  std::string last_failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(config_.backoff_initial * (1 << (attempt - 1)));
    }
    auto client = internal::MakeClient(endpoint, config_.request_timeout);
    httplib::Result res =
        client->Post(endpoint.path, headers, body, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kEndpointError,
                  "HTTP " + std::to_string(res->status) + " from " +
                      endpoint.origin + endpoint.path);
    }
    try {
      Json reply = Json::parse(res->body);
      std::vector<std::string> texts;
      for (const Json& choice : reply.at("choices")) {
        texts.push_back(choice.at("text").get<std::string>());
      }
      return texts;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kEndpointError,
                  std::string("malformed completion response: ") + e.what());
    }
  }
  throw Error(ErrorCode::kEndpointError,
              "giving up after " + std::to_string(config_.max_retries + 1) +
                  " attempt(s): " + last_failure);
}

}  // namespace testaug
