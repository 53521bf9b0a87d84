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

#ifndef TESTAUG_JSONL_H_
#define TESTAUG_JSONL_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace testaug {

using Json = nlohmann::ordered_json;

std::string ReadFile(const std::filesystem::path& path);

// Writes through a sibling temporary file and renames it into place so
// readers never observe a partial file.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& content);

struct JsonlLine {
  size_t line_number;  // 1-based
  Json value;
};

// Parses every non-blank line; throws kParseError naming the line.
std::vector<JsonlLine> ParseJsonl(const std::string& content,
                                  const std::string& source_name);
std::vector<JsonlLine> ReadJsonl(const std::filesystem::path& path);

std::string ToJsonlLine(const Json& value);

Json ReadJsonFile(const std::filesystem::path& path);

}  // namespace testaug

#endif  // TESTAUG_JSONL_H_
