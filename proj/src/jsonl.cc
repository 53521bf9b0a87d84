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

#include "testaug/jsonl.h"

#include <fstream>
#include <sstream>

#include "testaug/error.h"
#include "testaug/text.h"

namespace testaug {

namespace fs = std::filesystem;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileAtomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "write failed " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "rename to " + path.string() + ": " + ec.message());
  }
}

std::vector<JsonlLine> ParseJsonl(const std::string& content,
                                  const std::string& source_name) {
  std::vector<JsonlLine> out;
  std::vector<std::string> lines = SplitLines(content);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    try {
      out.push_back({i + 1, Json::parse(lines[i])});
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParseError, source_name + ":" +
                                              std::to_string(i + 1) + ": " +
                                              e.what());
    }
  }
  return out;
}

std::vector<JsonlLine> ReadJsonl(const fs::path& path) {
  return ParseJsonl(ReadFile(path), path.string());
}

std::string ToJsonlLine(const Json& value) { return value.dump() + "\n"; }

Json ReadJsonFile(const fs::path& path) {
  try {
    return Json::parse(ReadFile(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

}  // namespace testaug
