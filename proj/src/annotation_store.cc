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

#include "testaug/annotation_store.h"

#include <cstdio>
#include <fstream>

#include "testaug/error.h"

namespace testaug {

namespace fs = std::filesystem;
namespace chr = std::chrono;

std::string FormatTimestamp(Timestamp ts) {
  const auto day = chr::floor<chr::days>(ts);
  const chr::year_month_day ymd{day};
  const chr::hh_mm_ss<chr::milliseconds> tod{ts - day};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()),
                static_cast<int>(tod.subseconds().count()));
  return buf;
}

Timestamp ParseTimestamp(const std::string& text) {
  int y, mo, d, h, mi, s;
  int consumed = 0;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h,
                  &mi, &s, &consumed) != 6) {
    throw Error(ErrorCode::kParseError, "bad timestamp '" + text + "'");
  }
  int millis = 0;
  size_t pos = static_cast<size_t>(consumed);
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int scale = 100;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      millis += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
  }
  if (pos != text.size() - 1 || text[pos] != 'Z') {
    throw Error(ErrorCode::kParseError,
                "timestamp must be UTC with 'Z' suffix: '" + text + "'");
  }
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(mo)},
                                chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
    throw Error(ErrorCode::kParseError, "timestamp out of range '" + text + "'");
  }
  return chr::sys_days{ymd} + chr::hours{h} + chr::minutes{mi} +
         chr::seconds{s} + chr::milliseconds{millis};
}

Timestamp Now() {
  return chr::time_point_cast<chr::milliseconds>(chr::system_clock::now());
}

Json AnnotationToJson(const AnnotationRecord& r) {
  Json j;
  j["case_id"] = r.case_id;
  j["annotator_id"] = r.annotator_id;
  j["valid"] = r.valid;
  j["ts"] = FormatTimestamp(r.timestamp);
  j["guideline_version"] = r.guideline_version;
  return j;
}

AnnotationRecord AnnotationFromJson(const Json& j, const std::string& where) {
  try {
    AnnotationRecord r;
    r.case_id = j.at("case_id").get<std::string>();
    r.annotator_id = j.at("annotator_id").get<std::string>();
    r.valid = j.at("valid").get<bool>();
    r.timestamp = ParseTimestamp(j.at("ts").get<std::string>());
    r.guideline_version = j.value("guideline_version", "");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, where + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, where + ": " + e.what());
  }
}

std::vector<AnnotationRecord> LoadAnnotations(const fs::path& path) {
  std::vector<AnnotationRecord> out;
  for (const JsonlLine& line : ReadJsonl(path)) {
    out.push_back(AnnotationFromJson(
        line.value, path.filename().string() + ":" +
                        std::to_string(line.line_number)));
  }
  return out;
}

void SaveAnnotations(const std::vector<AnnotationRecord>& records,
                     const fs::path& path) {
  std::string content;
  for (const auto& r : records) content += ToJsonlLine(AnnotationToJson(r));
  WriteFileAtomic(path, content);
}

std::vector<AnnotationRecord> LatestRecords(
    const std::vector<AnnotationRecord>& records) {
  std::map<std::pair<std::string, std::string>, const AnnotationRecord*> latest;
  for (const AnnotationRecord& r : records) {
    auto& slot = latest[{r.case_id, r.annotator_id}];
    if (slot == nullptr || r.timestamp >= slot->timestamp) slot = &r;
  }
  std::vector<AnnotationRecord> out;
  out.reserve(latest.size());
  for (const auto& [key, r] : latest) out.push_back(*r);
  return out;
}

AnnotationStore::AnnotationStore(fs::path path) : path_(std::move(path)) {
  if (fs::exists(*path_)) {
    for (AnnotationRecord& r : LoadAnnotations(*path_)) {
      auto key = std::make_pair(r.case_id, r.annotator_id);
      auto it = latest_.find(key);
      if (it == latest_.end() || r.timestamp >= it->second.timestamp) {
        latest_[key] = r;
      }
      records_.push_back(std::move(r));
    }
  }
}

bool AnnotationStore::Add(AnnotationRecord record) {
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(record.case_id, record.annotator_id);
  auto it = latest_.find(key);
  if (it != latest_.end() && it->second.valid == record.valid &&
      it->second.guideline_version == record.guideline_version) {
    return false;
  }
  if (path_) {
    if (path_->has_parent_path()) fs::create_directories(path_->parent_path());
    std::ofstream out(*path_, std::ios::app | std::ios::binary);
    if (!out) throw Error(ErrorCode::kIoError, "cannot append " + path_->string());
    out << ToJsonlLine(AnnotationToJson(record));
  }
  if (it == latest_.end() || record.timestamp >= it->second.timestamp) {
    latest_[key] = record;
  }
  records_.push_back(std::move(record));
  return true;
}

std::vector<AnnotationRecord> AnnotationStore::All() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_;
}

std::vector<AnnotationRecord> AnnotationStore::Latest() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<AnnotationRecord> out;
  out.reserve(latest_.size());
  for (const auto& [key, r] : latest_) out.push_back(r);
  return out;
}

}  // namespace testaug
