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

#ifndef TESTAUG_ANNOTATION_STORE_H_
#define TESTAUG_ANNOTATION_STORE_H_

#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "testaug/jsonl.h"

namespace testaug {

using Timestamp = std::chrono::time_point<std::chrono::system_clock,
                                          std::chrono::milliseconds>;

// ISO-8601 UTC with millisecond precision, e.g. 2022-05-01T12:00:00.000Z.
std::string FormatTimestamp(Timestamp ts);
// Throws kParseError.
Timestamp ParseTimestamp(const std::string& text);
Timestamp Now();

struct AnnotationRecord {
  std::string case_id;
  std::string annotator_id;
  bool valid = false;
  Timestamp timestamp{};
  std::string guideline_version;

  bool operator==(const AnnotationRecord&) const = default;
};

Json AnnotationToJson(const AnnotationRecord& record);
AnnotationRecord AnnotationFromJson(const Json& json, const std::string& where);

std::vector<AnnotationRecord> LoadAnnotations(const std::filesystem::path& path);
void SaveAnnotations(const std::vector<AnnotationRecord>& records,
                     const std::filesystem::path& path);

// Reduces a record stream to the authoritative record per
// (case_id, annotator_id): the latest timestamp wins, ties go to the record
// appearing later. Output is ordered by (case_id, annotator_id).
std::vector<AnnotationRecord> LatestRecords(
    const std::vector<AnnotationRecord>& records);

// Thread-safe append-only label log, optionally mirrored to a JSONL file.
class AnnotationStore {
 public:
  AnnotationStore() = default;
  // Loads existing records from `path` (if present) and appends new ones.
  explicit AnnotationStore(std::filesystem::path path);

  // Returns false (and writes nothing) when the record repeats the current
  // authoritative judgment for its (case, annotator).
  bool Add(AnnotationRecord record);

  std::vector<AnnotationRecord> All() const;
  std::vector<AnnotationRecord> Latest() const;

 private:
  mutable std::mutex mu_;
  std::optional<std::filesystem::path> path_;
  std::vector<AnnotationRecord> records_;
  std::map<std::pair<std::string, std::string>, AnnotationRecord> latest_;
};

}  // namespace testaug

#endif  // TESTAUG_ANNOTATION_STORE_H_
