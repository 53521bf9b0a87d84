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

#include "testaug/conllu.h"

#include <charconv>

#include "testaug/error.h"
#include "testaug/jsonl.h"
#include "testaug/text.h"

namespace testaug {

namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> cols;
  size_t start = 0;
  for (;;) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool ParseInt(std::string_view s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::vector<ConlluSentence> ParseConllu(std::string_view content,
                                        const std::string& source_name) {
  std::vector<ConlluSentence> out;
  std::vector<DepNode> nodes;
  std::vector<int> heads;
  std::string text;
  size_t sentence_line = 0;

  auto flush = [&] {
    if (nodes.empty()) {
      text.clear();
      return;
    }
    if (text.empty()) {
      std::vector<std::string> forms;
      for (const DepNode& n : nodes) forms.push_back(n.surface);
      text = Join(forms, " ");
    }
    try {
      out.push_back({text, MakeDepTree(std::move(nodes), std::move(heads))});
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedTree,
                  source_name + ":" + std::to_string(sentence_line) + ": " +
                      e.what());
    }
    nodes.clear();
    heads.clear();
    text.clear();
  };

  size_t line_number = 0;
  size_t pos = 0;
  while (pos <= content.size()) {
    size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (Trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      constexpr std::string_view kText = "# text =";
      if (line.substr(0, kText.size()) == kText) {
        text = std::string(Trim(line.substr(kText.size())));
      }
      continue;
    }
    std::vector<std::string_view> cols = SplitTabs(line);
    if (cols.size() != 10) {
      throw Error(ErrorCode::kParseError,
                  source_name + ":" + std::to_string(line_number) +
                      ": expected 10 columns, found " +
                      std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;
    int id = 0;
    int head = 0;
    if (!ParseInt(cols[0], id) || !ParseInt(cols[6], head)) {
      throw Error(ErrorCode::kParseError,
                  source_name + ":" + std::to_string(line_number) +
                      ": bad ID or HEAD");
    }
    if (nodes.empty()) sentence_line = line_number;
    nodes.push_back({id, std::string(cols[1]), std::string(cols[3])});
    heads.push_back(head);
  }
  flush();
  return out;
}

std::vector<ConlluSentence> ReadConllu(const std::filesystem::path& path) {
  return ParseConllu(ReadFile(path), path.string());
}

std::map<std::string, DepTree> ParsesByText(
    const std::vector<ConlluSentence>& sentences) {
  std::map<std::string, DepTree> out;
  for (const ConlluSentence& s : sentences) out.emplace(s.text, s.tree);
  return out;
}

std::map<std::string, std::string> PosTable(
    const std::vector<ConlluSentence>& sentences) {
  std::map<std::string, std::string> out;
  for (const ConlluSentence& s : sentences) {
    for (const DepNode& n : s.tree.nodes()) {
      out.emplace(AsciiLower(n.surface), n.upos);
    }
  }
  return out;
}

}  // namespace testaug
