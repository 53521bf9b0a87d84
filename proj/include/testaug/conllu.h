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

#ifndef TESTAUG_CONLLU_H_
#define TESTAUG_CONLLU_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "testaug/metrics.h"

namespace testaug {

struct ConlluSentence {
  // "# text = ..." when present, else the FORMs joined by single spaces.
  std::string text;
  DepTree tree;
};

// Reads the ID, FORM, UPOS and HEAD columns of a CoNLL-U document.
// Multiword ranges ("3-4") and empty nodes ("5.1") are skipped.
// Errors: kParseError (line number in the message), kMalformedTree.
std::vector<ConlluSentence> ParseConllu(std::string_view content,
                                        const std::string& source_name);
std::vector<ConlluSentence> ReadConllu(const std::filesystem::path& path);

// Sentence text -> tree; the first parse of a repeated text wins.
std::map<std::string, DepTree> ParsesByText(
    const std::vector<ConlluSentence>& sentences);

// Lowercased FORM -> UPOS, usable as an expansion POS override.
std::map<std::string, std::string> PosTable(
    const std::vector<ConlluSentence>& sentences);

}  // namespace testaug

#endif  // TESTAUG_CONLLU_H_
