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

#ifndef TESTAUG_TEXT_H_
#define TESTAUG_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace testaug {

// Byte-level classification. Bytes >= 0x80 belong to UTF-8 sequences and are
// treated as word characters so non-ASCII letters never split a token.
bool IsWordByte(unsigned char c);
bool IsAsciiPunct(unsigned char c);

std::string_view Trim(std::string_view s);
std::string AsciiLower(std::string_view s);
std::string CollapseWhitespace(std::string_view s);

// Dedup key: lowercase, internal whitespace collapsed, terminal punctuation
// stripped.
std::string NormalizeForDedup(std::string_view s);
std::string NormalizeTextsForDedup(const std::vector<std::string>& texts);

std::vector<std::string> SplitLines(std::string_view s);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// Lowercased tokens: whitespace-delimited, each ASCII punctuation character a
// token of its own.
std::vector<std::string> Tokenize(std::string_view s);

inline constexpr std::string_view kTokenizerVersion = "lower-punct-split-v1";

}  // namespace testaug

#endif  // TESTAUG_TEXT_H_
