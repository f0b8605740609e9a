// Copyright (c) 2026 ASES Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASES_TEXT_H_
#define ASES_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ases::text {

struct CodePoint {
  char32_t value = 0;
  std::size_t offset = 0;  // byte offset into the source string
  std::size_t length = 0;  // encoded length in bytes
};

// Throws DataError on malformed UTF-8.
std::vector<CodePoint> DecodeUtf8(std::string_view s);
std::size_t CodePointCount(std::string_view s);
std::string EncodeUtf8(char32_t cp);

bool IsSpace(char32_t cp);
bool IsPunct(char32_t cp);
bool IsDigit(char32_t cp);
bool IsCjk(char32_t cp);

// kWord: whitespace separated, punctuation split off, CJK ideographs one per
// token, "3.5" and "1,000" kept whole. kChar: every non-space code point.
enum class TokenizerKind { kWord, kChar };

struct Token {
  std::string text;
  std::size_t begin = 0;  // byte offsets, half-open
  std::size_t end = 0;
};

std::vector<Token> Tokenize(std::string_view s, TokenizerKind kind);
std::vector<std::string> TokenStrings(std::string_view s, TokenizerKind kind);

std::string ToLowerAscii(std::string_view s);
std::string_view TrimSpace(std::string_view s);

// ASCII case-insensitive search; npos when absent.
std::size_t FindNoCase(std::string_view haystack, std::string_view needle,
                       std::size_t from = 0);
std::size_t RFindNoCase(std::string_view haystack, std::string_view needle);

}  // namespace ases::text

#endif  // ASES_TEXT_H_
