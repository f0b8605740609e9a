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

#include "ases/text.h"

#include <string>

#include "ases/common.h"

namespace ases::text {

std::vector<CodePoint> DecodeUtf8(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto lead = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
      len = 1;
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      len = 2;
      cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      len = 3;
      cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      len = 4;
      cp = lead & 0x07;
    } else {
      throw DataError("invalid UTF-8 lead byte at offset " + std::to_string(i));
    }
    if (i + len > s.size()) {
      throw DataError("truncated UTF-8 sequence at offset " + std::to_string(i));
    }
    for (std::size_t k = 1; k < len; ++k) {
      const auto cont = static_cast<unsigned char>(s[i + k]);
      if ((cont & 0xC0) != 0x80) {
        throw DataError("invalid UTF-8 continuation at offset " +
                        std::to_string(i + k));
      }
      cp = (cp << 6) | (cont & 0x3F);
    }
    static constexpr char32_t kMinForLength[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLength[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      throw DataError("invalid UTF-8 code point at offset " + std::to_string(i));
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

std::size_t CodePointCount(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string EncodeUtf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

bool IsSpace(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\v' || cp == U'\f' || cp == 0x00A0 || cp == 0x3000;
}

bool IsPunct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  // General punctuation, CJK symbols and punctuation, fullwidth forms.
  return (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x3000 && cp <= 0x303F) ||
         (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
         (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65);
}

bool IsDigit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool IsCjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
         (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x20000 && cp <= 0x2FA1F);
}

std::vector<Token> Tokenize(std::string_view s, TokenizerKind kind) {
  const auto cps = DecodeUtf8(s);
  std::vector<Token> tokens;
  auto emit = [&](std::size_t b, std::size_t e) {
    tokens.push_back({std::string(s.substr(b, e - b)), b, e});
  };

  if (kind == TokenizerKind::kChar) {
    for (const auto& cp : cps) {
      if (!IsSpace(cp.value)) emit(cp.offset, cp.offset + cp.length);
    }
    return tokens;
  }

  std::size_t word_begin = 0;
  bool in_word = false;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const auto& cp = cps[i];
    const bool numeric_sep =
        (cp.value == U'.' || cp.value == U',') && i > 0 &&
        i + 1 < cps.size() && IsDigit(cps[i - 1].value) &&
        IsDigit(cps[i + 1].value);
    const bool breaks = IsSpace(cp.value) ||
                        (IsPunct(cp.value) && !numeric_sep) ||
                        IsCjk(cp.value);
    if (!breaks) {
      if (!in_word) {
        word_begin = cp.offset;
        in_word = true;
      }
      continue;
    }
    if (in_word) {
      emit(word_begin, cp.offset);
      in_word = false;
    }
    if (!IsSpace(cp.value)) emit(cp.offset, cp.offset + cp.length);
  }
  if (in_word) emit(word_begin, s.size());
  return tokens;
}

std::vector<std::string> TokenStrings(std::string_view s, TokenizerKind kind) {
  std::vector<std::string> out;
  for (auto& t : Tokenize(s, kind)) out.push_back(std::move(t.text));
  return out;
}

std::string ToLowerAscii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view TrimSpace(std::string_view s) {
  const auto cps = DecodeUtf8(s);
  std::size_t b = 0;
  std::size_t e = cps.size();
  while (b < e && IsSpace(cps[b].value)) ++b;
  while (e > b && IsSpace(cps[e - 1].value)) --e;
  if (b == e) return {};
  return s.substr(cps[b].offset,
                  cps[e - 1].offset + cps[e - 1].length - cps[b].offset);
}

std::size_t FindNoCase(std::string_view haystack, std::string_view needle,
                       std::size_t from) {
  const std::string h = ToLowerAscii(haystack);
  const std::string n = ToLowerAscii(needle);
  return h.find(n, from);
}

std::size_t RFindNoCase(std::string_view haystack, std::string_view needle) {
  const std::string h = ToLowerAscii(haystack);
  const std::string n = ToLowerAscii(needle);
  return h.rfind(n);
}

}  // namespace ases::text
