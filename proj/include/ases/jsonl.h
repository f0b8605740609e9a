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

#ifndef ASES_JSONL_H_
#define ASES_JSONL_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ases::jsonl {

using Json = nlohmann::ordered_json;

// Compact single-line dump, UTF-8 kept as is.
std::string Dump(const Json& j);
Json Parse(std::string_view line);

// Invokes `fn` for each non-blank line with its 1-based line number. Any
// parse failure, or a DataError thrown by `fn`, is rethrown as a DataError
// prefixed with "path:line: ".
void ForEachLine(const std::filesystem::path& path,
                 const std::function<void(const Json&, std::size_t)>& fn);

void WriteLines(const std::filesystem::path& path, std::span<const std::string> lines);
void WriteText(const std::filesystem::path& path, std::string_view content);
std::string ReadText(const std::filesystem::path& path);

// Field accessors that name the offending field on mismatch.
std::string GetString(const Json& j, std::string_view field);
double GetNumber(const Json& j, std::string_view field);
long long GetInt(const Json& j, std::string_view field);
bool GetBool(const Json& j, std::string_view field);
const Json& GetArray(const Json& j, std::string_view field);
const Json& GetObject(const Json& j, std::string_view field);
std::string GetStringOr(const Json& j, std::string_view field, std::string fallback);

}  // namespace ases::jsonl

#endif  // ASES_JSONL_H_
