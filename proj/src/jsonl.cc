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

#include "ases/jsonl.h"

#include <fstream>
#include <sstream>

#include "ases/common.h"

namespace ases::jsonl {

std::string Dump(const Json& j) { return j.dump(); }

Json Parse(std::string_view line) {
  try {
    return Json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

void ForEachLine(const std::filesystem::path& path,
                 const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      fn(Parse(line), line_no);
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void WriteLines(const std::filesystem::path& path, std::span<const std::string> lines) {
  std::string content;
  for (const auto& l : lines) {
    content += l;
    content += '\n';
  }
  WriteText(path, content);
}

void WriteText(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

const Json& Field(const Json& j, std::string_view field) {
  if (!j.is_object()) throw DataError("expected a JSON object");
  auto it = j.find(std::string(field));
  if (it == j.end()) throw DataError("missing field '" + std::string(field) + "'");
  return *it;
}

[[noreturn]] void TypeError(std::string_view field, std::string_view type) {
  throw DataError("field '" + std::string(field) + "' must be " + std::string(type));
}

}  // namespace

std::string GetString(const Json& j, std::string_view field) {
  const Json& v = Field(j, field);
  if (!v.is_string()) TypeError(field, "a string");
  return v.get<std::string>();
}

double GetNumber(const Json& j, std::string_view field) {
  const Json& v = Field(j, field);
  if (!v.is_number()) TypeError(field, "a number");
  return v.get<double>();
}

long long GetInt(const Json& j, std::string_view field) {
  const Json& v = Field(j, field);
  if (!v.is_number_integer()) TypeError(field, "an integer");
  return v.get<long long>();
}

bool GetBool(const Json& j, std::string_view field) {
  const Json& v = Field(j, field);
  if (!v.is_boolean()) TypeError(field, "a boolean");
  return v.get<bool>();
}

const Json& GetArray(const Json& j, std::string_view field) {
  const Json& v = Field(j, field);
  if (!v.is_array()) TypeError(field, "an array");
  return v;
}

const Json& GetObject(const Json& j, std::string_view field) {
  const Json& v = Field(j, field);
  if (!v.is_object()) TypeError(field, "an object");
  return v;
}

std::string GetStringOr(const Json& j, std::string_view field, std::string fallback) {
  if (!j.is_object()) throw DataError("expected a JSON object");
  auto it = j.find(std::string(field));
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_string()) TypeError(field, "a string");
  return it->get<std::string>();
}

}  // namespace ases::jsonl
