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

#include "ases/config.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <thread>

#include "ases/jsonl.h"
#include "ases/text.h"

namespace ases {

namespace {

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw UsageError("bad value for " + key + ": '" + value + "'");
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& value) {
  const auto v = text::ToLowerAscii(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError("bad value for " + key + ": '" + value + "' (expected true or false)");
}

std::string FormatDouble(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::uint64_t Fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = {
      "task",          "strategy",       "beta",
      "gamma",         "scorer",         "ngram_order",
      "adapter_url",   "esm_url",        "asm_url",
      "timeout_ms",    "max_in_flight",  "retry_attempts",
      "split",         "seed",           "mode",
      "generator",     "max_iterations", "literal_second_check",
      "joiner",        "max_new_tokens", "jobs",
      "force",         "criterion",      "separator",
      "stop_phrase",   "stop_token",     "normal_target",
      "delimiters",    "input",          "output",
      "scores",        "records",        "gold",
      "keyword_map",   "normals",
  };
  return keys;
}

ConfigValues ParseConfigText(std::string_view content) {
  const std::set<std::string> known(ConfigKeys().begin(), ConfigKeys().end());
  ConfigValues values;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = text::TrimSpace(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(text::TrimSpace(view.substr(0, eq)));
    for (auto& c : key) {
      if (c == '-') c = '_';
    }
    std::string_view value = text::TrimSpace(view.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (const auto hash = value.find(" #"); hash != std::string_view::npos) {
      value = text::TrimSpace(value.substr(0, hash));
    }
    if (!known.count(key)) {
      throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    values[key] = std::string(value);
  }
  return values;
}

ConfigValues LoadConfigFile(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw UsageError("config file not found: " + path.string());
  }
  return ParseConfigText(jsonl::ReadText(path));
}

namespace {

RunConfig BuildUnchecked(const ConfigValues& values) {
  RunConfig c;
  auto get = [&](const char* key) -> const std::string* {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  const std::set<std::string> known(ConfigKeys().begin(), ConfigKeys().end());
  for (const auto& [k, v] : values) {
    if (!known.count(k)) throw UsageError("unknown config key '" + k + "'");
  }

  Task task = Task::kMWP;
  if (auto v = get("task")) {
    try {
      task = ParseTask(*v);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  c.profile = TaskProfile::ForTask(task);
  if (auto v = get("separator")) c.profile.separator = *v;
  if (auto v = get("stop_phrase")) c.profile.stop_phrase = *v;
  if (auto v = get("stop_token")) c.profile.stop_token = *v;
  if (auto v = get("normal_target")) c.profile.normal_target = *v;
  if (auto v = get("delimiters")) {
    c.profile.delimiters = ParseDelimiters(*v);
    if (c.profile.delimiters.empty()) throw UsageError("delimiters must not be empty");
  }
  if (c.profile.StopSign().empty()) throw UsageError("the active stop sign must not be empty");
  c.segmentation.delimiters = c.profile.delimiters;

  if (auto v = get("strategy")) c.segmentation.strategy = ParseStrategy(*v);
  if (auto v = get("beta")) c.segmentation.beta = ParseNumber<double>("beta", *v);
  if (!(c.segmentation.beta >= 0.0) || !std::isfinite(c.segmentation.beta)) {
    throw UsageError("beta must be a finite value >= 0");
  }
  if (auto v = get("gamma")) c.profile.gamma = ParseNumber<double>("gamma", *v);
  if (!(c.profile.gamma >= 0.0) || !std::isfinite(c.profile.gamma)) {
    throw UsageError("gamma must be a finite value >= 0");
  }

  if (auto v = get("scorer")) c.scorer = ParseScorerKind(*v);
  if (auto v = get("ngram_order")) c.ngram_order = ParseNumber<int>("ngram_order", *v);
  if (c.ngram_order < 1) throw UsageError("ngram_order must be >= 1");
  if (auto v = get("adapter_url")) c.adapter_url = *v;
  if (auto v = get("esm_url")) c.esm_url = *v;
  if (auto v = get("asm_url")) c.asm_url = *v;
  if (auto v = get("timeout_ms")) {
    c.timeout = std::chrono::milliseconds(ParseNumber<long long>("timeout_ms", *v));
  }
  if (auto v = get("max_in_flight")) {
    c.max_in_flight = ParseNumber<std::size_t>("max_in_flight", *v);
    if (c.max_in_flight < 1) throw UsageError("max_in_flight must be >= 1");
  }
  if (auto v = get("retry_attempts")) {
    c.retry_attempts = ParseNumber<int>("retry_attempts", *v);
    if (c.retry_attempts < 1) throw UsageError("retry_attempts must be >= 1");
  }

  if (auto v = get("split")) c.split = ParseSplitRatios(*v);
  if (auto v = get("seed"); v && !v->empty()) c.seed = ParseNumber<std::uint64_t>("seed", *v);

  if (auto v = get("mode")) c.mode = ParseMode(*v);
  if (auto v = get("generator")) {
    if (*v == "replay") {
      c.generator = GeneratorKind::kReplay;
    } else if (*v == "remote") {
      c.generator = GeneratorKind::kRemote;
    } else {
      throw UsageError("unknown generator '" + *v + "' (expected replay or remote)");
    }
  }
  if (auto v = get("max_iterations")) {
    c.max_iterations = ParseNumber<std::size_t>("max_iterations", *v);
    if (c.max_iterations < 1) throw UsageError("max_iterations must be >= 1");
  }
  if (auto v = get("literal_second_check")) {
    c.literal_second_check = ParseBool("literal_second_check", *v);
  }
  if (auto v = get("joiner")) c.joiner = *v;
  if (auto v = get("max_new_tokens")) c.max_new_tokens = ParseNumber<int>("max_new_tokens", *v);

  c.jobs = std::max(1u, std::thread::hardware_concurrency());
  if (auto v = get("jobs")) {
    c.jobs = ParseNumber<std::size_t>("jobs", *v);
    if (c.jobs < 1) throw UsageError("jobs must be >= 1");
  }
  if (auto v = get("force")) c.force = ParseBool("force", *v);
  if (auto v = get("criterion")) c.criterion = *v;

  const std::pair<const char*, std::filesystem::path*> paths[] = {
      {"input", &c.input},     {"output", &c.output},           {"scores", &c.scores},
      {"records", &c.records}, {"gold", &c.gold},               {"keyword_map", &c.keyword_map},
      {"normals", &c.normals},
  };
  std::map<std::string, std::string> seen;
  for (const auto& [key, field] : paths) {
    auto v = get(key);
    if (!v || v->empty()) continue;
    *field = *v;
    const auto normal = field->lexically_normal().string();
    if (auto it = seen.find(normal); it != seen.end()) {
      throw UsageError(std::string("paths must be distinct: ") + key + " and " + it->second +
                       " both name " + *v);
    }
    seen.emplace(normal, key);
  }
  return c;
}

}  // namespace

RunConfig BuildRunConfig(const ConfigValues& values) {
  try {
    return BuildUnchecked(values);
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

std::string RunConfig::Hash() const {
  std::ostringstream s;
  s << "task=" << TaskName(profile.task) << '\n'
    << "separator=" << profile.separator << '\n'
    << "stop_phrase=" << profile.stop_phrase << '\n'
    << "stop_token=" << profile.stop_token << '\n'
    << "normal_target=" << profile.normal_target << '\n'
    << "delimiters=" << FormatDelimiters(profile.delimiters) << '\n'
    << "strategy=" << StrategyName(segmentation.strategy) << '\n'
    << "beta=" << FormatDouble(segmentation.beta) << '\n'
    << "gamma=" << FormatDouble(profile.gamma) << '\n'
    << "scorer=" << ScorerKindName(scorer) << '\n'
    << "ngram_order=" << ngram_order << '\n'
    << "split=" << FormatDouble(split.train) << ',' << FormatDouble(split.validation) << ','
    << FormatDouble(split.test) << '\n'
    << "seed=" << (seed ? std::to_string(*seed) : std::string("none")) << '\n';
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(s.str())));
  return buf;
}

std::uint64_t RunConfig::RequireSeed(std::string_view what) const {
  if (!seed) throw UsageError(std::string(what) + " needs --seed");
  return *seed;
}

}  // namespace ases
