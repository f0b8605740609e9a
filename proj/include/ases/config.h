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

// Run configuration shared by every pipeline command.
//
// A config file is flat "key = value" text; '#' starts a comment and a value
// may be wrapped in double quotes to keep surrounding spaces. Keys are the
// long flag names with '-' replaced by '_', so "--max-iterations 8" and
// "max_iterations = 8" mean the same thing. Flags override the file.

#ifndef ASES_CONFIG_H_
#define ASES_CONFIG_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ases/dataset.h"
#include "ases/orchestrator.h"
#include "ases/scoring.h"
#include "ases/segmentation.h"

namespace ases {

using ConfigValues = std::map<std::string, std::string>;

enum class GeneratorKind { kReplay, kRemote };

struct RunConfig {
  TaskProfile profile;
  SegmentationConfig segmentation;

  ScorerKind scorer = ScorerKind::kNgramReference;
  int ngram_order = 3;
  std::string adapter_url;
  std::string esm_url;
  std::string asm_url;
  std::chrono::milliseconds timeout{60000};
  std::size_t max_in_flight = 4;
  int retry_attempts = 3;

  SplitRatios split;
  std::optional<std::uint64_t> seed;

  GenerationMode mode = GenerationMode::kDual;
  GeneratorKind generator = GeneratorKind::kReplay;
  std::size_t max_iterations = 16;
  bool literal_second_check = false;
  std::string joiner;
  int max_new_tokens = 128;

  std::size_t jobs = 1;
  bool force = false;
  std::string criterion = "best_train";

  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path scores;
  std::filesystem::path records;
  std::filesystem::path gold;
  std::filesystem::path keyword_map;
  std::filesystem::path normals;

  // Hex FNV-1a 64 over the fields that shape data artifacts (task profile,
  // segmentation, gamma, scorer, split, seed). Paths, mode, jobs and URLs
  // are excluded so every stage of one run shares the hash.
  std::string Hash() const;

  std::uint64_t RequireSeed(std::string_view what) const;
};

// Every accepted key.
const std::vector<std::string>& ConfigKeys();

ConfigValues ParseConfigText(std::string_view content);
ConfigValues LoadConfigFile(const std::filesystem::path& path);

// Throws UsageError naming the key on an unknown key or bad value, and when
// two path keys name the same file.
RunConfig BuildRunConfig(const ConfigValues& values);

std::uint64_t Fnv1a64(std::string_view data);

}  // namespace ases

#endif  // ASES_CONFIG_H_
