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

// Iterative generation loops.
//
// Dual path alternates an extractive and an abstractive generator; uni path
// calls a single generator. Each output is appended to the running input and
// the loop ends on the first step whose output contains the stop sign, after
// max_iterations rounds, or when a generator fails. The generator input at
// every step is start_input followed by all previous step texts, which is the
// same layout the training records use.

#ifndef ASES_ORCHESTRATOR_H_
#define ASES_ORCHESTRATOR_H_

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ases/common.h"
#include "ases/dataset.h"

namespace ases {

class Generator {
 public:
  virtual ~Generator() = default;
  // Returns only the continuation. Throws on failure.
  virtual std::string Generate(std::string_view input) = 0;
  virtual std::string Identity() const = 0;
  virtual bool ConcurrentSafe() const { return false; }
};

enum class StepRole { kES, kAS, kUni };
enum class Termination { kStopSign, kMaxIterations, kGeneratorError };
enum class GenerationMode { kUni, kDual };

std::string_view StepRoleName(StepRole role);
StepRole ParseStepRole(std::string_view name);
std::string_view TerminationName(Termination t);
Termination ParseTermination(std::string_view name);
std::string_view ModeName(GenerationMode mode);
GenerationMode ParseMode(std::string_view name);

struct GenerationStep {
  StepRole role = StepRole::kUni;
  std::string text;

  bool operator==(const GenerationStep&) const = default;
};

struct GenerationTranscript {
  std::string sample_id;
  GenerationMode mode = GenerationMode::kUni;
  std::vector<GenerationStep> steps;
  std::string final_output;  // concatenation of step texts
  Termination termination = Termination::kMaxIterations;
  std::string error;  // set when termination is kGeneratorError
  std::string joiner;

  bool operator==(const GenerationTranscript&) const = default;
};

struct LoopConfig {
  std::string stop_sign = "<STOP>";
  bool stop_case_insensitive = false;
  // One round is one ES + one AS call in dual mode, one call in uni mode.
  std::size_t max_iterations = 16;
  std::string start_input;
  // Second check looks at the extractive output again, so an abstractive
  // step never ends the loop.
  bool literal_second_check = false;
  // Extra attempts after an empty generation before failing.
  std::size_t empty_retries = 1;
  // Inserted between the running text and an output when neither side has
  // whitespace at the junction. Part of the recorded step text.
  std::string joiner;

  static LoopConfig ForProfile(const TaskProfile& profile, std::string_view query);
};

bool ContainsStopSign(std::string_view text, const LoopConfig& cfg);

GenerationTranscript RunDualPath(Generator& extractive, Generator& abstractive,
                                 const LoopConfig& cfg);
GenerationTranscript RunUniPath(Generator& unified, const LoopConfig& cfg);

struct GeneratorSet {
  Generator* unified = nullptr;
  Generator* extractive = nullptr;
  Generator* abstractive = nullptr;
};

// One transcript per sample, in input order. start_input is set per sample
// from the query and `profile.separator`; the rest of `cfg` is shared.
// Samples run concurrently (bounded by `jobs`) only when every generator in
// use is ConcurrentSafe.
std::vector<GenerationTranscript> BatchGenerate(std::span<const CoTSample> samples,
                                                GenerationMode mode,
                                                const GeneratorSet& generators,
                                                const LoopConfig& cfg,
                                                const TaskProfile& profile,
                                                std::size_t jobs = 1);

// Plays back a fixed list of outputs, then fails. Records every input.
class ScriptedGenerator : public Generator {
 public:
  ScriptedGenerator(std::string identity, std::vector<std::string> outputs)
      : identity_(std::move(identity)), outputs_(std::move(outputs)) {}

  std::string Generate(std::string_view input) override;
  std::string Identity() const override { return identity_; }

  const std::vector<std::string>& inputs() const { return inputs_; }

 private:
  std::string identity_;
  std::vector<std::string> outputs_;
  std::size_t next_ = 0;
  std::vector<std::string> inputs_;
};

class FunctionGenerator : public Generator {
 public:
  using Fn = std::function<std::string(std::string_view)>;
  FunctionGenerator(std::string identity, Fn fn, bool concurrent_safe = true)
      : identity_(std::move(identity)), fn_(std::move(fn)), concurrent_(concurrent_safe) {}

  std::string Generate(std::string_view input) override { return fn_(input); }
  std::string Identity() const override { return identity_; }
  bool ConcurrentSafe() const override { return concurrent_; }

 private:
  std::string identity_;
  Fn fn_;
  bool concurrent_;
};

// Answers each input with the training target recorded for exactly that
// input, i.e. a model that has memorised its training records. Asked for an
// extractive step where the gold continuation starts with an abstractive
// segment, it answers with an empty string.
class ReplayGenerator : public Generator {
 public:
  ReplayGenerator(std::string identity, std::span<const TrainingRecord> records,
                  std::span<const TrainingRecord> other_role_records = {});

  std::string Generate(std::string_view input) override;
  std::string Identity() const override { return identity_; }
  bool ConcurrentSafe() const override { return true; }

 private:
  std::string identity_;
  std::map<std::string, std::string, std::less<>> answers_;
  std::map<std::string, std::string, std::less<>> skips_;
};

std::string TranscriptToJsonLine(const GenerationTranscript& t,
                                 std::string_view config_hash = {});
GenerationTranscript TranscriptFromJsonLine(std::string_view line);

}  // namespace ases

#endif  // ASES_ORCHESTRATOR_H_
