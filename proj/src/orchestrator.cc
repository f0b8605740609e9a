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

#include "ases/orchestrator.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "ases/jsonl.h"
#include "ases/text.h"

namespace ases {

std::string_view StepRoleName(StepRole role) {
  switch (role) {
    case StepRole::kES: return "ES";
    case StepRole::kAS: return "AS";
    case StepRole::kUni: return "UNI";
  }
  return "UNI";
}

StepRole ParseStepRole(std::string_view name) {
  if (name == "ES") return StepRole::kES;
  if (name == "AS") return StepRole::kAS;
  if (name == "UNI") return StepRole::kUni;
  throw DataError("unknown step role '" + std::string(name) + "'");
}

std::string_view TerminationName(Termination t) {
  switch (t) {
    case Termination::kStopSign: return "stop_sign";
    case Termination::kMaxIterations: return "max_iterations";
    case Termination::kGeneratorError: return "generator_error";
  }
  return "generator_error";
}

Termination ParseTermination(std::string_view name) {
  if (name == "stop_sign") return Termination::kStopSign;
  if (name == "max_iterations") return Termination::kMaxIterations;
  if (name == "generator_error") return Termination::kGeneratorError;
  throw DataError("unknown termination '" + std::string(name) + "'");
}

std::string_view ModeName(GenerationMode mode) {
  return mode == GenerationMode::kUni ? "uni" : "dual";
}

GenerationMode ParseMode(std::string_view name) {
  if (name == "uni") return GenerationMode::kUni;
  if (name == "dual") return GenerationMode::kDual;
  throw UsageError("unknown generation mode '" + std::string(name) + "' (expected uni or dual)");
}

LoopConfig LoopConfig::ForProfile(const TaskProfile& profile, std::string_view query) {
  LoopConfig cfg;
  cfg.stop_sign = profile.StopSign();
  cfg.stop_case_insensitive = profile.StopSignCaseInsensitive();
  cfg.start_input = std::string(query) + profile.separator;
  return cfg;
}

bool ContainsStopSign(std::string_view text, const LoopConfig& cfg) {
  if (cfg.stop_sign.empty()) return false;
  if (cfg.stop_case_insensitive) return text::FindNoCase(text, cfg.stop_sign) != std::string::npos;
  return text.find(cfg.stop_sign) != std::string_view::npos;
}

namespace {

class EmptyGeneration : public Error {
 public:
  using Error::Error;
};

bool EndsWithSpace(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = s.size() - 1;
  while (i > 0 && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) --i;
  const auto cps = text::DecodeUtf8(s.substr(i));
  return !cps.empty() && text::IsSpace(cps.back().value);
}

bool StartsWithSpace(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 1;
  while (i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) ++i;
  const auto cps = text::DecodeUtf8(s.substr(0, i));
  return !cps.empty() && text::IsSpace(cps.front().value);
}

// State of one generation loop: running input plus the transcript so far.
class Loop {
 public:
  Loop(const LoopConfig& cfg, GenerationMode mode) : cfg_(cfg), input_(cfg.start_input) {
    if (cfg.max_iterations == 0) throw UsageError("max_iterations must be >= 1");
    transcript_.mode = mode;
    transcript_.joiner = cfg.joiner;
  }

  // Runs one generator call. Returns true when the loop must stop.
  bool Step(Generator& gen, StepRole role, bool allow_empty, bool check_stop) {
    std::string out;
    try {
      out = Call(gen, allow_empty);
    } catch (const std::exception& e) {
      transcript_.termination = Termination::kGeneratorError;
      transcript_.error = e.what();
      return true;
    }
    if (!cfg_.joiner.empty() && !transcript_.steps.empty() && !out.empty() &&
        !EndsWithSpace(input_) && !StartsWithSpace(out)) {
      out = cfg_.joiner + out;
    }
    input_ += out;
    transcript_.final_output += out;
    transcript_.steps.push_back({role, out});
    if (check_stop && ContainsStopSign(out, cfg_)) {
      transcript_.termination = Termination::kStopSign;
      return true;
    }
    return false;
  }

  GenerationTranscript Finish(Termination if_running) {
    if (!done_) transcript_.termination = if_running;
    return std::move(transcript_);
  }

  void MarkDone() { done_ = true; }

 private:
  std::string Call(Generator& gen, bool allow_empty) {
    for (std::size_t attempt = 0;; ++attempt) {
      std::string out = gen.Generate(input_);
      if (!out.empty() || allow_empty) return out;
      if (attempt >= cfg_.empty_retries) throw EmptyGeneration("empty generation");
    }
  }

  const LoopConfig& cfg_;
  std::string input_;
  GenerationTranscript transcript_;
  bool done_ = false;
};

}  // namespace

GenerationTranscript RunDualPath(Generator& extractive, Generator& abstractive,
                                 const LoopConfig& cfg) {
  Loop loop(cfg, GenerationMode::kDual);
  for (std::size_t round = 0; round < cfg.max_iterations; ++round) {
    // An empty first extractive step stands for a chain that opens with an
    // abstractive segment.
    if (loop.Step(extractive, StepRole::kES, /*allow_empty=*/round == 0, true)) {
      loop.MarkDone();
      break;
    }
    // In literal mode the check after the abstractive call re-tests the
    // extractive output, which is known to be stop-free at this point.
    if (loop.Step(abstractive, StepRole::kAS, false, !cfg.literal_second_check)) {
      loop.MarkDone();
      break;
    }
  }
  return loop.Finish(Termination::kMaxIterations);
}

GenerationTranscript RunUniPath(Generator& unified, const LoopConfig& cfg) {
  Loop loop(cfg, GenerationMode::kUni);
  for (std::size_t round = 0; round < cfg.max_iterations; ++round) {
    if (loop.Step(unified, StepRole::kUni, false, true)) {
      loop.MarkDone();
      break;
    }
  }
  return loop.Finish(Termination::kMaxIterations);
}

std::vector<GenerationTranscript> BatchGenerate(std::span<const CoTSample> samples,
                                                GenerationMode mode,
                                                const GeneratorSet& generators,
                                                const LoopConfig& cfg,
                                                const TaskProfile& profile,
                                                std::size_t jobs) {
  std::vector<Generator*> used;
  if (mode == GenerationMode::kUni) {
    if (!generators.unified) throw UsageError("uni mode needs a unified generator");
    used = {generators.unified};
  } else {
    if (!generators.extractive || !generators.abstractive) {
      throw UsageError("dual mode needs an extractive and an abstractive generator");
    }
    used = {generators.extractive, generators.abstractive};
  }
  const bool concurrent = std::all_of(used.begin(), used.end(),
                                      [](Generator* g) { return g->ConcurrentSafe(); });

  std::vector<GenerationTranscript> out(samples.size());
  auto run_one = [&](std::size_t i) {
    LoopConfig local = cfg;
    local.start_input = samples[i].query + profile.separator;
    GenerationTranscript t;
    try {
      t = mode == GenerationMode::kUni
              ? RunUniPath(*generators.unified, local)
              : RunDualPath(*generators.extractive, *generators.abstractive, local);
    } catch (const std::exception& e) {
      t.mode = mode;
      t.termination = Termination::kGeneratorError;
      t.error = e.what();
    }
    t.sample_id = samples[i].id;
    out[i] = std::move(t);
  };

  const std::size_t workers =
      concurrent ? std::max<std::size_t>(1, std::min(jobs, samples.size())) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < samples.size(); ++i) run_one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < samples.size(); i = next++) run_one(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

std::string ScriptedGenerator::Generate(std::string_view input) {
  inputs_.emplace_back(input);
  if (next_ >= outputs_.size()) throw Error(identity_ + ": script exhausted");
  return outputs_[next_++];
}

ReplayGenerator::ReplayGenerator(std::string identity,
                                 std::span<const TrainingRecord> records,
                                 std::span<const TrainingRecord> other_role_records)
    : identity_(std::move(identity)) {
  for (const auto& r : records) answers_.emplace(r.input, r.target);
  for (const auto& r : other_role_records) {
    if (r.step == 0) skips_.emplace(r.input, std::string());
  }
}

std::string ReplayGenerator::Generate(std::string_view input) {
  if (auto it = answers_.find(input); it != answers_.end()) return it->second;
  if (skips_.find(input) != skips_.end()) return {};
  throw Error(identity_ + ": no recorded continuation for this input");
}

std::string TranscriptToJsonLine(const GenerationTranscript& t,
                                 std::string_view config_hash) {
  jsonl::Json j;
  j["sample_id"] = t.sample_id;
  j["mode"] = std::string(ModeName(t.mode));
  jsonl::Json steps = jsonl::Json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"role", std::string(StepRoleName(s.role))}, {"text", s.text}});
  }
  j["steps"] = std::move(steps);
  j["final_output"] = t.final_output;
  j["termination"] = std::string(TerminationName(t.termination));
  if (!t.error.empty()) j["error"] = t.error;
  j["joiner"] = t.joiner;
  if (!config_hash.empty()) j["config_hash"] = std::string(config_hash);
  return jsonl::Dump(j);
}

GenerationTranscript TranscriptFromJsonLine(std::string_view line) {
  const auto j = jsonl::Parse(line);
  GenerationTranscript t;
  t.sample_id = jsonl::GetString(j, "sample_id");
  try {
    t.mode = ParseMode(jsonl::GetStringOr(j, "mode", "uni"));
  } catch (const UsageError& e) {
    throw DataError(e.what());
  }
  for (const auto& s : jsonl::GetArray(j, "steps")) {
    t.steps.push_back({ParseStepRole(jsonl::GetString(s, "role")), jsonl::GetString(s, "text")});
  }
  t.final_output = jsonl::GetString(j, "final_output");
  t.termination = ParseTermination(jsonl::GetString(j, "termination"));
  t.error = jsonl::GetStringOr(j, "error", "");
  t.joiner = jsonl::GetStringOr(j, "joiner", "");
  return t;
}

}  // namespace ases
