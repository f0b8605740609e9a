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

// Pipeline stages behind the command line tool. Each stage reads and writes
// JSONL files named by the RunConfig and stamps every line it writes with the
// config hash.
//
//   score    corpus.jsonl        -> scores.jsonl
//   segment  corpus.jsonl +cache -> segments.jsonl
//   build    segments.jsonl      -> out/{train,validation,test}/{as,es,uni}.jsonl,
//                                   out/{split}.samples.jsonl, out/bundle.meta.json
//   generate samples.jsonl       -> transcripts.jsonl
//   eval     transcripts + gold  -> report.json

#ifndef ASES_PIPELINE_H_
#define ASES_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ases/config.h"
#include "ases/dataset.h"
#include "ases/evaluation.h"
#include "ases/jsonl.h"
#include "ases/orchestrator.h"
#include "ases/scoring.h"
#include "ases/segmentation.h"

namespace ases {

// Corpus lines: {id, query, target, task, report_id?}. Ids must be unique.
CoTSample SampleFromJson(const jsonl::Json& j);
jsonl::Json SampleToJson(const CoTSample& sample);
std::vector<CoTSample> LoadCorpus(const std::filesystem::path& path);
// Fails when a sample's task differs from `task`.
void CheckTask(std::span<const CoTSample> samples, Task task);

// Score cache lines: {sample_id, strategy, scorer: {kind, identity,
// fine_tuned}, values}.
jsonl::Json ScoreVectorToJson(const ScoreVector& v);
ScoreVector ScoreVectorFromJson(const jsonl::Json& j);
std::map<std::string, ScoreVector> LoadScoreCache(const std::filesystem::path& path);

struct SegmentedSample {
  CoTSample sample;
  Strategy strategy = Strategy::kInter;
  double beta = 1.0;
  std::optional<ScorerDescriptor> scorer;
  std::vector<Segment> segments;
};

jsonl::Json SegmentedToJson(const SegmentedSample& s);
SegmentedSample SegmentedFromJson(const jsonl::Json& j);
std::vector<SegmentedSample> LoadSegmented(const std::filesystem::path& path);

// Region sections: {report_id, region, findings, impression}.
jsonl::Json SectionToJson(const RegionSection& s);
RegionSection SectionFromJson(const jsonl::Json& j);
std::vector<RegionSection> LoadSections(const std::filesystem::path& path);

// The n-gram stand-in for the strategy's scorer. ent and loss train on
// query + target of every sample and report fine_tuned = true; ent_star
// trains on the queries only and reports fine_tuned = false.
std::unique_ptr<SequenceScorer> MakeNgramScorer(std::span<const CoTSample> samples,
                                                Strategy strategy, int order);

// One ScoreVector per sample, in input order. `scorer` is needed for model
// strategies and ignored for bleu and rouge.
std::vector<ScoreVector> ComputeScores(std::span<const CoTSample> samples,
                                       Strategy strategy, const SequenceScorer* scorer,
                                       const TaskProfile& profile, std::size_t jobs);

// Runs `fn(i)` for i in [0, n) on up to `jobs` threads. The first exception
// is rethrown after all workers stop.
void ParallelFor(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

struct CommandOutput {
  std::string text;
  int exit_code = 0;
};

CommandOutput CmdScore(const RunConfig& config);
CommandOutput CmdSegment(const RunConfig& config);
CommandOutput CmdBuild(const RunConfig& config);
CommandOutput CmdGenerate(const RunConfig& config);
CommandOutput CmdEval(const RunConfig& config);
CommandOutput CmdInspect(const RunConfig& config);
CommandOutput CmdSplitReport(const RunConfig& config);
CommandOutput CmdSelectCheckpoint(const RunConfig& config);
CommandOutput CmdConformance(const RunConfig& config);

}  // namespace ases

#endif  // ASES_PIPELINE_H_
