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

#include "ases/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "ases/gateway.h"
#include "ases/ngram_scorer.h"
#include "ases/testing/stub_adapter.h"

namespace ases {

namespace {

using jsonl::Json;

void RequirePath(const std::filesystem::path& p, const char* flag) {
  if (p.empty()) throw UsageError(std::string("missing --") + flag);
}

void RequireExisting(const std::filesystem::path& p, const char* flag) {
  RequirePath(p, flag);
  if (!std::filesystem::exists(p)) {
    throw DataError("input file not found: " + p.string());
  }
}

std::string Stamp(Json j, const std::string& hash) {
  j["config_hash"] = hash;
  return jsonl::Dump(j);
}

std::string SampleLine(const CoTSample& s, const std::string& hash) {
  return Stamp(SampleToJson(s), hash);
}

ModelMetric MetricFor(Strategy s) {
  return s == Strategy::kLoss ? ModelMetric::kLoss : ModelMetric::kEntropy;
}

bool IsModelStrategy(Strategy s) {
  return s == Strategy::kEnt || s == Strategy::kEntStar || s == Strategy::kLoss;
}

std::shared_ptr<GatewayClient> MakeClient(const RunConfig& c, const std::string& url,
                                          const char* flag) {
  if (url.empty()) throw UsageError(std::string("missing --") + flag);
  AdapterEndpoint e;
  e.base_url = url;
  e.timeout = c.timeout;
  e.max_in_flight = c.max_in_flight;
  e.retry.attempts = c.retry_attempts;
  return std::make_shared<GatewayClient>(e);
}

std::string Percent(std::size_t part, std::size_t whole) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%",
                whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole));
  return buf;
}

}  // namespace

CoTSample SampleFromJson(const Json& j) {
  CoTSample s;
  s.id = jsonl::GetString(j, "id");
  s.query = jsonl::GetString(j, "query");
  s.target = jsonl::GetString(j, "target");
  s.task = ParseTask(jsonl::GetString(j, "task"));
  s.report_id = jsonl::GetStringOr(j, "report_id", "");
  ValidateSample(s);
  return s;
}

Json SampleToJson(const CoTSample& s) {
  Json j;
  j["id"] = s.id;
  j["query"] = s.query;
  j["target"] = s.target;
  j["task"] = std::string(TaskName(s.task));
  if (!s.report_id.empty()) j["report_id"] = s.report_id;
  return j;
}

std::vector<CoTSample> LoadCorpus(const std::filesystem::path& path) {
  std::vector<CoTSample> out;
  std::set<std::string> ids;
  jsonl::ForEachLine(path, [&](const Json& j, std::size_t) {
    auto s = SampleFromJson(j);
    if (!ids.insert(s.id).second) throw DataError("duplicate sample id '" + s.id + "'");
    out.push_back(std::move(s));
  });
  return out;
}

void CheckTask(std::span<const CoTSample> samples, Task task) {
  for (const auto& s : samples) {
    if (s.task != task) {
      throw DataError("sample '" + s.id + "' has task " + std::string(TaskName(s.task)) +
                      " but the run is configured for " + std::string(TaskName(task)));
    }
  }
}

Json ScoreVectorToJson(const ScoreVector& v) {
  Json j;
  j["sample_id"] = v.sample_id;
  j["strategy"] = std::string(StrategyName(v.strategy));
  if (v.scorer.identity.empty()) {
    j["scorer"] = nullptr;
  } else {
    j["scorer"] = {{"kind", std::string(ScorerKindName(v.scorer.kind))},
                   {"identity", v.scorer.identity},
                   {"fine_tuned", v.scorer.fine_tuned}};
  }
  j["values"] = v.values;
  return j;
}

ScoreVector ScoreVectorFromJson(const Json& j) {
  ScoreVector v;
  v.sample_id = jsonl::GetString(j, "sample_id");
  try {
    v.strategy = ParseStrategy(jsonl::GetString(j, "strategy"));
  } catch (const UsageError& e) {
    throw DataError(e.what());
  }
  if (auto it = j.find("scorer"); it != j.end() && !it->is_null()) {
    v.scorer.kind = ParseScorerKind(jsonl::GetString(*it, "kind"));
    v.scorer.identity = jsonl::GetString(*it, "identity");
    v.scorer.fine_tuned = jsonl::GetBool(*it, "fine_tuned");
  }
  for (const auto& x : jsonl::GetArray(j, "values")) {
    if (!x.is_number()) throw DataError("field 'values' must hold numbers");
    v.values.push_back(x.get<double>());
  }
  return v;
}

std::map<std::string, ScoreVector> LoadScoreCache(const std::filesystem::path& path) {
  std::map<std::string, ScoreVector> out;
  jsonl::ForEachLine(path, [&](const Json& j, std::size_t) {
    auto v = ScoreVectorFromJson(j);
    const std::string id = v.sample_id;
    if (!out.emplace(id, std::move(v)).second) {
      throw DataError("duplicate score entry for '" + id + "'");
    }
  });
  return out;
}

Json SegmentedToJson(const SegmentedSample& s) {
  Json j = SampleToJson(s.sample);
  j["strategy"] = std::string(StrategyName(s.strategy));
  j["beta"] = s.beta;
  if (s.scorer) {
    j["scorer"] = {{"kind", std::string(ScorerKindName(s.scorer->kind))},
                   {"identity", s.scorer->identity},
                   {"fine_tuned", s.scorer->fine_tuned}};
  } else {
    j["scorer"] = nullptr;
  }
  Json segs = Json::array();
  for (const auto& seg : s.segments) {
    segs.push_back({{"label", std::string(LabelName(seg.label))},
                    {"text", seg.text},
                    {"member_indices", seg.MemberIndices()}});
  }
  j["segments"] = std::move(segs);
  return j;
}

SegmentedSample SegmentedFromJson(const Json& j) {
  SegmentedSample s;
  s.sample = SampleFromJson(j);
  try {
    s.strategy = ParseStrategy(jsonl::GetString(j, "strategy"));
  } catch (const UsageError& e) {
    throw DataError(e.what());
  }
  s.beta = jsonl::GetNumber(j, "beta");
  if (auto it = j.find("scorer"); it != j.end() && !it->is_null()) {
    ScorerDescriptor d;
    d.kind = ParseScorerKind(jsonl::GetString(*it, "kind"));
    d.identity = jsonl::GetString(*it, "identity");
    d.fine_tuned = jsonl::GetBool(*it, "fine_tuned");
    s.scorer = d;
  }
  for (const auto& seg : jsonl::GetArray(j, "segments")) {
    Segment out;
    out.label = ParseLabel(jsonl::GetString(seg, "label"));
    out.text = jsonl::GetString(seg, "text");
    const auto& members = jsonl::GetArray(seg, "member_indices");
    if (members.empty()) throw DataError("field 'member_indices' is empty");
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (!members[k].is_number_unsigned()) {
        throw DataError("field 'member_indices' must hold non-negative integers");
      }
      const auto idx = members[k].get<std::size_t>();
      if (k > 0 && idx != out.first + k) {
        throw DataError("field 'member_indices' must be a contiguous range");
      }
      if (k == 0) out.first = idx;
      out.last = idx;
    }
    s.segments.push_back(std::move(out));
  }
  return s;
}

std::vector<SegmentedSample> LoadSegmented(const std::filesystem::path& path) {
  std::vector<SegmentedSample> out;
  jsonl::ForEachLine(path, [&](const Json& j, std::size_t) {
    out.push_back(SegmentedFromJson(j));
  });
  return out;
}

Json SectionToJson(const RegionSection& s) {
  Json j;
  j["report_id"] = s.report_id;
  j["region"] = s.region;
  j["findings"] = s.findings;
  j["impression"] = s.impression;
  return j;
}

RegionSection SectionFromJson(const Json& j) {
  RegionSection s;
  s.report_id = jsonl::GetString(j, "report_id");
  s.region = jsonl::GetString(j, "region");
  s.findings = jsonl::GetString(j, "findings");
  s.impression = jsonl::GetString(j, "impression");
  return s;
}

std::vector<RegionSection> LoadSections(const std::filesystem::path& path) {
  std::vector<RegionSection> out;
  jsonl::ForEachLine(path, [&](const Json& j, std::size_t) { out.push_back(SectionFromJson(j)); });
  return out;
}

std::unique_ptr<SequenceScorer> MakeNgramScorer(std::span<const CoTSample> samples,
                                                Strategy strategy, int order) {
  if (!IsModelStrategy(strategy)) {
    throw UsageError("strategy " + std::string(StrategyName(strategy)) + " uses no model scorer");
  }
  NgramOptions options;
  options.order = order;
  options.fine_tuned = strategy != Strategy::kEntStar;
  std::vector<std::string> corpus;
  corpus.reserve(samples.size());
  for (const auto& s : samples) {
    corpus.push_back(options.fine_tuned ? s.query + s.target : s.query);
  }
  options.identity = "ngram-o" + std::to_string(order) + (options.fine_tuned ? "-cot" : "-query");
  return std::make_unique<NgramScorer>(corpus, options);
}

void ParallelFor(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first) first = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

std::vector<ScoreVector> ComputeScores(std::span<const CoTSample> samples, Strategy strategy,
                                       const SequenceScorer* scorer, const TaskProfile& profile,
                                       std::size_t jobs) {
  if (!NeedsScores(strategy)) {
    throw UsageError("strategy inter does not use scores; run segment directly");
  }
  const bool model = IsModelStrategy(strategy);
  if (model && !scorer) throw UsageError("strategy needs a sequence scorer");
  const ScorerDescriptor descriptor = model ? scorer->Descriptor() : ScorerDescriptor{};
  const auto tok = TokenizerFor(profile.task);

  std::vector<ScoreVector> out(samples.size());
  const bool concurrent = !model || scorer->ConcurrentSafe();
  ParallelFor(samples.size(), concurrent ? jobs : 1, [&](std::size_t i) {
    const auto& s = samples[i];
    std::vector<SubSentence> subs;
    try {
      subs = SplitSubSentences(s.target, profile.delimiters);
    } catch (const DataError& e) {
      throw DataError("sample '" + s.id + "': " + e.what());
    }
    ScoreVector v;
    v.sample_id = s.id;
    v.strategy = strategy;
    v.scorer = descriptor;
    if (model) {
      v.values = ScoreSubSentencesModel(s, subs, *scorer, MetricFor(strategy));
    } else {
      v.values = ScoreSubSentencesSimilarity(
          s, subs, strategy == Strategy::kBleu ? SimilarityMetric::kBleu : SimilarityMetric::kRouge,
          tok);
    }
    out[i] = std::move(v);
  });
  return out;
}

CommandOutput CmdScore(const RunConfig& c) {
  RequireExisting(c.input, "input");
  RequirePath(c.output, "output");
  const auto samples = LoadCorpus(c.input);
  CheckTask(samples, c.profile.task);
  const Strategy strategy = c.segmentation.strategy;

  std::unique_ptr<SequenceScorer> scorer;
  if (IsModelStrategy(strategy)) {
    if (c.scorer == ScorerKind::kNgramReference) {
      scorer = MakeNgramScorer(samples, strategy, c.ngram_order);
    } else {
      scorer = std::make_unique<RemoteScorer>(MakeClient(c, c.adapter_url, "adapter-url"));
      const auto d = scorer->Descriptor();
      if (strategy == Strategy::kEntStar && d.fine_tuned) {
        throw UsageError("strategy ent_star needs a scorer that is not fine-tuned, but adapter '" +
                         d.identity + "' reports fine_tuned = true");
      }
    }
  }
  const auto vectors = ComputeScores(samples, strategy, scorer.get(), c.profile, c.jobs);
  const std::string hash = c.Hash();
  std::vector<std::string> lines;
  lines.reserve(vectors.size());
  std::size_t subs = 0;
  for (const auto& v : vectors) {
    lines.push_back(Stamp(ScoreVectorToJson(v), hash));
    subs += v.values.size();
  }
  jsonl::WriteLines(c.output, lines);
  std::string scorer_name = scorer ? scorer->Descriptor().identity : std::string(StrategyName(strategy));
  return {"scored " + std::to_string(vectors.size()) + " samples (" + std::to_string(subs) +
          " sub-sentences) with " + scorer_name + " -> " + c.output.string() + "\n"};
}

CommandOutput CmdSegment(const RunConfig& c) {
  RequireExisting(c.input, "input");
  RequirePath(c.output, "output");
  const auto samples = LoadCorpus(c.input);
  CheckTask(samples, c.profile.task);
  const Strategy strategy = c.segmentation.strategy;

  std::map<std::string, ScoreVector> cache;
  if (NeedsScores(strategy)) {
    if (c.scores.empty() || !std::filesystem::exists(c.scores)) {
      throw UsageError("strategy " + std::string(StrategyName(strategy)) +
                       " needs a score cache; run `ases score` first and pass it with --scores");
    }
    cache = LoadScoreCache(c.scores);
  }

  const std::string hash = c.Hash();
  std::vector<std::string> lines;
  std::size_t as_segments = 0, es_segments = 0, as_subs = 0, total_subs = 0;
  for (const auto& s : samples) {
    SegmentedSample out;
    out.sample = s;
    out.strategy = strategy;
    out.beta = c.segmentation.beta;
    std::optional<std::span<const double>> scores;
    if (NeedsScores(strategy)) {
      auto it = cache.find(s.id);
      if (it == cache.end()) {
        throw DataError(c.scores.string() + ": no scores for sample '" + s.id + "'");
      }
      if (it->second.strategy != strategy) {
        throw DataError(c.scores.string() + ": scores were computed for strategy " +
                        std::string(StrategyName(it->second.strategy)) + ", run uses " +
                        std::string(StrategyName(strategy)));
      }
      if (!it->second.scorer.identity.empty()) out.scorer = it->second.scorer;
      scores = std::span<const double>(it->second.values);
    }
    out.segments = SegmentSample(s, c.segmentation, scores);
    for (const auto& seg : out.segments) {
      const std::size_t n = seg.last - seg.first + 1;
      total_subs += n;
      if (seg.label == Label::kAS) {
        ++as_segments;
        as_subs += n;
      } else {
        ++es_segments;
      }
    }
    lines.push_back(Stamp(SegmentedToJson(out), hash));
  }
  jsonl::WriteLines(c.output, lines);
  return {"segmented " + std::to_string(samples.size()) + " samples: " +
          std::to_string(es_segments) + " ES / " + std::to_string(as_segments) +
          " AS segments; AS sub-sentences " + std::to_string(as_subs) + "/" +
          std::to_string(total_subs) + "\n"};
}

CommandOutput CmdBuild(const RunConfig& c) {
  RequireExisting(c.input, "input");
  RequirePath(c.output, "output");
  const std::uint64_t seed = c.RequireSeed("build");
  const auto segmented = LoadSegmented(c.input);
  if (segmented.empty()) throw DataError(c.input.string() + ": no samples");

  std::set<std::string> scorer_ids;
  std::vector<CoTSample> samples;
  std::vector<std::vector<TrainingRecord>> per_sample;
  for (const auto& s : segmented) {
    CheckTask(std::span(&s.sample, 1), c.profile.task);
    if (s.scorer) scorer_ids.insert(s.scorer->identity);
    try {
      per_sample.push_back(BuildRecords(s.sample, s.segments, c.profile));
    } catch (const DataError& e) {
      throw DataError("sample '" + s.sample.id + "': " + e.what());
    }
    samples.push_back(s.sample);
  }
  if (scorer_ids.size() > 1) throw DataError("segments come from more than one scorer");

  // Sections of one report travel together.
  std::vector<std::string> report_ids;
  std::set<std::string> seen;
  for (const auto& s : samples) {
    if (seen.insert(s.ReportId()).second) report_ids.push_back(s.ReportId());
  }
  const auto assignment = SplitIds(report_ids, c.split, seed);
  const std::array<std::pair<const char*, const std::vector<std::string>*>, 3> parts = {{
      {"train", &assignment.train},
      {"validation", &assignment.validation},
      {"test", &assignment.test},
  }};
  std::map<std::string, std::string> partition_of;
  for (const auto& [name, ids] : parts) {
    for (const auto& id : *ids) partition_of[id] = name;
  }

  const std::string hash = c.Hash();
  Json meta;
  meta["config_hash"] = hash;
  meta["task"] = std::string(TaskName(c.profile.task));
  meta["strategy"] = std::string(StrategyName(segmented.front().strategy));
  meta["beta"] = segmented.front().beta;
  meta["gamma"] = c.profile.gamma;
  meta["scorer"] = scorer_ids.empty() ? Json(nullptr) : Json(*scorer_ids.begin());
  meta["seed"] = seed;
  meta["separator"] = c.profile.separator;
  meta["stop_sign"] = c.profile.StopSign();
  meta["stop_case_insensitive"] = c.profile.StopSignCaseInsensitive();
  meta["normal_target"] = c.profile.normal_target;
  meta["delimiters"] = FormatDelimiters(c.profile.delimiters);
  meta["split"] = {c.split.train, c.split.validation, c.split.test};

  std::vector<RegionSection> normals;
  const bool inject = c.profile.task == Task::kPET && c.profile.gamma > 0.0;
  if (inject) {
    if (c.normals.empty()) {
      throw UsageError("PET build with gamma > 0 needs --normals (sections from split-report)");
    }
    RequireExisting(c.normals, "normals");
    for (auto& s : LoadSections(c.normals)) {
      auto it = partition_of.find(s.report_id);
      const bool held_out = it != partition_of.end() && it->second != "train";
      if (IsNormalSection(s, c.profile) && !held_out) normals.push_back(std::move(s));
    }
  }

  std::string summary;
  Json counts = Json::object();
  for (const auto& [name, ids] : parts) {
    const std::set<std::string> members(ids->begin(), ids->end());
    std::vector<TrainingRecord> records;
    std::vector<std::string> sample_lines;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!members.count(samples[i].ReportId())) continue;
      records.insert(records.end(), per_sample[i].begin(), per_sample[i].end());
      sample_lines.push_back(SampleLine(samples[i], hash));
    }
    DatasetBundle bundle = RouteRecords(records);
    std::size_t injected = 0;
    if (inject && std::string(name) == "train") {
      const std::size_t before = bundle.size();
      bundle = InjectNormality(bundle, normals, c.profile.gamma, members.size(),
                               SplitMix64(seed).Next(), c.profile);
      injected = bundle.size() - before;
    }
    const auto dir = c.output / name;
    auto write = [&](const std::filesystem::path& path, std::span<const TrainingRecord> rs) {
      std::vector<std::string> lines;
      lines.reserve(rs.size());
      for (const auto& r : rs) lines.push_back(Stamp(jsonl::Parse(RecordToJsonLine(r)), hash));
      jsonl::WriteLines(path, lines);
    };
    write(dir / "as.jsonl", bundle.as_records);
    write(dir / "es.jsonl", bundle.es_records);
    const auto uni = UnionRecords(bundle);
    write(dir / "uni.jsonl", uni);
    jsonl::WriteLines(c.output / (std::string(name) + ".samples.jsonl"), sample_lines);
    counts[name] = {{"samples", sample_lines.size()},
                    {"reports", members.size()},
                    {"as", bundle.as_records.size()},
                    {"es", bundle.es_records.size()},
                    {"uni", uni.size()},
                    {"injected", injected}};
    summary += std::string(name) + ": " + std::to_string(sample_lines.size()) + " samples, " +
               std::to_string(bundle.as_records.size()) + " AS + " +
               std::to_string(bundle.es_records.size()) + " ES records";
    if (injected > 0) summary += " (" + std::to_string(injected) + " injected normal)";
    summary += "\n";
  }
  meta["counts"] = std::move(counts);
  jsonl::WriteText(c.output / "bundle.meta.json", meta.dump(2) + "\n");
  return {summary};
}

CommandOutput CmdGenerate(const RunConfig& c) {
  RequireExisting(c.input, "input");
  RequirePath(c.output, "output");
  const auto samples = LoadCorpus(c.input);
  CheckTask(samples, c.profile.task);

  LoopConfig loop;
  loop.stop_sign = c.profile.StopSign();
  loop.stop_case_insensitive = c.profile.StopSignCaseInsensitive();
  loop.max_iterations = c.max_iterations;
  loop.literal_second_check = c.literal_second_check;
  loop.joiner = c.joiner;

  std::vector<std::unique_ptr<Generator>> owned;
  GeneratorSet set;
  if (c.generator == GeneratorKind::kReplay) {
    RequirePath(c.records, "records");
    const auto bundle = LoadBundle(c.records);
    if (c.mode == GenerationMode::kDual) {
      owned.push_back(std::make_unique<ReplayGenerator>("replay-es", bundle.es_records,
                                                        bundle.as_records));
      owned.push_back(std::make_unique<ReplayGenerator>("replay-as", bundle.as_records,
                                                        bundle.es_records));
      set.extractive = owned[0].get();
      set.abstractive = owned[1].get();
    } else {
      const auto uni = UnionRecords(bundle);
      owned.push_back(std::make_unique<ReplayGenerator>("replay-uni", uni));
      set.unified = owned[0].get();
    }
  } else {
    GenerateParams params;
    params.max_new_tokens = c.max_new_tokens;
    if (c.seed) params.seed = static_cast<long long>(*c.seed);
    if (c.mode == GenerationMode::kDual) {
      if (c.esm_url.empty() || c.asm_url.empty()) {
        throw UsageError("--mode dual needs two endpoints: --esm-url and --asm-url");
      }
      owned.push_back(std::make_unique<RemoteGenerator>(MakeClient(c, c.esm_url, "esm-url"), params));
      owned.push_back(std::make_unique<RemoteGenerator>(MakeClient(c, c.asm_url, "asm-url"), params));
      set.extractive = owned[0].get();
      set.abstractive = owned[1].get();
    } else {
      owned.push_back(
          std::make_unique<RemoteGenerator>(MakeClient(c, c.adapter_url, "adapter-url"), params));
      set.unified = owned[0].get();
    }
  }

  const auto transcripts = BatchGenerate(samples, c.mode, set, loop, c.profile, c.jobs);
  const std::string hash = c.Hash();
  std::vector<std::string> lines;
  std::map<Termination, std::size_t> by_reason;
  for (const auto& t : transcripts) {
    lines.push_back(TranscriptToJsonLine(t, hash));
    ++by_reason[t.termination];
  }
  jsonl::WriteLines(c.output, lines);
  std::string text = "generated " + std::to_string(transcripts.size()) + " transcripts (" +
                     std::string(ModeName(c.mode)) + "): " +
                     std::to_string(by_reason[Termination::kStopSign]) + " stop_sign, " +
                     std::to_string(by_reason[Termination::kMaxIterations]) + " max_iterations, " +
                     std::to_string(by_reason[Termination::kGeneratorError]) +
                     " generator_error\n";
  return {text};
}

CommandOutput CmdEval(const RunConfig& c) {
  RequireExisting(c.input, "input");
  RequireExisting(c.gold, "gold");

  std::set<std::string> hashes;
  std::map<std::string, std::string> predictions;
  jsonl::ForEachLine(c.input, [&](const Json& j, std::size_t) {
    const auto t = TranscriptFromJsonLine(jsonl::Dump(j));
    if (auto h = jsonl::GetStringOr(j, "config_hash", ""); !h.empty()) hashes.insert(h);
    if (!predictions.emplace(t.sample_id, t.final_output).second) {
      throw DataError("duplicate transcript for '" + t.sample_id + "'");
    }
  });
  std::vector<CoTSample> gold;
  jsonl::ForEachLine(c.gold, [&](const Json& j, std::size_t) {
    if (auto h = jsonl::GetStringOr(j, "config_hash", ""); !h.empty()) hashes.insert(h);
    gold.push_back(SampleFromJson(j));
  });
  CheckTask(gold, c.profile.task);
  if (hashes.size() > 1 && !c.force) {
    std::string list;
    for (const auto& h : hashes) list += (list.empty() ? "" : ", ") + h;
    throw DataError("inputs come from different configs (hashes " + list +
                    "); pass --force to evaluate anyway");
  }

  std::vector<std::string> preds, refs;
  for (const auto& g : gold) {
    auto it = predictions.find(g.id);
    if (it == predictions.end()) throw DataError("no transcript for gold sample '" + g.id + "'");
    preds.push_back(it->second);
    refs.push_back(g.target);
    predictions.erase(it);
  }
  if (!predictions.empty()) {
    throw DataError("transcript for unknown sample '" + predictions.begin()->first + "'");
  }
  if (gold.empty()) throw DataError(c.gold.string() + ": no samples");

  KeywordMap keyword_map;
  const KeywordMap* km = nullptr;
  if (c.profile.task == Task::kPET) {
    if (c.keyword_map.empty()) throw UsageError("PET evaluation needs --keyword-map");
    RequireExisting(c.keyword_map, "keyword-map");
    keyword_map = LoadKeywordMap(c.keyword_map);
    km = &keyword_map;
  }
  const auto report = Evaluate(preds, refs, c.profile, km);
  const std::string hash = hashes.size() == 1 ? *hashes.begin() : c.Hash();
  if (!c.output.empty()) jsonl::WriteText(c.output, ReportToJson(report, hash) + "\n");
  return {FormatReportTable(report)};
}

CommandOutput CmdInspect(const RunConfig& c) {
  RequireExisting(c.input, "input");
  const auto samples = LoadCorpus(c.input);
  std::map<Task, std::size_t> per_task;
  std::size_t subs_total = 0, subs_max = 0, no_stop = 0;
  std::set<std::string> reports;
  for (const auto& s : samples) {
    ++per_task[s.task];
    reports.insert(s.ReportId());
    std::size_t n = 0;
    try {
      n = SplitSubSentences(s.target, c.profile.delimiters).size();
    } catch (const DataError& e) {
      throw DataError("sample '" + s.id + "': " + e.what());
    }
    subs_total += n;
    subs_max = std::max(subs_max, n);
    if (s.task == Task::kMWP && text::FindNoCase(s.target, c.profile.stop_phrase) == std::string::npos) {
      ++no_stop;
    }
  }
  std::ostringstream out;
  out << "samples          " << samples.size() << "\n";
  for (const auto& [task, n] : per_task) {
    out << "  " << TaskName(task) << std::string(15 - TaskName(task).size(), ' ') << n << "\n";
  }
  out << "reports          " << reports.size() << "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f",
                samples.empty() ? 0.0
                                : static_cast<double>(subs_total) / static_cast<double>(samples.size()));
  out << "sub-sentences    " << subs_total << " (mean " << buf << ", max " << subs_max << ")\n";
  if (per_task.count(Task::kMWP)) {
    out << "no stop phrase   " << no_stop << " (" << Percent(no_stop, per_task[Task::kMWP]) << ")\n";
  }
  return {out.str()};
}

CommandOutput CmdSplitReport(const RunConfig& c) {
  RequireExisting(c.input, "input");
  RequirePath(c.output, "output");
  RequireExisting(c.keyword_map, "keyword-map");
  const auto keyword_map = LoadKeywordMap(c.keyword_map);
  const std::string hash = c.Hash();
  std::vector<std::string> sample_lines, normal_lines;
  std::size_t reports = 0, skipped = 0;
  jsonl::ForEachLine(c.input, [&](const Json& j, std::size_t) {
    const auto id = jsonl::GetString(j, "id");
    const auto findings = jsonl::GetString(j, "findings");
    const auto impression = jsonl::GetStringOr(j, "impression", "");
    ++reports;
    for (const auto& s : SplitReportByRegion(id, findings, impression, keyword_map, c.profile)) {
      if (IsNormalSection(s, c.profile)) {
        normal_lines.push_back(Stamp(SectionToJson(s), hash));
      } else if (s.findings.empty()) {
        ++skipped;
      } else {
        CoTSample sample{id + ":" + s.region, s.findings, s.impression, Task::kPET, id};
        sample_lines.push_back(SampleLine(sample, hash));
      }
    }
  });
  jsonl::WriteLines(c.output, sample_lines);
  if (!c.normals.empty()) jsonl::WriteLines(c.normals, normal_lines);
  return {"split " + std::to_string(reports) + " reports: " + std::to_string(sample_lines.size()) +
          " abnormal sections, " + std::to_string(normal_lines.size()) + " normal sections, " +
          std::to_string(skipped) + " impression-only sections skipped\n"};
}

CommandOutput CmdSelectCheckpoint(const RunConfig& c) {
  RequireExisting(c.input, "input");
  const auto log = LoadMetricLog(c.input);
  const auto criterion = ParseCriterion(c.criterion);
  return {std::to_string(SelectCheckpoint(log, criterion)) + "\n"};
}

CommandOutput CmdConformance(const RunConfig& c) {
  if (c.adapter_url.empty()) throw UsageError("missing --adapter-url");
  CommandOutput out;
  for (const auto& check : testing::RunConformance(c.adapter_url)) {
    out.text += std::string(check.passed ? "PASS " : "FAIL ") + check.name;
    if (!check.passed) out.text += ": " + check.detail;
    out.text += "\n";
    if (!check.passed) out.exit_code = 3;
  }
  return out;
}

}  // namespace ases
