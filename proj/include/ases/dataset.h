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

// Turning segmented samples into iterative-generation training records.
//
// A sample with segments s_0 .. s_k yields k+1 records. Record i maps
//
//   query + separator + s_0 + ... + s_{i-1}  ->  s_i
//
// and is routed by the label of s_i to the AS or ES dataset. The last record
// carries the stop sign: for MWP the segment holding "the answer is", for
// PET the final segment with the stop token appended.

#ifndef ASES_DATASET_H_
#define ASES_DATASET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ases/common.h"
#include "ases/segmentation.h"

namespace ases {

struct TaskProfile {
  Task task = Task::kMWP;
  std::string stop_phrase = "the answer is";  // MWP, case-insensitive
  std::string stop_token = "<STOP>";          // PET
  std::string separator = "|";
  double gamma = 1.0;
  std::string normal_target = "No obvious anomaly";
  DelimiterSet delimiters = DefaultDelimiters();

  static TaskProfile ForTask(Task task);
  // The marker that ends generation for this task.
  const std::string& StopSign() const {
    return task == Task::kMWP ? stop_phrase : stop_token;
  }
  bool StopSignCaseInsensitive() const { return task == Task::kMWP; }
  bool ContainsStopSign(std::string_view s) const;
};

struct TrainingRecord {
  std::string sample_id;
  std::size_t step = 0;  // position of the target segment within the sample
  std::string input;
  std::string target;
  Label role = Label::kES;
  bool is_final = false;

  bool operator==(const TrainingRecord&) const = default;
};

struct DatasetBundle {
  std::vector<TrainingRecord> as_records;
  std::vector<TrainingRecord> es_records;

  bool operator==(const DatasetBundle&) const = default;
  std::size_t size() const { return as_records.size() + es_records.size(); }
};

std::vector<TrainingRecord> BuildRecords(const CoTSample& sample,
                                         std::span<const Segment> segments,
                                         const TaskProfile& profile);

// Routes records by role, keeping their relative order.
DatasetBundle RouteRecords(std::span<const TrainingRecord> records);
void AppendRecords(DatasetBundle& bundle, std::span<const TrainingRecord> records);

// The uni-path training set: both lists, grouped by sample id (ordered by
// id) and by step within a sample.
std::vector<TrainingRecord> UnionRecords(const DatasetBundle& bundle);

// Concatenated targets of one sample's records with the stop token stripped
// from the final one. Equals the original target for a well-formed build.
std::string ReconstructTarget(std::span<const TrainingRecord> sample_records,
                              const TaskProfile& profile);

// Ordered region -> keywords map. Order matters: a sentence goes to the
// first region with a matching keyword.
using KeywordMap = std::vector<std::pair<std::string, std::vector<std::string>>>;

inline constexpr std::string_view kOtherRegion = "other";

// Parses "region = kw1, kw2" lines; '#' starts a comment.
KeywordMap ParseKeywordMap(std::string_view content);
KeywordMap LoadKeywordMap(const std::filesystem::path& path);

// First region whose keyword occurs in `sentence`, or "other".
std::string RouteToRegion(std::string_view sentence, const KeywordMap& map);

struct RegionSection {
  std::string report_id;
  std::string region;
  std::string findings;
  std::string impression;

  bool operator==(const RegionSection&) const = default;
};

// Partitions a report into per-region sections. Regions that occur in the
// report but get no impression sentence are given `normal_target`.
// Impression sentences for regions absent from the report produce a section
// with empty findings.
std::vector<RegionSection> SplitReportByRegion(std::string_view report_id,
                                               std::string_view report,
                                               std::string_view impression,
                                               const KeywordMap& keyword_map,
                                               const TaskProfile& profile);

bool IsNormalSection(const RegionSection& section, const TaskProfile& profile);

// Appends floor(gamma * total_reports) ES records drawn uniformly from
// `normals`, without replacement when enough sections exist and with
// replacement otherwise. AS records are untouched.
DatasetBundle InjectNormality(const DatasetBundle& bundle,
                              std::span<const RegionSection> normals,
                              double gamma, std::size_t total_reports,
                              std::uint64_t seed, const TaskProfile& profile);

std::size_t InjectionCount(double gamma, std::size_t total_reports);

// Deterministic 64-bit generator with a portable bounded draw, so shuffles
// are identical across standard library implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t Next();
  // Uniform in [0, bound).
  std::uint64_t Below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

SplitRatios ParseSplitRatios(std::string_view s);

struct SplitAssignment {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

// Shuffles the distinct ids, sizes the partitions by largest remainder (each
// partition with a nonzero ratio gets at least one id), and returns each
// partition in the original id order.
SplitAssignment SplitIds(std::span<const std::string> ids, const SplitRatios& ratios,
                         std::uint64_t seed);

std::array<std::size_t, 3> PartitionSizes(std::size_t n, const SplitRatios& ratios);

// One JSON object per line: sample_id, step, input, target, role, is_final.
std::string RecordToJsonLine(const TrainingRecord& record);
TrainingRecord RecordFromJsonLine(std::string_view line);

void WriteRecords(const std::filesystem::path& path,
                  std::span<const TrainingRecord> records);
std::vector<TrainingRecord> ReadRecords(const std::filesystem::path& path);

// as.jsonl + es.jsonl inside `dir`.
void SerializeBundle(const DatasetBundle& bundle, const std::filesystem::path& dir);
DatasetBundle LoadBundle(const std::filesystem::path& dir);

}  // namespace ases

#endif  // ASES_DATASET_H_
