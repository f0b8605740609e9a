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

#ifndef ASES_EVALUATION_H_
#define ASES_EVALUATION_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ases/dataset.h"
#include "ases/text.h"

namespace ases {

// First number after the last case-insensitive `phrase`, with commas and a
// leading "$" removed ("1,000" -> "1000", "$-2.5" -> "-2.5").
std::optional<std::string> ExtractAnswer(std::string_view text,
                                         std::string_view phrase = "the answer is");

// Parses a bare numeric answer such as "3", "3.", "$1,200.50", "-4".
std::optional<double> ParseNumericAnswer(std::string_view s);

// Fraction of predictions whose extracted answer equals the gold number
// (|p - g| <= 1e-6 * max(1, |g|)). A gold that is not a bare number is run
// through ExtractAnswer first.
double Accuracy(std::span<const std::string> predictions,
                std::span<const std::string> gold,
                std::string_view phrase = "the answer is");

// Corpus-level BLEU-4 (no smoothing) with brevity penalty, in [0, 100].
double CorpusBleu(std::span<const std::string> predictions,
                  std::span<const std::string> references,
                  text::TokenizerKind tokenizer, int max_order = 4);

// Mean sentence-level ROUGE-L F, in [0, 100].
double MeanRougeL(std::span<const std::string> predictions,
                  std::span<const std::string> references,
                  text::TokenizerKind tokenizer);

// True when the text states the normal sentinel (case-insensitive).
bool IsNormalText(std::string_view s, const TaskProfile& profile);

// Regions with at least one non-normal sentence, routed by keyword.
std::set<std::string> AnomalyRegions(std::string_view impression,
                                     const KeywordMap& keyword_map,
                                     const TaskProfile& profile);

// |GT - GR| / |GT| for one sample, 0 when the gold has no anomaly.
double MissingRatioTerm(std::string_view gold, std::string_view generated,
                        const KeywordMap& keyword_map, const TaskProfile& profile);

// Mean of MissingRatioTerm over all samples, in [0, 100].
double MissingRatio(std::span<const std::string> gold,
                    std::span<const std::string> generated,
                    const KeywordMap& keyword_map, const TaskProfile& profile);

struct Checkpoint {
  long long step = 0;
  std::optional<double> train_loss;
  std::optional<double> val_loss;
  std::optional<double> val_bleu;
};

struct MetricLog {
  std::vector<Checkpoint> checkpoints;
};

enum class CheckpointCriterion { kBestTrain, kBestLoss, kBestBleu };

CheckpointCriterion ParseCriterion(std::string_view name);
std::string_view CriterionName(CheckpointCriterion c);

// JSONL of {step, train_loss, val_loss, val_bleu}; steps strictly increasing.
MetricLog LoadMetricLog(const std::filesystem::path& path);
void ValidateMetricLog(const MetricLog& log);

// Lowest train_loss, lowest val_loss or highest val_bleu; earliest step wins
// ties.
long long SelectCheckpoint(const MetricLog& log, CheckpointCriterion criterion);

struct EvalReport {
  double corpus_bleu = 0.0;  // [0, 100]
  double rouge_l = 0.0;      // [0, 100]
  std::optional<double> accuracy;       // MWP, [0, 1]
  std::optional<double> missing_ratio;  // PET, [0, 100]
  std::size_t n_samples = 0;
};

// Stop tokens are stripped from PET texts before scoring. `keyword_map` is
// required for PET.
EvalReport Evaluate(std::span<const std::string> predictions,
                    std::span<const std::string> references,
                    const TaskProfile& profile, const KeywordMap* keyword_map);

std::string ReportToJson(const EvalReport& report, std::string_view config_hash = {});
std::string FormatReportTable(const EvalReport& report);

text::TokenizerKind TokenizerFor(Task task);

}  // namespace ases

#endif  // ASES_EVALUATION_H_
