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

#include "ases/evaluation.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ases/jsonl.h"
#include "ases/scoring.h"
#include "ases/segmentation.h"

namespace ases {
namespace {

bool IsAsciiDigit(char c) { return c >= '0' && c <= '9'; }

// Reads a number starting at `i` (sign, "$" and digits already validated by
// the caller); commas between digits are dropped.
std::string ReadNumber(std::string_view s, std::size_t i) {
  std::string out;
  if (s[i] == '-' || s[i] == '+') {
    if (s[i] == '-') out.push_back('-');
    ++i;
  }
  if (i < s.size() && s[i] == '$') ++i;
  bool seen_dot = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    const bool next_digit = i + 1 < s.size() && IsAsciiDigit(s[i + 1]);
    if (IsAsciiDigit(c)) {
      out.push_back(c);
    } else if (c == ',' && next_digit && !seen_dot) {
      continue;
    } else if (c == '.' && next_digit && !seen_dot) {
      seen_dot = true;
      out.push_back('.');
    } else {
      break;
    }
  }
  return out;
}

bool StartsNumber(std::string_view s, std::size_t i) {
  auto digit_at = [&](std::size_t k) { return k < s.size() && IsAsciiDigit(s[k]); };
  if (digit_at(i)) return true;
  if (s[i] == '$') return digit_at(i + 1);
  if (s[i] == '-' || s[i] == '+') {
    return digit_at(i + 1) || (i + 1 < s.size() && s[i + 1] == '$' && digit_at(i + 2));
  }
  return false;
}

}  // namespace

std::optional<std::string> ExtractAnswer(std::string_view text, std::string_view phrase) {
  const std::size_t at = text::RFindNoCase(text, phrase);
  if (at == std::string::npos) return std::nullopt;
  for (std::size_t i = at + phrase.size(); i < text.size(); ++i) {
    if (StartsNumber(text, i)) return ReadNumber(text, i);
  }
  return std::nullopt;
}

std::optional<double> ParseNumericAnswer(std::string_view s) {
  s = text::TrimSpace(s);
  while (!s.empty() && s.back() == '.') s.remove_suffix(1);
  if (s.empty() || !StartsNumber(s, 0)) return std::nullopt;
  std::size_t i = 0;
  if (s[i] == '-' || s[i] == '+') ++i;
  if (i < s.size() && s[i] == '$') ++i;
  for (; i < s.size(); ++i) {
    if (!IsAsciiDigit(s[i]) && s[i] != ',' && s[i] != '.') return std::nullopt;
  }
  const std::string normalized = ReadNumber(s, 0);
  try {
    return std::stod(normalized);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

double Accuracy(std::span<const std::string> predictions, std::span<const std::string> gold,
                std::string_view phrase) {
  if (predictions.size() != gold.size()) {
    throw DataError("accuracy: " + std::to_string(predictions.size()) + " predictions vs " +
                    std::to_string(gold.size()) + " gold answers");
  }
  if (predictions.empty()) throw DataError("accuracy: no samples");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    std::optional<double> g = ParseNumericAnswer(gold[i]);
    if (!g) {
      if (auto extracted = ExtractAnswer(gold[i], phrase)) g = ParseNumericAnswer(*extracted);
    }
    if (!g) throw DataError("gold answer " + std::to_string(i) + " has no number");
    const auto p = ExtractAnswer(predictions[i], phrase);
    if (!p) continue;
    const auto pv = ParseNumericAnswer(*p);
    if (pv && std::abs(*pv - *g) <= 1e-6 * std::max(1.0, std::abs(*g))) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

double CorpusBleu(std::span<const std::string> predictions,
                  std::span<const std::string> references,
                  text::TokenizerKind tokenizer, int max_order) {
  if (predictions.size() != references.size()) {
    throw DataError("corpus BLEU: prediction/reference count mismatch");
  }
  if (predictions.empty()) throw DataError("corpus BLEU: empty corpus");
  BleuStats total(max_order);
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto cand = text::TokenStrings(predictions[i], tokenizer);
    const auto ref = text::TokenStrings(references[i], tokenizer);
    total += CollectBleuStats(cand, ref, max_order);
  }
  double log_sum = 0.0;
  for (int n = 0; n < max_order; ++n) {
    if (total.matches[n] == 0.0 || total.totals[n] == 0.0) return 0.0;
    log_sum += std::log(total.matches[n] / total.totals[n]);
  }
  double bleu = std::exp(log_sum / max_order);
  if (total.candidate_length < total.reference_length) {
    bleu *= std::exp(1.0 - total.reference_length / total.candidate_length);
  }
  return 100.0 * bleu;
}

double MeanRougeL(std::span<const std::string> predictions,
                  std::span<const std::string> references,
                  text::TokenizerKind tokenizer) {
  if (predictions.size() != references.size()) {
    throw DataError("ROUGE-L: prediction/reference count mismatch");
  }
  if (predictions.empty()) throw DataError("ROUGE-L: empty corpus");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    sum += RougeL(predictions[i], references[i], tokenizer);
  }
  return 100.0 * sum / static_cast<double>(predictions.size());
}

bool IsNormalText(std::string_view s, const TaskProfile& profile) {
  const auto sentinel = text::TrimSpace(profile.normal_target);
  return !sentinel.empty() && text::FindNoCase(s, sentinel) != std::string::npos;
}

namespace {

std::string StripStop(std::string_view s, const TaskProfile& profile) {
  std::string out(s);
  if (profile.stop_token.empty()) return out;
  for (std::size_t pos; (pos = out.find(profile.stop_token)) != std::string::npos;) {
    out.erase(pos, profile.stop_token.size());
  }
  return out;
}

}  // namespace

std::set<std::string> AnomalyRegions(std::string_view impression,
                                     const KeywordMap& keyword_map,
                                     const TaskProfile& profile) {
  if (keyword_map.empty()) throw UsageError("keyword map is empty");
  std::set<std::string> regions;
  const std::string body = StripStop(impression, profile);
  if (text::TrimSpace(body).empty()) return regions;
  std::vector<SubSentence> subs;
  try {
    subs = SplitSubSentences(body, profile.delimiters);
  } catch (const DataError&) {
    return regions;
  }
  for (const auto& sub : subs) {
    if (IsNormalText(sub.text, profile)) continue;
    regions.insert(RouteToRegion(sub.text, keyword_map));
  }
  return regions;
}

double MissingRatioTerm(std::string_view gold, std::string_view generated,
                        const KeywordMap& keyword_map, const TaskProfile& profile) {
  const auto gt = AnomalyRegions(gold, keyword_map, profile);
  if (gt.empty()) return 0.0;
  const auto gr = AnomalyRegions(generated, keyword_map, profile);
  std::size_t missing = 0;
  for (const auto& r : gt) {
    if (!gr.count(r)) ++missing;
  }
  return static_cast<double>(missing) / static_cast<double>(gt.size());
}

double MissingRatio(std::span<const std::string> gold, std::span<const std::string> generated,
                    const KeywordMap& keyword_map, const TaskProfile& profile) {
  if (gold.size() != generated.size()) {
    throw DataError("missing ratio: gold/generated count mismatch");
  }
  if (gold.empty()) throw DataError("missing ratio: no samples");
  double sum = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    sum += MissingRatioTerm(gold[i], generated[i], keyword_map, profile);
  }
  return 100.0 * sum / static_cast<double>(gold.size());
}

CheckpointCriterion ParseCriterion(std::string_view name) {
  if (name == "best_train") return CheckpointCriterion::kBestTrain;
  if (name == "best_loss") return CheckpointCriterion::kBestLoss;
  if (name == "best_bleu") return CheckpointCriterion::kBestBleu;
  throw UsageError("unknown checkpoint criterion '" + std::string(name) +
                   "' (expected best_train, best_loss or best_bleu)");
}

std::string_view CriterionName(CheckpointCriterion c) {
  switch (c) {
    case CheckpointCriterion::kBestTrain: return "best_train";
    case CheckpointCriterion::kBestLoss: return "best_loss";
    case CheckpointCriterion::kBestBleu: return "best_bleu";
  }
  return "best_train";
}

void ValidateMetricLog(const MetricLog& log) {
  for (std::size_t i = 1; i < log.checkpoints.size(); ++i) {
    if (log.checkpoints[i].step <= log.checkpoints[i - 1].step) {
      throw DataError("metric log steps must be strictly increasing (step " +
                      std::to_string(log.checkpoints[i].step) + ")");
    }
  }
}

MetricLog LoadMetricLog(const std::filesystem::path& path) {
  MetricLog log;
  auto optional_number = [](const jsonl::Json& j, const char* field) -> std::optional<double> {
    auto it = j.find(field);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw DataError(std::string("field '") + field + "' must be a number");
    return it->get<double>();
  };
  jsonl::ForEachLine(path, [&](const jsonl::Json& j, std::size_t) {
    Checkpoint c;
    c.step = jsonl::GetInt(j, "step");
    c.train_loss = optional_number(j, "train_loss");
    c.val_loss = optional_number(j, "val_loss");
    c.val_bleu = optional_number(j, "val_bleu");
    log.checkpoints.push_back(c);
  });
  try {
    ValidateMetricLog(log);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return log;
}

long long SelectCheckpoint(const MetricLog& log, CheckpointCriterion criterion) {
  if (log.checkpoints.empty()) throw DataError("metric log is empty");
  ValidateMetricLog(log);
  auto value = [&](const Checkpoint& c) {
    const std::optional<double>& v = criterion == CheckpointCriterion::kBestTrain ? c.train_loss
                                     : criterion == CheckpointCriterion::kBestLoss ? c.val_loss
                                                                                   : c.val_bleu;
    if (!v) {
      throw DataError("checkpoint at step " + std::to_string(c.step) + " lacks the field for " +
                      std::string(CriterionName(criterion)));
    }
    return *v;
  };
  const bool maximize = criterion == CheckpointCriterion::kBestBleu;
  const Checkpoint* best = &log.checkpoints.front();
  double best_value = value(*best);
  for (const auto& c : log.checkpoints) {
    const double v = value(c);
    if (maximize ? v > best_value : v < best_value) {
      best = &c;
      best_value = v;
    }
  }
  return best->step;
}

text::TokenizerKind TokenizerFor(Task task) {
  return task == Task::kPET ? text::TokenizerKind::kChar : text::TokenizerKind::kWord;
}

EvalReport Evaluate(std::span<const std::string> predictions,
                    std::span<const std::string> references,
                    const TaskProfile& profile, const KeywordMap* keyword_map) {
  if (predictions.size() != references.size()) {
    throw DataError("evaluation: prediction/reference count mismatch");
  }
  std::vector<std::string> preds;
  std::vector<std::string> refs;
  for (const auto& p : predictions) preds.push_back(StripStop(p, profile));
  for (const auto& r : references) refs.push_back(StripStop(r, profile));

  const auto tok = TokenizerFor(profile.task);
  EvalReport report;
  report.n_samples = preds.size();
  report.corpus_bleu = CorpusBleu(preds, refs, tok);
  report.rouge_l = MeanRougeL(preds, refs, tok);
  if (profile.task == Task::kMWP) {
    report.accuracy = Accuracy(preds, refs, profile.stop_phrase);
  } else {
    if (!keyword_map) throw UsageError("PET evaluation needs a keyword map");
    report.missing_ratio = MissingRatio(refs, preds, *keyword_map, profile);
  }
  return report;
}

std::string ReportToJson(const EvalReport& report, std::string_view config_hash) {
  jsonl::Json j;
  j["corpus_bleu"] = report.corpus_bleu;
  j["rouge_l"] = report.rouge_l;
  j["accuracy"] = report.accuracy ? jsonl::Json(*report.accuracy) : jsonl::Json(nullptr);
  j["missing_ratio"] =
      report.missing_ratio ? jsonl::Json(*report.missing_ratio) : jsonl::Json(nullptr);
  j["n_samples"] = report.n_samples;
  if (!config_hash.empty()) j["config_hash"] = std::string(config_hash);
  return j.dump(2);
}

std::string FormatReportTable(const EvalReport& report) {
  auto row = [](std::string_view name, std::optional<double> v, const char* fmt) {
    char buf[64];
    if (v) {
      std::snprintf(buf, sizeof(buf), fmt, *v);
    } else {
      std::snprintf(buf, sizeof(buf), "%s", "-");
    }
    std::string line(name);
    line.resize(16, ' ');
    return line + buf + "\n";
  };
  std::string out = "metric          value\n";
  out += row("BLEU", report.corpus_bleu, "%.2f");
  out += row("ROUGE-L", report.rouge_l, "%.2f");
  out += row("accuracy", report.accuracy, "%.4f");
  out += row("MR", report.missing_ratio, "%.2f");
  out += row("samples", static_cast<double>(report.n_samples), "%.0f");
  return out;
}

}  // namespace ases
