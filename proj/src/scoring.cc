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

#include "ases/scoring.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace ases {

std::string_view ScorerKindName(ScorerKind kind) {
  return kind == ScorerKind::kNgramReference ? "ngram_reference"
                                             : "remote_adapter";
}

ScorerKind ParseScorerKind(std::string_view name) {
  if (name == "ngram_reference" || name == "ngram") {
    return ScorerKind::kNgramReference;
  }
  if (name == "remote_adapter" || name == "remote") {
    return ScorerKind::kRemoteAdapter;
  }
  throw DataError("unknown scorer kind '" + std::string(name) + "'");
}

double DistributionEntropy(std::span<const double> p) {
  if (p.empty()) throw UsageError("empty distribution");
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw UsageError("distribution has a negative or non-finite entry");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw UsageError("distribution is not normalized (sum = " +
                     std::to_string(total) + ")");
  }
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

std::vector<double> AggregateTokenScores(std::span<const TokenScore> tokens,
                                         std::span<const SubSentence> subs,
                                         ModelMetric metric) {
  auto value = [metric](const TokenScore& t) {
    return metric == ModelMetric::kEntropy ? t.entropy : t.loss;
  };
  std::vector<double> sums(subs.size(), 0.0);
  std::vector<std::size_t> counts(subs.size(), 0);
  std::size_t s = 0;
  for (const auto& tok : tokens) {
    while (s < subs.size() && tok.begin >= subs[s].end) ++s;
    if (s == subs.size()) break;
    if (tok.begin < subs[s].begin) continue;
    sums[s] += value(tok);
    ++counts[s];
  }
  std::vector<double> out(subs.size(), 0.0);
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (counts[i] > 0) {
      out[i] = sums[i] / static_cast<double>(counts[i]);
      continue;
    }
    auto covering = std::find_if(tokens.begin(), tokens.end(), [&](const TokenScore& t) {
      return t.begin <= subs[i].begin && subs[i].begin < t.end;
    });
    if (covering == tokens.end()) {
      throw DataError("no token covers sub-sentence " + std::to_string(i));
    }
    out[i] = value(*covering);
  }
  return out;
}

std::vector<double> ScoreSubSentencesModel(const CoTSample& sample,
                                           std::span<const SubSentence> subs,
                                           const SequenceScorer& scorer,
                                           ModelMetric metric) {
  std::vector<TokenScore> tokens;
  try {
    tokens = scorer.Score(sample.query, sample.target);
  } catch (const LengthExceededError& e) {
    throw LengthExceededError("sample '" + sample.id + "': " + e.what());
  } catch (const RemoteError& e) {
    throw RemoteError("sample '" + sample.id + "': " + e.what());
  }
  return AggregateTokenScores(tokens, subs, metric);
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (std::size_t n = 0; n < matches.size() && n < other.matches.size(); ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  candidate_length += other.candidate_length;
  reference_length += other.reference_length;
  return *this;
}

namespace {

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts CountNgrams(std::span<const std::string> tokens, int n) {
  NgramCounts counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

BleuStats CollectBleuStats(std::span<const std::string> candidate,
                           std::span<const std::string> reference,
                           int max_order) {
  BleuStats stats(max_order);
  stats.candidate_length = static_cast<double>(candidate.size());
  stats.reference_length = static_cast<double>(reference.size());
  for (int n = 1; n <= max_order; ++n) {
    const auto cand = CountNgrams(candidate, n);
    const auto ref = CountNgrams(reference, n);
    double matched = 0.0;
    double total = 0.0;
    for (const auto& [gram, count] : cand) {
      total += count;
      auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    stats.matches[n - 1] = matched;
    stats.totals[n - 1] = total;
  }
  return stats;
}

double SentenceBleu(std::string_view candidate, std::string_view reference,
                    text::TokenizerKind tokenizer, int max_order,
                    bool brevity_penalty) {
  if (max_order < 1) throw UsageError("BLEU order must be >= 1");
  const auto cand = text::TokenStrings(candidate, tokenizer);
  const auto ref = text::TokenStrings(reference, tokenizer);
  if (cand.empty()) return 0.0;
  const BleuStats stats = CollectBleuStats(cand, ref, max_order);
  if (stats.matches[0] == 0.0) return 0.0;

  double log_sum = std::log(stats.matches[0] / stats.totals[0]);
  for (int n = 1; n < max_order; ++n) {
    log_sum += std::log((stats.matches[n] + 1.0) / (stats.totals[n] + 1.0));
  }
  double bleu = std::exp(log_sum / max_order);
  if (brevity_penalty && stats.candidate_length < stats.reference_length) {
    bleu *= std::exp(1.0 - stats.reference_length / stats.candidate_length);
  }
  return bleu;
}

std::size_t LcsLength(std::span<const std::string> a,
                      std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeLScore RougeLDetail(std::string_view candidate, std::string_view reference,
                         text::TokenizerKind tokenizer) {
  const auto cand = text::TokenStrings(candidate, tokenizer);
  const auto ref = text::TokenStrings(reference, tokenizer);
  RougeLScore score;
  if (cand.empty() || ref.empty()) return score;
  const auto lcs = static_cast<double>(LcsLength(cand, ref));
  if (lcs == 0.0) return score;
  score.precision = lcs / static_cast<double>(cand.size());
  score.recall = lcs / static_cast<double>(ref.size());
  score.f = 2.0 * score.precision * score.recall / (score.precision + score.recall);
  return score;
}

double RougeL(std::string_view candidate, std::string_view reference,
              text::TokenizerKind tokenizer) {
  return RougeLDetail(candidate, reference, tokenizer).f;
}

double QuerySimilarity(std::string_view query, std::string_view sub,
                       SimilarityMetric metric, text::TokenizerKind tokenizer) {
  if (metric == SimilarityMetric::kBleu) {
    return SentenceBleu(sub, query, tokenizer, 4, /*brevity_penalty=*/false);
  }
  return RougeLDetail(sub, query, tokenizer).precision;
}

std::vector<double> ScoreSubSentencesSimilarity(
    const CoTSample& sample, std::span<const SubSentence> subs,
    SimilarityMetric metric, text::TokenizerKind tokenizer) {
  std::vector<double> out;
  out.reserve(subs.size());
  for (const auto& sub : subs) {
    out.push_back(1.0 - QuerySimilarity(sample.query, sub.text, metric, tokenizer));
  }
  return out;
}

}  // namespace ases
