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

#ifndef ASES_SCORING_H_
#define ASES_SCORING_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ases/common.h"
#include "ases/segmentation.h"
#include "ases/text.h"

namespace ases {

// Per-token quantities under teacher forcing, all in nats.
struct TokenScore {
  std::string token;
  double logprob = 0.0;  // <= 0
  double entropy = 0.0;  // in [0, ln |V|]
  double loss = 0.0;     // == -logprob
  // Half-open byte offsets into the scored continuation.
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class ScorerKind { kNgramReference, kRemoteAdapter };

std::string_view ScorerKindName(ScorerKind kind);
ScorerKind ParseScorerKind(std::string_view name);

struct ScorerDescriptor {
  ScorerKind kind = ScorerKind::kNgramReference;
  std::string identity;
  // Distinguishes ent (fine-tuned scorer) from ent* (pre-trained only).
  bool fine_tuned = false;

  bool operator==(const ScorerDescriptor&) const = default;
};

class SequenceScorer {
 public:
  virtual ~SequenceScorer() = default;

  // One TokenScore per continuation token; the distribution for token t is
  // conditioned on context plus the continuation tokens before t. Spans tile
  // the continuation. Throws LengthExceededError instead of truncating.
  virtual std::vector<TokenScore> Score(std::string_view context,
                                        std::string_view continuation) const = 0;

  virtual ScorerDescriptor Descriptor() const = 0;
  virtual std::size_t VocabSize() const = 0;
  // False means the pipeline must serialize calls.
  virtual bool ConcurrentSafe() const { return true; }
};

// -sum p ln p with 0 ln 0 = 0. Throws UsageError unless p is a probability
// vector (entries >= 0, sum within 1e-9 of 1).
double DistributionEntropy(std::span<const double> p);

enum class ModelMetric { kEntropy, kLoss };
enum class SimilarityMetric { kBleu, kRouge };

struct ScoreVector {
  std::string sample_id;
  Strategy strategy = Strategy::kEnt;
  ScorerDescriptor scorer;
  std::vector<double> values;
};

// M(S_i) = mean of the chosen per-token quantity over the tokens of S_i, from
// a single pass with context = query and continuation = the full target.
// A token belongs to the sub-sentence holding its first byte; a sub-sentence
// that no token starts in takes the value of the token covering its first
// byte.
std::vector<double> ScoreSubSentencesModel(const CoTSample& sample,
                                           std::span<const SubSentence> subs,
                                           const SequenceScorer& scorer,
                                           ModelMetric metric);

// Attribution step of ScoreSubSentencesModel, on already computed tokens.
std::vector<double> AggregateTokenScores(std::span<const TokenScore> tokens,
                                         std::span<const SubSentence> subs,
                                         ModelMetric metric);

// Clipped n-gram matches and candidate n-gram totals per order (index 0 is
// unigrams), plus token lengths. Summed over a corpus for corpus BLEU.
struct BleuStats {
  std::vector<double> matches;
  std::vector<double> totals;
  double candidate_length = 0.0;
  double reference_length = 0.0;

  explicit BleuStats(int max_order = 4)
      : matches(max_order, 0.0), totals(max_order, 0.0) {}
  BleuStats& operator+=(const BleuStats& other);
};

BleuStats CollectBleuStats(std::span<const std::string> candidate,
                           std::span<const std::string> reference,
                           int max_order = 4);

// Sentence BLEU with add-one smoothing on orders >= 2. Empty candidate -> 0.
double SentenceBleu(std::string_view candidate, std::string_view reference,
                    text::TokenizerKind tokenizer, int max_order = 4,
                    bool brevity_penalty = true);

struct RougeLScore {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

RougeLScore RougeLDetail(std::string_view candidate, std::string_view reference,
                         text::TokenizerKind tokenizer);
// LCS F-measure with equal precision/recall weight.
double RougeL(std::string_view candidate, std::string_view reference,
              text::TokenizerKind tokenizer);

std::size_t LcsLength(std::span<const std::string> a,
                      std::span<const std::string> b);

// Similarity of a sub-sentence to the query: BLEU without brevity penalty or
// ROUGE-L precision, both with the sub-sentence as candidate.
double QuerySimilarity(std::string_view query, std::string_view sub,
                       SimilarityMetric metric, text::TokenizerKind tokenizer);

// M(S_i) = 1 - QuerySimilarity(query, S_i).
std::vector<double> ScoreSubSentencesSimilarity(
    const CoTSample& sample, std::span<const SubSentence> subs,
    SimilarityMetric metric, text::TokenizerKind tokenizer);

}  // namespace ases

#endif  // ASES_SCORING_H_
