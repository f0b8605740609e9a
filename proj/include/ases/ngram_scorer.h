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

#ifndef ASES_NGRAM_SCORER_H_
#define ASES_NGRAM_SCORER_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ases/scoring.h"

namespace ases {

struct NgramOptions {
  int order = 3;
  // Limit on context + continuation, in code points.
  std::size_t max_length = 100000;
  std::string identity = "ngram";
  bool fine_tuned = true;
};

// Character-level n-gram model with add-one smoothing.
//
// The vocabulary is every code point seen in the corpus plus one unknown
// symbol, so |V| = distinct characters + 1. Each text is padded on the left
// with order-1 begin symbols; begin symbols only ever appear in histories and
// are not part of |V|. For history h and next character c:
//
//   P(c | h) = (count(h, c) + 1) / (count(h) + |V|)
//
// where count(h) is the number of times h was followed by anything, so every
// conditional distribution sums to one over V.
class NgramScorer : public SequenceScorer {
 public:
  NgramScorer(std::span<const std::string> corpus, NgramOptions options);

  std::vector<TokenScore> Score(std::string_view context,
                                std::string_view continuation) const override;
  ScorerDescriptor Descriptor() const override;
  std::size_t VocabSize() const override { return vocab_.size() + 1; }

  int order() const { return options_.order; }

  // Full conditional distribution over V for a history given as raw text;
  // the history is padded with begin symbols when shorter than order-1.
  // The last entry is the unknown symbol. Exposed for tests.
  std::vector<double> Distribution(std::u32string_view history) const;

 private:
  struct HistoryStats {
    double total = 0.0;
    std::map<char32_t, double> next;
    double entropy = 0.0;
  };

  char32_t MapSymbol(char32_t c) const;
  const HistoryStats* Find(const std::u32string& history) const;

  NgramOptions options_;
  std::map<char32_t, std::size_t> vocab_;
  std::map<std::u32string, HistoryStats> histories_;
};

}  // namespace ases

#endif  // ASES_NGRAM_SCORER_H_
