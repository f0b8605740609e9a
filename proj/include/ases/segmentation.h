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

// Splitting chain-of-thought targets into sub-sentences and labelling them as
// extractive (ES) or abstractive (AS) segments.
//
// A target is cut after every delimiter. Trailing delimiters and whitespace
// stay with the sub-sentence they close, so concatenating the sub-sentences
// in order gives back the target byte for byte. Labels come either from a
// score threshold (score > beta * mean(scores) => AS) or from position
// (ES, AS, ES, ...). Adjacent sub-sentences with the same label are then
// merged into segments.

#ifndef ASES_SEGMENTATION_H_
#define ASES_SEGMENTATION_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ases/common.h"

namespace ases {

struct SubSentence {
  std::size_t index = 0;
  std::string text;
  // Half-open byte offsets into the parent target.
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const SubSentence&) const = default;
};

struct ScoredSubSentence {
  SubSentence sub;
  double score = 0.0;
  Label label = Label::kES;
};

struct Segment {
  Label label = Label::kES;
  std::string text;
  // Inclusive range of member sub-sentence indices.
  std::size_t first = 0;
  std::size_t last = 0;

  std::vector<std::size_t> MemberIndices() const;
  bool operator==(const Segment&) const = default;
};

enum class Strategy { kEnt, kEntStar, kInter, kLoss, kBleu, kRouge };

std::string_view StrategyName(Strategy s);
// Accepts "ent", "ent_star" (or "ent*"), "inter", "loss", "bleu", "rouge".
Strategy ParseStrategy(std::string_view name);
bool NeedsScores(Strategy s);

using DelimiterSet = std::set<char32_t>;

// . ! ? ; , and their fullwidth CJK counterparts.
DelimiterSet DefaultDelimiters();
// Every code point of `chars` becomes a delimiter.
DelimiterSet ParseDelimiters(std::string_view chars);
std::string FormatDelimiters(const DelimiterSet& delimiters);

struct SegmentationConfig {
  Strategy strategy = Strategy::kEnt;
  double beta = 1.0;
  DelimiterSet delimiters = DefaultDelimiters();
};

// An ASCII '.' or ',' between two digits is part of a number, not a delimiter.
// Throws DataError("no content") when the target has no character that is
// neither a delimiter nor whitespace.
std::vector<SubSentence> SplitSubSentences(std::string_view target,
                                           const DelimiterSet& delimiters);

// label[i] = AS iff scores[i] > beta * mean(scores). Ties go to ES.
std::vector<Label> ClassifyByThreshold(std::span<const double> scores,
                                       double beta);

std::vector<Label> ClassifyInterleaving(std::size_t n);

std::vector<Segment> MergeAdjacent(std::span<const ScoredSubSentence> labeled);

// split -> classify -> merge. `scores` must be present, one per sub-sentence,
// for every strategy except inter.
std::vector<Segment> SegmentSample(
    const CoTSample& sample, const SegmentationConfig& config,
    std::optional<std::span<const double>> scores = std::nullopt);

// Labelled sub-sentences before merging; SegmentSample is MergeAdjacent of this.
std::vector<ScoredSubSentence> LabelSubSentences(
    std::span<const SubSentence> subs, const SegmentationConfig& config,
    std::optional<std::span<const double>> scores);

}  // namespace ases

#endif  // ASES_SEGMENTATION_H_
