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

#include "ases/segmentation.h"

#include <cmath>
#include <string>

#include "ases/text.h"

namespace ases {

std::vector<std::size_t> Segment::MemberIndices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = first; i <= last; ++i) out.push_back(i);
  return out;
}

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kEnt: return "ent";
    case Strategy::kEntStar: return "ent_star";
    case Strategy::kInter: return "inter";
    case Strategy::kLoss: return "loss";
    case Strategy::kBleu: return "bleu";
    case Strategy::kRouge: return "rouge";
  }
  return "unknown";
}

Strategy ParseStrategy(std::string_view name) {
  if (name == "ent") return Strategy::kEnt;
  if (name == "ent_star" || name == "ent*") return Strategy::kEntStar;
  if (name == "inter") return Strategy::kInter;
  if (name == "loss") return Strategy::kLoss;
  if (name == "bleu") return Strategy::kBleu;
  if (name == "rouge") return Strategy::kRouge;
  throw UsageError("unknown segmentation strategy '" + std::string(name) +
                   "' (expected ent, ent_star, inter, loss, bleu or rouge)");
}

bool NeedsScores(Strategy s) { return s != Strategy::kInter; }

DelimiterSet DefaultDelimiters() {
  return {U'.', U'!', U'?', U';', U',', U'。', U'！', U'？', U'；', U'，'};
}

DelimiterSet ParseDelimiters(std::string_view chars) {
  DelimiterSet out;
  for (const auto& cp : text::DecodeUtf8(chars)) out.insert(cp.value);
  if (out.empty()) throw UsageError("delimiter set must not be empty");
  return out;
}

std::string FormatDelimiters(const DelimiterSet& delimiters) {
  std::string out;
  for (char32_t cp : delimiters) out += text::EncodeUtf8(cp);
  return out;
}

std::vector<SubSentence> SplitSubSentences(std::string_view target,
                                           const DelimiterSet& delimiters) {
  if (target.empty()) throw DataError("cannot split an empty target");
  if (delimiters.empty()) throw UsageError("delimiter set must not be empty");

  const auto cps = text::DecodeUtf8(target);
  std::vector<SubSentence> subs;
  auto emit = [&](std::size_t b, std::size_t e) {
    subs.push_back({subs.size(), std::string(target.substr(b, e - b)), b, e});
  };

  std::size_t begin = 0;
  bool has_content = false;
  bool closing = false;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i].value;
    const bool numeric_sep = (c == U'.' || c == U',') && i > 0 &&
                             i + 1 < cps.size() &&
                             text::IsDigit(cps[i - 1].value) &&
                             text::IsDigit(cps[i + 1].value);
    const bool is_delim = delimiters.count(c) > 0 && !numeric_sep;
    const bool is_space = text::IsSpace(c);
    if (closing && !is_delim && !is_space) {
      emit(begin, cps[i].offset);
      begin = cps[i].offset;
      has_content = false;
      closing = false;
    }
    if (is_delim) {
      if (has_content) closing = true;
    } else if (!is_space) {
      has_content = true;
    }
  }
  if (!has_content) throw DataError("no content");
  emit(begin, target.size());
  return subs;
}

std::vector<Label> ClassifyByThreshold(std::span<const double> scores,
                                       double beta) {
  if (scores.empty()) throw UsageError("cannot classify an empty score list");
  if (!(beta >= 0.0)) throw UsageError("beta must be non-negative");
  double sum = 0.0;
  for (double s : scores) {
    if (!std::isfinite(s)) throw DataError("non-finite segmentation score");
    sum += s;
  }
  const double threshold = beta * (sum / static_cast<double>(scores.size()));
  std::vector<Label> labels;
  labels.reserve(scores.size());
  for (double s : scores) labels.push_back(s > threshold ? Label::kAS : Label::kES);
  return labels;
}

std::vector<Label> ClassifyInterleaving(std::size_t n) {
  if (n == 0) throw UsageError("interleaving needs at least one sub-sentence");
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = (i % 2 == 0) ? Label::kES : Label::kAS;
  }
  return labels;
}

std::vector<Segment> MergeAdjacent(std::span<const ScoredSubSentence> labeled) {
  if (labeled.empty()) throw UsageError("nothing to merge");
  std::vector<Segment> segments;
  for (const auto& item : labeled) {
    if (!segments.empty() && segments.back().label == item.label) {
      segments.back().text += item.sub.text;
      segments.back().last = item.sub.index;
      continue;
    }
    segments.push_back({item.label, item.sub.text, item.sub.index, item.sub.index});
  }
  return segments;
}

std::vector<ScoredSubSentence> LabelSubSentences(
    std::span<const SubSentence> subs, const SegmentationConfig& config,
    std::optional<std::span<const double>> scores) {
  std::vector<Label> labels;
  std::vector<double> values(subs.size(), 0.0);
  if (config.strategy == Strategy::kInter) {
    labels = ClassifyInterleaving(subs.size());
  } else {
    if (!scores) {
      throw UsageError("strategy '" + std::string(StrategyName(config.strategy)) +
                       "' needs scores; run the score step first");
    }
    if (scores->size() != subs.size()) {
      throw DataError("score count " + std::to_string(scores->size()) +
                      " does not match sub-sentence count " +
                      std::to_string(subs.size()));
    }
    labels = ClassifyByThreshold(*scores, config.beta);
    values.assign(scores->begin(), scores->end());
  }
  std::vector<ScoredSubSentence> out;
  out.reserve(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    out.push_back({subs[i], values[i], labels[i]});
  }
  return out;
}

std::vector<Segment> SegmentSample(const CoTSample& sample,
                                   const SegmentationConfig& config,
                                   std::optional<std::span<const double>> scores) {
  ValidateSample(sample);
  try {
    const auto subs = SplitSubSentences(sample.target, config.delimiters);
    const auto labeled = LabelSubSentences(subs, config, scores);
    return MergeAdjacent(labeled);
  } catch (const DataError& e) {
    throw DataError("sample '" + sample.id + "': " + e.what());
  }
}

}  // namespace ases
