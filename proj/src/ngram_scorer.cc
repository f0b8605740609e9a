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

#include "ases/ngram_scorer.h"

#include <cmath>
#include <string>

#include "ases/text.h"

namespace ases {
namespace {

// Outside the Unicode range, so never confused with a real character.
constexpr char32_t kUnknown = 0x110000;
constexpr char32_t kBegin = 0x110001;

}  // namespace

NgramScorer::NgramScorer(std::span<const std::string> corpus, NgramOptions options)
    : options_(std::move(options)) {
  if (options_.order < 1) throw UsageError("n-gram order must be >= 1");
  bool any = false;
  for (const auto& doc : corpus) {
    for (const auto& cp : text::DecodeUtf8(doc)) {
      vocab_.emplace(cp.value, 0);
      any = true;
    }
  }
  if (!any) throw UsageError("n-gram scorer needs a non-empty corpus");
  std::size_t id = 0;
  for (auto& [c, index] : vocab_) index = id++;

  const std::size_t hist_len = static_cast<std::size_t>(options_.order - 1);
  for (const auto& doc : corpus) {
    std::u32string seq(hist_len, kBegin);
    for (const auto& cp : text::DecodeUtf8(doc)) seq.push_back(cp.value);
    for (std::size_t i = hist_len; i < seq.size(); ++i) {
      auto& stats = histories_[seq.substr(i - hist_len, hist_len)];
      stats.total += 1.0;
      stats.next[seq[i]] += 1.0;
    }
  }

  const double v = static_cast<double>(VocabSize());
  for (auto& [history, stats] : histories_) {
    const double denom = stats.total + v;
    double h = 0.0;
    for (const auto& [c, count] : stats.next) {
      const double p = (count + 1.0) / denom;
      h -= p * std::log(p);
    }
    const double unseen = v - static_cast<double>(stats.next.size());
    const double p0 = 1.0 / denom;
    h -= unseen * p0 * std::log(p0);
    stats.entropy = h;
  }
}

char32_t NgramScorer::MapSymbol(char32_t c) const {
  return vocab_.count(c) ? c : kUnknown;
}

const NgramScorer::HistoryStats* NgramScorer::Find(const std::u32string& history) const {
  auto it = histories_.find(history);
  return it == histories_.end() ? nullptr : &it->second;
}

std::vector<double> NgramScorer::Distribution(std::u32string_view history) const {
  const std::size_t hist_len = static_cast<std::size_t>(options_.order - 1);
  std::u32string key(hist_len, kBegin);
  for (char32_t c : history) key.push_back(MapSymbol(c));
  key = key.substr(key.size() - hist_len);
  const HistoryStats* stats = Find(key);
  const double v = static_cast<double>(VocabSize());
  const double denom = (stats ? stats->total : 0.0) + v;
  std::vector<double> p(VocabSize(), 1.0 / denom);
  if (stats) {
    for (const auto& [c, count] : stats->next) {
      p[vocab_.at(c)] = (count + 1.0) / denom;
    }
  }
  return p;
}

std::vector<TokenScore> NgramScorer::Score(std::string_view context,
                                           std::string_view continuation) const {
  if (continuation.empty()) throw UsageError("cannot score an empty continuation");
  const auto ctx = text::DecodeUtf8(context);
  const auto cont = text::DecodeUtf8(continuation);
  if (ctx.size() + cont.size() > options_.max_length) {
    throw LengthExceededError(
        "length exceeded: " + std::to_string(ctx.size() + cont.size()) +
        " code points > limit " + std::to_string(options_.max_length));
  }

  const std::size_t hist_len = static_cast<std::size_t>(options_.order - 1);
  std::u32string history(hist_len, kBegin);
  for (const auto& cp : ctx) history.push_back(MapSymbol(cp.value));

  const double v = static_cast<double>(VocabSize());
  const double uniform_entropy = std::log(v);
  std::vector<TokenScore> out;
  out.reserve(cont.size());
  for (const auto& cp : cont) {
    const std::u32string key = history.substr(history.size() - hist_len);
    const HistoryStats* stats = Find(key);
    const char32_t symbol = MapSymbol(cp.value);

    double count = 0.0;
    double total = 0.0;
    double entropy = uniform_entropy;
    if (stats) {
      total = stats->total;
      entropy = stats->entropy;
      auto it = stats->next.find(symbol);
      if (it != stats->next.end()) count = it->second;
    }
    const double logprob = std::log((count + 1.0) / (total + v));

    TokenScore ts;
    ts.token = std::string(continuation.substr(cp.offset, cp.length));
    ts.logprob = logprob;
    ts.loss = -logprob;
    ts.entropy = entropy;
    ts.begin = cp.offset;
    ts.end = cp.offset + cp.length;
    out.push_back(std::move(ts));
    history.push_back(symbol);
  }
  return out;
}

ScorerDescriptor NgramScorer::Descriptor() const {
  return {ScorerKind::kNgramReference, options_.identity, options_.fine_tuned};
}

}  // namespace ases
