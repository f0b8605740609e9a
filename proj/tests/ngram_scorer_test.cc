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
#include <random>

#include <gtest/gtest.h>

#include "ases/text.h"

namespace ases {
namespace {

NgramScorer Make(std::vector<std::string> corpus, int order) {
  NgramOptions o;
  o.order = order;
  return NgramScorer(corpus, o);
}

// Hand counts on "abababab", order 2, |V| = 3 (a, b, unk):
//   <s>->a 1 of 1, a->b 4 of 4, b->a 3 of 3.
TEST(NgramScorerTest, BigramLaplaceByHand) {
  const auto s = Make({"abababab"}, 2);
  EXPECT_EQ(s.VocabSize(), 3u);
  const auto t = s.Score("", "abab");
  ASSERT_EQ(t.size(), 4u);
  EXPECT_NEAR(t[0].loss, std::log(4.0 / 2.0), 1e-12);
  EXPECT_NEAR(t[1].loss, std::log(7.0 / 5.0), 1e-12);
  EXPECT_NEAR(t[2].loss, std::log(6.0 / 4.0), 1e-12);
  EXPECT_NEAR(t[3].loss, std::log(7.0 / 5.0), 1e-12);
  for (const auto& x : t) EXPECT_DOUBLE_EQ(x.logprob, -x.loss);
  // After 'a': p = (5/7, 1/7, 1/7).
  const double h = -(5.0 / 7) * std::log(5.0 / 7) - 2 * (1.0 / 7) * std::log(1.0 / 7);
  EXPECT_NEAR(t[0].entropy, -(2.0 / 4) * std::log(2.0 / 4) - 2 * (1.0 / 4) * std::log(1.0 / 4),
              1e-12);
  EXPECT_NEAR(t[1].entropy, h, 1e-12);
}

TEST(NgramScorerTest, UnigramByHand) {
  const auto s = Make({"aab"}, 1);
  EXPECT_EQ(s.VocabSize(), 3u);
  const auto p = s.Distribution(U"");
  ASSERT_EQ(p.size(), 3u);
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[1], 2.0 / 6.0, 1e-12);
  EXPECT_NEAR(p[2], 1.0 / 6.0, 1e-12);
  const auto t = s.Score("", "a");
  EXPECT_NEAR(t[0].loss, std::log(2.0), 1e-12);
}

TEST(NgramScorerTest, UnknownSymbolsShareOneSlot) {
  const auto s = Make({"aab"}, 1);
  const auto t = s.Score("", "zq");
  EXPECT_NEAR(t[0].loss, std::log(6.0), 1e-12);
  EXPECT_NEAR(t[1].loss, std::log(6.0), 1e-12);
}

TEST(NgramScorerTest, SpansAreUtf8Bytes) {
  const auto s = Make({"肝内病灶。"}, 2);
  const auto t = s.Score("查", "肝内。");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].token, "肝");
  EXPECT_EQ(t[1].begin, 3u);
  EXPECT_EQ(t[2].end, 9u);
}

TEST(NgramScorerTest, Errors) {
  EXPECT_THROW(Make({}, 2), UsageError);
  EXPECT_THROW(Make({""}, 2), UsageError);
  EXPECT_THROW(Make({"ab"}, 0), UsageError);
  const auto s = Make({"ab"}, 2);
  EXPECT_THROW(s.Score("a", ""), UsageError);
  NgramOptions o;
  o.max_length = 5;
  const std::vector<std::string> corpus = {"abc"};
  NgramScorer limited(corpus, o);
  EXPECT_NO_THROW(limited.Score("ab", "abc"));
  EXPECT_THROW(limited.Score("abc", "abc"), LengthExceededError);
}

TEST(NgramScorerTest, DescriptorCarriesOptions) {
  NgramOptions o;
  o.identity = "ngram-o3-query";
  o.fine_tuned = false;
  const std::vector<std::string> corpus = {"x"};
  NgramScorer s(corpus, o);
  EXPECT_EQ(s.Descriptor(), (ScorerDescriptor{ScorerKind::kNgramReference, "ngram-o3-query", false}));
}

std::string RandomText(std::mt19937& rng, std::size_t n) {
  static const std::vector<std::string> alphabet = {"a", "b", "c", " ", ".", "肝", "。"};
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
  return s;
}

TEST(NgramPropertyTest, DistributionsAreNormalisedAndMatchEntropy) {
  std::mt19937 rng(3);
  for (int order : {1, 2, 3, 4}) {
    std::vector<std::string> corpus;
    for (int k = 0; k < 5; ++k) corpus.push_back(RandomText(rng, 40));
    const auto s = Make(corpus, order);
    for (int trial = 0; trial < 20; ++trial) {
      const std::string ctx = RandomText(rng, rng() % 6);
      const std::string cont = RandomText(rng, 1 + rng() % 8);
      const auto tokens = s.Score(ctx, cont);
      std::u32string history;
      for (const auto& cp : text::DecodeUtf8(ctx)) history.push_back(cp.value);
      for (const auto& t : tokens) {
        const auto p = s.Distribution(history);
        double sum = 0;
        for (double x : p) sum += x;
        EXPECT_NEAR(sum, 1.0, 1e-12);
        EXPECT_NEAR(t.entropy, DistributionEntropy(p), 1e-9);
        EXPECT_GE(t.entropy, 0.0);
        EXPECT_LE(t.entropy, std::log(static_cast<double>(s.VocabSize())) + 1e-12);
        EXPECT_LE(t.logprob, 0.0);
        history.push_back(text::DecodeUtf8(t.token)[0].value);
      }
    }
  }
}

TEST(NgramPropertyTest, TeacherForcingDecomposes) {
  std::mt19937 rng(4);
  std::vector<std::string> corpus = {RandomText(rng, 60), RandomText(rng, 60)};
  const auto s = Make(corpus, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::string ctx = RandomText(rng, rng() % 5);
    const std::string a = RandomText(rng, 1 + rng() % 5);
    const std::string b = RandomText(rng, 1 + rng() % 5);
    const auto whole = s.Score(ctx, a + b);
    const auto first = s.Score(ctx, a);
    const auto second = s.Score(ctx + a, b);
    ASSERT_EQ(whole.size(), first.size() + second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      EXPECT_EQ(whole[i].logprob, first[i].logprob);
    }
    for (std::size_t i = 0; i < second.size(); ++i) {
      EXPECT_EQ(whole[first.size() + i].logprob, second[i].logprob);
      EXPECT_EQ(whole[first.size() + i].entropy, second[i].entropy);
    }
  }
}

TEST(NgramPropertyTest, Deterministic) {
  const std::vector<std::string> corpus = {"the answer is 3.", "the cat sat."};
  const auto a = Make(corpus, 3).Score("q", "the answer");
  const auto b = Make(corpus, 3).Score("q", "the answer");
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].logprob, b[i].logprob);
    EXPECT_EQ(a[i].entropy, b[i].entropy);
  }
}

TEST(NgramPropertyTest, TrainedTextIsCheaperThanNoise) {
  const std::vector<std::string> corpus = {"there are five apples. the answer is 5."};
  const auto s = Make(corpus, 3);
  double seen = 0, noise = 0;
  for (const auto& t : s.Score("", "the answer is")) seen += t.loss;
  for (const auto& t : s.Score("", "xqz wvu kjy")) noise += t.loss;
  EXPECT_LT(seen, noise);
}

}  // namespace
}  // namespace ases
