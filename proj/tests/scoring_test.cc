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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ases/evaluation.h"
#include "ases/jsonl.h"
#include "oracles.h"

namespace ases {
namespace {

using text::TokenizerKind;

TEST(EntropyTest, ClosedForms) {
  EXPECT_NEAR(DistributionEntropy(std::vector<double>{0.5, 0.5}), std::numbers::ln2, 1e-12);
  EXPECT_NEAR(DistributionEntropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}),
              std::log(4.0), 1e-12);
  EXPECT_EQ(DistributionEntropy(std::vector<double>{1.0, 0.0, 0.0}), 0.0);
}

TEST(EntropyTest, RejectsBadDistributions) {
  EXPECT_THROW(DistributionEntropy(std::vector<double>{0.5, 0.4}), UsageError);
  EXPECT_THROW(DistributionEntropy(std::vector<double>{1.5, -0.5}), UsageError);
  EXPECT_THROW(DistributionEntropy(std::vector<double>{}), UsageError);
}

// Scores each whitespace-free character as one token with a fixed
// per-token entropy and loss.
class FixedScorer : public SequenceScorer {
 public:
  FixedScorer(double entropy, double loss) : entropy_(entropy), loss_(loss) {}
  std::vector<TokenScore> Score(std::string_view, std::string_view cont) const override {
    std::vector<TokenScore> out;
    for (const auto& t : text::Tokenize(cont, TokenizerKind::kChar)) {
      out.push_back({t.text, -loss_, entropy_, loss_, t.begin, t.end});
    }
    return out;
  }
  ScorerDescriptor Descriptor() const override { return {ScorerKind::kNgramReference, "fixed", false}; }
  std::size_t VocabSize() const override { return 4; }

 private:
  double entropy_;
  double loss_;
};

CoTSample Sample(std::string query, std::string target) {
  return CoTSample{"x", std::move(query), std::move(target), Task::kMWP, ""};
}

TEST(ModelScoreTest, UniformScorerGivesLnFourAndAllEs) {
  const auto sample = Sample("q", "ab. cd. e f g.");
  const auto subs = SplitSubSentences(sample.target, DefaultDelimiters());
  const FixedScorer uniform(std::log(4.0), std::log(4.0));
  const auto m = ScoreSubSentencesModel(sample, subs, uniform, ModelMetric::kEntropy);
  ASSERT_EQ(m.size(), 3u);
  for (double v : m) EXPECT_NEAR(v, std::log(4.0), 1e-12);
  for (auto l : ClassifyByThreshold(m, 1.0)) EXPECT_EQ(l, Label::kES);
}

TEST(ModelScoreTest, OneHotScorerGivesZero) {
  const auto sample = Sample("q", "ab. cd.");
  const auto subs = SplitSubSentences(sample.target, DefaultDelimiters());
  const FixedScorer one_hot(0.0, 0.0);
  for (auto metric : {ModelMetric::kEntropy, ModelMetric::kLoss}) {
    const auto m = ScoreSubSentencesModel(sample, subs, one_hot, metric);
    EXPECT_EQ(m, (std::vector<double>{0.0, 0.0}));
  }
}

TEST(ModelScoreTest, MeanOfTokenEntropies) {
  const std::vector<SubSentence> subs = {{0, "ab", 0, 2}, {1, "cd", 2, 4}};
  const std::vector<TokenScore> tokens = {{"a", -1, 0.1, 1, 0, 1},
                                          {"b", -1, 0.3, 1, 1, 2},
                                          {"c", -1, 0.9, 1, 2, 3},
                                          {"d", -1, 0.7, 1, 3, 4}};
  const auto m = AggregateTokenScores(tokens, subs, ModelMetric::kEntropy);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_NEAR(m[0], 0.2, 1e-12);
  EXPECT_NEAR(m[1], 0.8, 1e-12);
}

TEST(ModelScoreTest, TokenSpanningBoundaryCountsForItsStart) {
  const std::vector<SubSentence> subs = {{0, "ab", 0, 2}, {1, "c", 2, 3}};
  const std::vector<TokenScore> tokens = {{"abc", -2, 0.6, 2, 0, 3}};
  const auto m = AggregateTokenScores(tokens, subs, ModelMetric::kLoss);
  EXPECT_EQ(m, (std::vector<double>{2.0, 2.0}));
}

TEST(BleuTest, IdenticalAndDisjoint) {
  EXPECT_DOUBLE_EQ(SentenceBleu("the cat sat on the mat", "the cat sat on the mat",
                                TokenizerKind::kWord),
                   1.0);
  EXPECT_EQ(SentenceBleu("red blue", "green yellow", TokenizerKind::kWord), 0.0);
  EXPECT_EQ(SentenceBleu("", "anything", TokenizerKind::kWord), 0.0);
}

TEST(BleuTest, ShortCandidateMatchesOracle) {
  const double got = SentenceBleu("the cat sat", "the cat sat down", TokenizerKind::kWord);
  EXPECT_NEAR(got, oracle::SentenceBleu("the cat sat", "the cat sat down"), 1e-12);
  EXPECT_NEAR(got, std::exp(-1.0 / 3.0), 1e-12);
}

TEST(BleuTest, RandomPairsMatchOracle) {
  std::vector<oracle::Pair> pairs;
  jsonl::ForEachLine(std::string(ASES_TEST_DATA) + "/metric_pairs.jsonl",
                     [&](const jsonl::Json& j, std::size_t) {
                       pairs.push_back({j["prediction"], j["reference"]});
                     });
  ASSERT_EQ(pairs.size(), 50u);
  for (const auto& p : pairs) {
    EXPECT_NEAR(SentenceBleu(p.prediction, p.reference, TokenizerKind::kWord),
                oracle::SentenceBleu(p.prediction, p.reference), 1e-12);
    EXPECT_NEAR(RougeL(p.prediction, p.reference, TokenizerKind::kWord),
                oracle::RougeLF(p.prediction, p.reference), 1e-12);
  }
}

TEST(RougeTest, HandComputedLcs) {
  const auto r = RougeLDetail("a b c", "a x b y", TokenizerKind::kWord);
  EXPECT_NEAR(r.precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.recall, 0.5, 1e-12);
  EXPECT_NEAR(r.f, 4.0 / 7.0, 1e-12);
  EXPECT_DOUBLE_EQ(RougeL("x y z", "x y z", TokenizerKind::kWord), 1.0);
  EXPECT_EQ(RougeL("x y z", "p q", TokenizerKind::kWord), 0.0);
  EXPECT_EQ(RougeL("", "p q", TokenizerKind::kWord), 0.0);
}

TEST(RougeTest, CharTokenizerForChinese) {
  const auto r = RougeLDetail("肝内病灶", "肝右叶病灶", TokenizerKind::kChar);
  EXPECT_NEAR(r.precision, 3.0 / 4.0, 1e-12);
  EXPECT_NEAR(r.recall, 3.0 / 5.0, 1e-12);
}

TEST(SimilarityTest, OrientationAndComposition) {
  const auto sample = Sample("Tom has five apples.", "Tom has five apples. Tom eats two red pears");
  const auto subs = SplitSubSentences(sample.target, DefaultDelimiters());
  ASSERT_EQ(subs.size(), 2u);
  const auto m = ScoreSubSentencesSimilarity(sample, subs, SimilarityMetric::kRouge,
                                             TokenizerKind::kWord);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_NEAR(m[0], 0.0, 1e-12);
  EXPECT_NEAR(m[1], 0.8, 1e-12);
  EXPECT_EQ(ClassifyByThreshold(m, 1.0), (std::vector<Label>{Label::kES, Label::kAS}));
}

TEST(SimilarityTest, BleuCopyAndDisjoint) {
  const auto sample = Sample("Tom has five apples.", "Tom has five apples. Zed quux");
  const auto subs = SplitSubSentences(sample.target, DefaultDelimiters());
  const auto m = ScoreSubSentencesSimilarity(sample, subs, SimilarityMetric::kBleu,
                                             TokenizerKind::kWord);
  EXPECT_NEAR(m[0], 0.0, 1e-12);
  EXPECT_NEAR(m[1], 1.0, 1e-12);
}

TEST(SimilarityTest, ShortCopiedClauseIsNotPenalised) {
  // A clause quoting part of the query is still fully similar.
  EXPECT_NEAR(QuerySimilarity("Tom has five apples and two pears.", "Tom has five apples",
                              SimilarityMetric::kBleu, TokenizerKind::kWord),
              1.0, 1e-12);
}

std::vector<oracle::Pair> MetricPairs() {
  std::vector<oracle::Pair> pairs;
  jsonl::ForEachLine(std::string(ASES_TEST_DATA) + "/metric_pairs.jsonl",
                     [&](const jsonl::Json& j, std::size_t) {
                       pairs.push_back({j["prediction"], j["reference"]});
                     });
  return pairs;
}

// Values frozen from sacrebleu (tokenize="none", smooth_method="none") and
// rouge-score (rougeL F, mean x100) by tools/freeze_metric_oracles.py.
TEST(CorpusMetricTest, FrozenReferenceValues) {
  const auto pairs = MetricPairs();
  std::vector<std::string> preds, refs;
  for (const auto& p : pairs) {
    preds.push_back(p.prediction);
    refs.push_back(p.reference);
  }
  EXPECT_NEAR(CorpusBleu(preds, refs, TokenizerKind::kWord), 62.481926193286, 1e-6);
  EXPECT_NEAR(MeanRougeL(preds, refs, TokenizerKind::kWord), 82.605928557759, 1e-6);
  EXPECT_NEAR(oracle::CorpusBleu(preds, refs), 62.481926193286, 1e-6);

  const std::vector<std::string> p25(preds.begin(), preds.begin() + 25);
  const std::vector<std::string> r25(refs.begin(), refs.begin() + 25);
  EXPECT_NEAR(CorpusBleu(p25, r25, TokenizerKind::kWord), 58.668384872007, 1e-6);
}

TEST(CorpusMetricTest, IdentityIsExactlyHundred) {
  const std::vector<std::string> xs = {"a b c d e", "one two", "肝内 病灶"};
  EXPECT_EQ(CorpusBleu(xs, xs, TokenizerKind::kWord), 100.0);
  EXPECT_EQ(MeanRougeL(xs, xs, TokenizerKind::kWord), 100.0);
}

TEST(BleuStatsTest, Accumulates) {
  const std::vector<std::string> a = {"x", "y", "x"};
  const std::vector<std::string> b = {"x", "y"};
  BleuStats s = CollectBleuStats(a, b, 2);
  EXPECT_EQ(s.matches, (std::vector<double>{2, 1}));
  EXPECT_EQ(s.totals, (std::vector<double>{3, 2}));
  s += CollectBleuStats(b, b, 2);
  EXPECT_EQ(s.matches, (std::vector<double>{4, 2}));
  EXPECT_EQ(s.candidate_length, 5.0);
  EXPECT_EQ(s.reference_length, 4.0);
}

TEST(ScorerKindTest, Names) {
  EXPECT_EQ(ParseScorerKind("ngram"), ScorerKind::kNgramReference);
  EXPECT_EQ(ParseScorerKind(ScorerKindName(ScorerKind::kRemoteAdapter)), ScorerKind::kRemoteAdapter);
  EXPECT_THROW(ParseScorerKind("gpt"), DataError);
}

}  // namespace
}  // namespace ases
