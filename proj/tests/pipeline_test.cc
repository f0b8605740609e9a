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

// End-to-end runs of the command-line pipeline on the fixture corpora.

#include "ases/pipeline.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "ases/cli.h"
#include "ases/jsonl.h"
#include "ases/ngram_scorer.h"
#include "ases/testing/stub_adapter.h"

namespace ases {
namespace {

namespace fs = std::filesystem;

const fs::path kData = ASES_TEST_DATA;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ases");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) { return jsonl::ReadText(p); }

std::vector<jsonl::Json> Lines(const fs::path& p) {
  std::vector<jsonl::Json> out;
  jsonl::ForEachLine(p, [&](const jsonl::Json& j, std::size_t) { out.push_back(j); });
  return out;
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("ases_pipeline_") + info->test_suite_name() + "_" + info->name() + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    if (!HasFailure()) fs::remove_all(dir_);
  }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  void WriteConfig(const std::string& name, const std::string& body) {
    jsonl::WriteText(dir_ / name, body);
  }

  // score -> segment -> build -> generate -> eval under dir_/sub.
  void RunMwp(const std::string& sub, const std::string& strategy, const std::string& mode,
              const std::string& jobs) {
    fs::create_directories(dir_ / sub);
    const std::string conf = P(sub + "/run.conf");
    jsonl::WriteText(conf, "task = MWP\nstrategy = " + strategy + "\nseed = 7\njobs = " + jobs +
                               "\nmode = " + mode + "\n");
    const std::string in = (kData / "fixture_mwp.jsonl").string();
    if (strategy != "inter") {
      auto r = Cli({"score", "--config", conf, "--input", in, "--output", P(sub + "/scores.jsonl")});
      ASSERT_EQ(r.code, 0) << r.err;
    }
    auto r = Cli({"segment", "--config", conf, "--input", in, "--scores", P(sub + "/scores.jsonl"),
                  "--output", P(sub + "/segmented.jsonl")});
    ASSERT_EQ(r.code, 0) << r.err;
    r = Cli({"build", "--config", conf, "--input", P(sub + "/segmented.jsonl"), "--output",
             P(sub + "/bundle")});
    ASSERT_EQ(r.code, 0) << r.err;
    r = Cli({"generate", "--config", conf, "--input", P(sub + "/bundle/test.samples.jsonl"),
             "--records", P(sub + "/bundle/test"), "--output", P(sub + "/transcripts.jsonl")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("generated 10 transcripts (" + mode + "): 10 stop_sign"),
              std::string::npos)
        << r.out;
    r = Cli({"eval", "--config", conf, "--input", P(sub + "/transcripts.jsonl"), "--gold",
             P(sub + "/bundle/test.samples.jsonl"), "--output", P(sub + "/report.json")});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  fs::path dir_;
};

TEST_F(PipelineTest, MwpDualEndToEnd) {
  RunMwp("a", "ent", "dual", "2");
  const auto report = jsonl::Json::parse(Slurp(dir_ / "a/report.json"));
  EXPECT_EQ(report["accuracy"], 1.0);
  EXPECT_EQ(report["corpus_bleu"], 100.0);
  EXPECT_TRUE(report["missing_ratio"].is_null());
  EXPECT_EQ(report["n_samples"], 10);

  const auto meta = jsonl::Json::parse(Slurp(dir_ / "a/bundle/bundle.meta.json"));
  EXPECT_EQ(meta["counts"]["train"]["samples"], 80);
  EXPECT_EQ(meta["counts"]["validation"]["samples"], 10);
  EXPECT_EQ(meta["counts"]["test"]["samples"], 10);
  EXPECT_EQ(meta["scorer"], "ngram-o3-cot");
  for (const char* split : {"train", "validation", "test"}) {
    const auto as = Lines(dir_ / "a/bundle" / split / "as.jsonl").size();
    const auto es = Lines(dir_ / "a/bundle" / split / "es.jsonl").size();
    EXPECT_EQ(Lines(dir_ / "a/bundle" / split / "uni.jsonl").size(), as + es);
  }
  // Every artifact line carries the run's config hash.
  const std::string hash = meta["config_hash"];
  for (const auto* f : {"a/scores.jsonl", "a/segmented.jsonl", "a/bundle/train/es.jsonl",
                        "a/transcripts.jsonl"}) {
    for (const auto& j : Lines(dir_ / f)) ASSERT_EQ(j["config_hash"], hash) << f;
  }
  EXPECT_EQ(report["config_hash"], hash);
}

TEST_F(PipelineTest, MwpUniInterEndToEnd) {
  RunMwp("u", "inter", "uni", "1");
  const auto report = jsonl::Json::parse(Slurp(dir_ / "u/report.json"));
  EXPECT_EQ(report["accuracy"], 1.0);
  EXPECT_FALSE(fs::exists(dir_ / "u/scores.jsonl"));
  for (const auto& t : Lines(dir_ / "u/transcripts.jsonl")) {
    for (const auto& s : t["steps"]) EXPECT_EQ(s["role"], "UNI");
  }
}

TEST_F(PipelineTest, DeterministicAcrossRunsAndJobCounts) {
  RunMwp("one", "ent", "dual", "1");
  RunMwp("two", "ent", "dual", "4");
  for (const auto* f : {"scores.jsonl", "segmented.jsonl", "bundle/train/as.jsonl",
                        "bundle/train/es.jsonl", "bundle/train/uni.jsonl", "bundle/test.samples.jsonl",
                        "bundle/bundle.meta.json", "transcripts.jsonl", "report.json"}) {
    EXPECT_EQ(Slurp(dir_ / "one" / f), Slurp(dir_ / "two" / f)) << f;
  }
}

TEST_F(PipelineTest, PetSplitReportReproducesFixtures) {
  auto r = Cli({"split-report", "--task", "PET", "--input", (kData / "fixture_reports.jsonl").string(),
                "--keyword-map", (kData / "keyword_map.txt").string(), "--output", P("pet.jsonl"),
                "--normals", P("normals.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("split 50 reports: 100 abnormal sections, 50 normal sections"),
            std::string::npos)
      << r.out;
  auto strip = [](std::vector<jsonl::Json> rows) {
    for (auto& j : rows) j.erase("config_hash");
    return rows;
  };
  EXPECT_EQ(strip(Lines(P("pet.jsonl"))), Lines(kData / "fixture_pet.jsonl"));
  EXPECT_EQ(strip(Lines(P("normals.jsonl"))), Lines(kData / "fixture_pet_normals.jsonl"));
}

TEST_F(PipelineTest, PetEndToEndWithInjection) {
  WriteConfig("pet.conf", "task = PET\nstrategy = ent\ngamma = 0.5\nseed = 11\n");
  const std::string conf = P("pet.conf");
  const std::string in = (kData / "fixture_pet.jsonl").string();
  ASSERT_EQ(Cli({"score", "--config", conf, "--input", in, "--output", P("s.jsonl")}).code, 0);
  ASSERT_EQ(Cli({"segment", "--config", conf, "--input", in, "--scores", P("s.jsonl"), "--output",
                 P("seg.jsonl")})
                .code,
            0);
  auto r = Cli({"build", "--config", conf, "--input", P("seg.jsonl"), "--output", P("b"),
                "--normals", (kData / "fixture_pet_normals.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto meta = jsonl::Json::parse(Slurp(dir_ / "b/bundle.meta.json"));
  EXPECT_EQ(meta["counts"]["train"]["reports"], 40);
  EXPECT_EQ(meta["counts"]["train"]["injected"], 20);
  EXPECT_EQ(meta["counts"]["test"]["injected"], 0);
  std::size_t normal_rows = 0;
  for (const auto& j : Lines(dir_ / "b/train/es.jsonl")) {
    if (j["target"] == "No obvious anomaly<STOP>") {
      ++normal_rows;
      EXPECT_TRUE(j["is_final"].get<bool>());
    }
  }
  EXPECT_EQ(normal_rows, 20u);
  // Sections of a report never straddle splits.
  std::map<std::string, std::string> split_of;
  for (const char* split : {"train", "validation", "test"}) {
    for (const auto& j : Lines(dir_ / "b" / (std::string(split) + ".samples.jsonl"))) {
      auto [it, inserted] = split_of.emplace(j["report_id"].get<std::string>(), split);
      EXPECT_TRUE(inserted || it->second == split);
    }
  }

  r = Cli({"generate", "--config", conf, "--input", P("b/test.samples.jsonl"), "--records",
           P("b/test"), "--output", P("t.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = Cli({"eval", "--config", conf, "--input", P("t.jsonl"), "--gold", P("b/test.samples.jsonl"),
           "--keyword-map", (kData / "keyword_map.txt").string(), "--output", P("report.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = jsonl::Json::parse(Slurp(dir_ / "report.json"));
  EXPECT_EQ(report["missing_ratio"], 0.0);
  EXPECT_EQ(report["corpus_bleu"], 100.0);
  EXPECT_TRUE(report["accuracy"].is_null());
}

TEST_F(PipelineTest, GammaZeroInjectsNothing) {
  const std::string in = (kData / "fixture_pet.jsonl").string();
  ASSERT_EQ(Cli({"segment", "--task", "PET", "--strategy", "inter", "--input", in, "--output",
                 P("seg.jsonl")})
                .code,
            0);
  auto r = Cli({"build", "--task", "PET", "--strategy", "inter", "--gamma", "0", "--seed", "3",
                "--input", P("seg.jsonl"), "--output", P("b")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& j : Lines(dir_ / "b/train/es.jsonl")) {
    EXPECT_NE(j["target"], "No obvious anomaly<STOP>");
  }
  r = Cli({"build", "--task", "PET", "--strategy", "inter", "--seed", "3", "--input",
           P("seg.jsonl"), "--output", P("b2")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--normals"), std::string::npos);
}

TEST_F(PipelineTest, BetaSweepShrinksAsSet) {
  const std::string in = (kData / "fixture_mwp.jsonl").string();
  ASSERT_EQ(Cli({"score", "--input", in, "--output", P("s.jsonl")}).code, 0);
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (const char* beta : {"0.8", "1.0", "1.2"}) {
    const std::string out = P(std::string("seg") + beta + ".jsonl");
    auto r = Cli({"segment", "--beta", beta, "--input", in, "--scores", P("s.jsonl"), "--output", out});
    ASSERT_EQ(r.code, 0) << r.err;
    std::size_t as_subs = 0;
    for (const auto& j : Lines(out)) {
      for (const auto& seg : j["segments"]) {
        if (seg["label"] == "AS") as_subs += seg["member_indices"].size();
      }
    }
    EXPECT_LE(as_subs, previous) << beta;
    EXPECT_GT(as_subs, 0u);
    previous = as_subs;
  }
}

TEST_F(PipelineTest, SegmentErrors) {
  const std::string in = (kData / "fixture_mwp.jsonl").string();
  auto r = Cli({"segment", "--input", in, "--output", P("seg.jsonl")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ases score"), std::string::npos) << r.err;

  // inter ignores a cache, even one computed for another strategy.
  ASSERT_EQ(Cli({"score", "--strategy", "rouge", "--input", in, "--output", P("s.jsonl")}).code, 0);
  EXPECT_EQ(Cli({"segment", "--strategy", "inter", "--input", in, "--scores", P("s.jsonl"),
                 "--output", P("seg.jsonl")})
                .code,
            0);
  r = Cli({"segment", "--strategy", "ent", "--input", in, "--scores", P("s.jsonl"), "--output",
           P("seg2.jsonl")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("strategy rouge"), std::string::npos) << r.err;
}

TEST_F(PipelineTest, ExitCodes) {
  const std::string in = (kData / "fixture_mwp.jsonl").string();
  EXPECT_EQ(Cli({"score", "--no-such-flag"}).code, 1);
  EXPECT_EQ(Cli({}).code, 1);
  EXPECT_EQ(Cli({"score", "--input", in}).code, 1);  // no --output
  EXPECT_EQ(Cli({"score", "--beta", "-2", "--input", in, "--output", P("x")}).code, 1);
  EXPECT_EQ(Cli({"score", "--input", in, "--output", in}).code, 1);  // same path twice

  auto r = Cli({"score", "--input", P("missing.jsonl"), "--output", P("x.jsonl")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing.jsonl"), std::string::npos);

  jsonl::WriteText(dir_ / "bad.jsonl", "{\"id\":\"a\",\"query\":\"q\",\"target\":\"t\",\"task\":\"MWP\"}\n{oops\n");
  r = Cli({"score", "--input", P("bad.jsonl"), "--output", P("x.jsonl")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.jsonl:2"), std::string::npos) << r.err;

  r = Cli({"score", "--task", "PET", "--input", in, "--output", P("x.jsonl")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("configured for PET"), std::string::npos) << r.err;

  ASSERT_EQ(Cli({"segment", "--strategy", "inter", "--input", in, "--output", P("seg.jsonl")}).code, 0);
  r = Cli({"build", "--strategy", "inter", "--input", P("seg.jsonl"), "--output", P("b")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--seed"), std::string::npos);

  r = Cli({"generate", "--generator", "remote", "--input", in, "--output", P("t.jsonl"),
           "--adapter-url", "http://127.0.0.1:1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--esm-url"), std::string::npos);

  r = Cli({"score", "--scorer", "remote", "--adapter-url", "http://127.0.0.1:1", "--retry-attempts",
           "1", "--input", in, "--output", P("x.jsonl")});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST_F(PipelineTest, BinaryReportsExitCodes) {
  const std::string cli = ASES_CLI_PATH;
  auto run = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("inspect --input " + P("nope.jsonl")), 2);
  EXPECT_EQ(run("inspect --input " + (kData / "fixture_mwp.jsonl").string()), 0);
}

TEST_F(PipelineTest, RemoteScorerMatchesLocalAndParsesBack) {
  const std::string in = (kData / "fixture_mwp.jsonl").string();
  const auto samples = LoadCorpus(in);
  std::shared_ptr<SequenceScorer> local = MakeNgramScorer(samples, Strategy::kEnt, 3);
  testing::StubOptions o;
  o.identity = "stub-ngram";
  o.fine_tuned = true;
  o.score_mode = testing::StubScoreMode::kScorer;
  o.scorer = local;
  testing::StubAdapter stub(o);

  ASSERT_EQ(Cli({"score", "--input", in, "--output", P("local.jsonl")}).code, 0);
  auto r = Cli({"score", "--scorer", "remote", "--adapter-url", stub.url(), "--input", in,
                "--output", P("remote.jsonl"), "--jobs", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto a = LoadScoreCache(P("local.jsonl"));
  const auto b = LoadScoreCache(P("remote.jsonl"));
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [id, v] : a) {
    const auto& w = b.at(id);
    EXPECT_EQ(w.scorer.identity, "stub-ngram");
    EXPECT_EQ(w.scorer.kind, ScorerKind::kRemoteAdapter);
    ASSERT_EQ(v.values.size(), w.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i) EXPECT_NEAR(v.values[i], w.values[i], 1e-12);
  }
  // Lossless: writing the parsed cache again reproduces the file.
  for (const auto& j : Lines(P("remote.jsonl"))) {
    auto copy = ScoreVectorToJson(ScoreVectorFromJson(j));
    copy["config_hash"] = j["config_hash"];
    EXPECT_EQ(copy, j);
  }

  r = Cli({"score", "--strategy", "ent_star", "--scorer", "remote", "--adapter-url", stub.url(),
           "--input", in, "--output", P("star.jsonl")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("fine_tuned"), std::string::npos) << r.err;
}

TEST_F(PipelineTest, RemoteDualGeneration) {
  testing::StubOptions es, as;
  es.identity = "esm";
  es.generate = [](std::string_view input) {
    return input.ends_with("|") ? std::string("Tom has 2. ") : std::string("The answer is 5.");
  };
  as.identity = "asm";
  as.generate = [](std::string_view) { return std::string("2 + 3 = 5. "); };
  testing::StubAdapter esm(es), asm_(as);
  jsonl::WriteText(dir_ / "q.jsonl",
                   "{\"id\":\"a\",\"query\":\"Q1\",\"target\":\"The answer is 5.\",\"task\":\"MWP\"}\n"
                   "{\"id\":\"b\",\"query\":\"Q2\",\"target\":\"The answer is 5.\",\"task\":\"MWP\"}\n");
  auto r = Cli({"generate", "--generator", "remote", "--esm-url", esm.url(), "--asm-url", asm_.url(),
                "--seed", "1", "--input", P("q.jsonl"), "--output", P("t.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("2 stop_sign"), std::string::npos);
  for (const auto& t : Lines(P("t.jsonl"))) {
    EXPECT_EQ(t["final_output"], "Tom has 2. 2 + 3 = 5. The answer is 5.");
  }
  r = Cli({"generate", "--generator", "remote", "--mode", "uni", "--max-iterations", "2",
           "--adapter-url", asm_.url(), "--input", P("q.jsonl"), "--output", P("u.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0 stop_sign, 2 max_iterations, 0 generator_error"), std::string::npos)
      << r.out;
}

TEST_F(PipelineTest, EvalExamples) {
  jsonl::WriteText(dir_ / "gold.jsonl",
                   "{\"id\":\"1\",\"query\":\"q\",\"target\":\"The answer is 3.\",\"task\":\"MWP\"}\n"
                   "{\"id\":\"2\",\"query\":\"q\",\"target\":\"The answer is 4.\",\"task\":\"MWP\"}\n"
                   "{\"id\":\"3\",\"query\":\"q\",\"target\":\"The answer is 1,200.\",\"task\":\"MWP\"}\n"
                   "{\"id\":\"4\",\"query\":\"q\",\"target\":\"The answer is 6.\",\"task\":\"MWP\"}\n");
  auto t = [](const std::string& id, const std::string& out) {
    return "{\"sample_id\":\"" + id + "\",\"mode\":\"uni\",\"steps\":[{\"role\":\"UNI\",\"text\":\"" +
           out + "\"}],\"final_output\":\"" + out + "\",\"termination\":\"stop_sign\"}\n";
  };
  jsonl::WriteText(dir_ / "t.jsonl", t("4", "the answer is 7.") + t("1", "The answer is 3.") +
                                         t("2", "so the answer is 4.0") + t("3", "The answer is 1200."));
  auto r = Cli({"eval", "--input", P("t.jsonl"), "--gold", P("gold.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("accuracy        0.7500"), std::string::npos) << r.out;

  jsonl::WriteText(dir_ / "pgold.jsonl",
                   "{\"id\":\"1\",\"query\":\"q\",\"target\":\"肝脏恶性病变可能。肺癌可能性大。\",\"task\":\"PET\"}\n"
                   "{\"id\":\"2\",\"query\":\"q\",\"target\":\"胰腺癌可能。骨转移可能。\",\"task\":\"PET\"}\n");
  auto pt = [](const std::string& id, const std::string& out) {
    return "{\"sample_id\":\"" + id + "\",\"steps\":[],\"final_output\":\"" + out +
           "\",\"termination\":\"stop_sign\"}\n";
  };
  jsonl::WriteText(dir_ / "pt.jsonl", pt("1", "肝脏恶性病变可能。肺癌可能性大。<STOP>") +
                                          pt("2", "胰腺癌可能。<STOP>"));
  r = Cli({"eval", "--task", "PET", "--keyword-map", (kData / "keyword_map.txt").string(),
           "--input", P("pt.jsonl"), "--gold", P("pgold.jsonl"), "--output", P("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(jsonl::Json::parse(Slurp(dir_ / "r.json"))["missing_ratio"], 25.0);
  EXPECT_NE(r.out.find("MR              25.00"), std::string::npos) << r.out;

  r = Cli({"eval", "--task", "PET", "--input", P("pt.jsonl"), "--gold", P("pgold.jsonl")});
  EXPECT_EQ(r.code, 1);
}

TEST_F(PipelineTest, EvalRefusesMixedHashes) {
  jsonl::WriteText(dir_ / "gold.jsonl",
                   "{\"id\":\"1\",\"query\":\"q\",\"target\":\"The answer is 3.\",\"task\":\"MWP\",\"config_hash\":\"aaaa\"}\n");
  jsonl::WriteText(dir_ / "t.jsonl",
                   "{\"sample_id\":\"1\",\"steps\":[],\"final_output\":\"The answer is 3.\",\"termination\":\"stop_sign\",\"config_hash\":\"bbbb\"}\n");
  auto r = Cli({"eval", "--input", P("t.jsonl"), "--gold", P("gold.jsonl")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--force"), std::string::npos);
  r = Cli({"eval", "--force", "--input", P("t.jsonl"), "--gold", P("gold.jsonl")});
  EXPECT_EQ(r.code, 0) << r.err;

  jsonl::WriteText(dir_ / "t2.jsonl",
                   "{\"sample_id\":\"9\",\"steps\":[],\"final_output\":\"x\",\"termination\":\"stop_sign\"}\n");
  EXPECT_EQ(Cli({"eval", "--force", "--input", P("t2.jsonl"), "--gold", P("gold.jsonl")}).code, 2);
}

TEST_F(PipelineTest, InspectAndSelectCheckpoint) {
  auto r = Cli({"inspect", "--input", (kData / "fixture_mwp.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("samples          100"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("no stop phrase   0 (0.0%)"), std::string::npos) << r.out;

  jsonl::WriteText(dir_ / "log.jsonl",
                   "{\"step\":1,\"train_loss\":3,\"val_loss\":2,\"val_bleu\":10}\n"
                   "{\"step\":2,\"train_loss\":2,\"val_loss\":2.5,\"val_bleu\":10}\n"
                   "{\"step\":3,\"train_loss\":2.5,\"val_loss\":1.5,\"val_bleu\":9}\n");
  EXPECT_EQ(Cli({"select-checkpoint", "--input", P("log.jsonl")}).out, "2\n");
  EXPECT_EQ(Cli({"select-checkpoint", "--criterion", "best_loss", "--input", P("log.jsonl")}).out, "3\n");
  EXPECT_EQ(Cli({"select-checkpoint", "--criterion", "best_bleu", "--input", P("log.jsonl")}).out, "1\n");
  EXPECT_EQ(Cli({"select-checkpoint", "--criterion", "best", "--input", P("log.jsonl")}).code, 1);
}

TEST_F(PipelineTest, ConformanceCommand) {
  testing::StubAdapter good;
  auto r = Cli({"conformance", "--adapter-url", good.url()});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  testing::StubOptions o;
  o.score_mode = testing::StubScoreMode::kBadLoss;
  testing::StubAdapter bad(o);
  r = Cli({"conformance", "--adapter-url", bad.url()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("FAIL score_single_char"), std::string::npos) << r.out;
}

TEST_F(PipelineTest, ConfigFileAndFlagOverride) {
  WriteConfig("c.conf", "task = MWP\nstrategy = inter\n");
  const std::string in = (kData / "fixture_mwp.jsonl").string();
  auto r = Cli({"segment", "--config", P("c.conf"), "--input", in, "--output", P("a.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = Cli({"segment", "--config", P("c.conf"), "--strategy", "ent", "--input", in, "--output",
           P("b.jsonl")});
  EXPECT_EQ(r.code, 1);  // flag wins, and ent needs scores
  WriteConfig("bad.conf", "strategy = inter\nbetta = 2\n");
  r = Cli({"segment", "--config", P("bad.conf"), "--input", in, "--output", P("c.jsonl")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

}  // namespace
}  // namespace ases
