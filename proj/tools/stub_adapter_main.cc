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

// Serves the in-repo stub adapter until interrupted. With --corpus the score
// endpoint uses an n-gram scorer trained on query + target of that corpus.

#include <csignal>
#include <iostream>
#include <memory>
#include <thread>

#include "CLI11.hpp"

#include "ases/ngram_scorer.h"
#include "ases/pipeline.h"
#include "ases/testing/stub_adapter.h"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void OnSignal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stub model adapter"};
  std::string identity = "stub";
  std::string corpus;
  std::string reply = "<STOP>";
  bool fine_tuned = false;
  int order = 3;
  app.add_option("--identity", identity, "reported identity");
  app.add_flag("--fine-tuned", fine_tuned, "report fine_tuned = true");
  app.add_option("--corpus", corpus, "corpus JSONL for the n-gram score mode");
  app.add_option("--order", order, "n-gram order");
  app.add_option("--reply", reply, "fixed /v1/generate output");
  CLI11_PARSE(app, argc, argv);

  try {
    ases::testing::StubOptions options;
    options.identity = identity;
    options.fine_tuned = fine_tuned;
    options.generate = [reply](std::string_view) { return reply; };
    if (!corpus.empty()) {
      const auto samples = ases::LoadCorpus(corpus);
      options.scorer = ases::MakeNgramScorer(
          samples, fine_tuned ? ases::Strategy::kEnt : ases::Strategy::kEntStar, order);
      options.score_mode = ases::testing::StubScoreMode::kScorer;
    }
    ases::testing::StubAdapter adapter(options);
    std::signal(SIGINT, OnSignal);
    std::signal(SIGTERM, OnSignal);
    std::cout << adapter.url() << std::endl;
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
