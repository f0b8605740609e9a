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

#include "ases/cli.h"

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ases/config.h"
#include "ases/pipeline.h"

namespace ases {

namespace {

const std::map<std::string, std::string>& FlagHelp() {
  static const std::map<std::string, std::string> help = {
      {"task", "MWP or PET"},
      {"strategy", "ent, ent_star, inter, loss, bleu or rouge"},
      {"beta", "AS threshold multiplier on the mean score (default 1.0)"},
      {"gamma", "normal sections injected per training report (default 1.0)"},
      {"scorer", "ngram or remote"},
      {"ngram_order", "order of the n-gram reference scorer (default 3)"},
      {"adapter_url", "model adapter base URL (scorer, uni generator, conformance)"},
      {"esm_url", "extractive generator adapter URL (dual mode)"},
      {"asm_url", "abstractive generator adapter URL (dual mode)"},
      {"timeout_ms", "per-request adapter timeout"},
      {"max_in_flight", "concurrent requests per adapter"},
      {"retry_attempts", "attempts per adapter request"},
      {"split", "train,validation,test ratios (default 0.8,0.1,0.1)"},
      {"seed", "seed for splitting and normal-section sampling"},
      {"mode", "uni or dual"},
      {"generator", "replay (memorised training records) or remote"},
      {"max_iterations", "generation rounds before giving up (default 16)"},
      {"literal_second_check", "dual mode: never stop after an abstractive step"},
      {"joiner", "text inserted between steps that meet without whitespace"},
      {"max_new_tokens", "remote generation length limit"},
      {"jobs", "worker threads (default: logical CPUs)"},
      {"force", "evaluate inputs with different config hashes"},
      {"criterion", "best_train, best_loss or best_bleu"},
      {"separator", "text between the query and the chain-of-thought prefix"},
      {"stop_phrase", "MWP stop phrase"},
      {"stop_token", "PET stop token"},
      {"normal_target", "PET normal-finding sentence"},
      {"delimiters", "sub-sentence delimiter characters"},
      {"input", "input file"},
      {"output", "output file or directory"},
      {"scores", "score cache file"},
      {"records", "training record directory for the replay generator"},
      {"gold", "gold samples file"},
      {"keyword_map", "region keyword map"},
      {"normals", "normal region sections file"},
  };
  return help;
}

bool IsFlag(const std::string& key) { return key == "force" || key == "literal_second_check"; }

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chain-of-thought segmentation, dataset building, generation and evaluation"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "flat key = value config file");

  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
  for (const auto& key : ConfigKeys()) {
    std::string flag = "--" + key;
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    const auto& help = FlagHelp().at(key);
    options[key] = IsFlag(key) ? app.add_flag(flag, flags[key], help)
                               : app.add_option(flag, values[key], help);
  }

  using Command = std::function<CommandOutput(const RunConfig&)>;
  const std::vector<std::pair<std::string, std::pair<std::string, Command>>> commands = {
      {"score", {"score sub-sentences and cache the values", CmdScore}},
      {"segment", {"label and merge sub-sentences into ES/AS segments", CmdSegment}},
      {"build", {"build AS/ES/uni training sets and splits", CmdBuild}},
      {"generate", {"run dual-path or uni-path generation", CmdGenerate}},
      {"eval", {"score transcripts against gold samples", CmdEval}},
      {"inspect", {"summarise a corpus", CmdInspect}},
      {"split-report", {"cut PET reports into region sections", CmdSplitReport}},
      {"select-checkpoint", {"pick a checkpoint from a metric log", CmdSelectCheckpoint}},
      {"conformance", {"check an adapter against the /v1 protocol", CmdConformance}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) subs[name] = app.add_subcommand(name, entry.first);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    ConfigValues merged;
    if (!config_path.empty()) merged = LoadConfigFile(config_path);
    for (const auto& [key, opt] : options) {
      if (opt->count() == 0) continue;
      merged[key] = IsFlag(key) ? (flags[key] ? "true" : "false") : values[key];
    }
    const RunConfig config = BuildRunConfig(merged);
    for (const auto& [name, entry] : commands) {
      if (!subs[name]->parsed()) continue;
      const auto result = entry.second(config);
      out << result.text;
      return result.exit_code;
    }
    return 1;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const RemoteError& e) {
    err << "adapter error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ases
