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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ases/dataset.h"
#include "ases/evaluation.h"
#include "ases/scoring.h"
#include "ases/segmentation.h"

namespace py = pybind11;

namespace {

ases::text::TokenizerKind Tokenizer(const std::string& name) {
  if (name == "word") return ases::text::TokenizerKind::kWord;
  if (name == "char") return ases::text::TokenizerKind::kChar;
  throw py::value_error("tokenizer must be 'word' or 'char'");
}

ases::DelimiterSet Delimiters(const std::optional<std::string>& chars) {
  return chars ? ases::ParseDelimiters(*chars) : ases::DefaultDelimiters();
}

}  // namespace

PYBIND11_MODULE(_ases, m) {
  m.doc() = "Bindings for the ases segmentation and metric core";

  py::register_exception<ases::UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<ases::DataError>(m, "DataError", PyExc_ValueError);

  m.def(
      "split_sub_sentences",
      [](const std::string& text, const std::optional<std::string>& delimiters) {
        std::vector<std::string> out;
        for (const auto& s : ases::SplitSubSentences(text, Delimiters(delimiters))) {
          out.push_back(s.text);
        }
        return out;
      },
      py::arg("text"), py::arg("delimiters") = py::none());

  m.def(
      "classify",
      [](const std::vector<double>& scores, double beta) {
        std::vector<std::string> out;
        for (auto l : ases::ClassifyByThreshold(scores, beta)) {
          out.emplace_back(ases::LabelName(l));
        }
        return out;
      },
      py::arg("scores"), py::arg("beta") = 1.0);

  m.def(
      "segment",
      [](const std::string& target, const std::string& strategy,
         const std::optional<std::vector<double>>& scores, double beta,
         const std::optional<std::string>& delimiters) {
        ases::SegmentationConfig cfg;
        cfg.strategy = ases::ParseStrategy(strategy);
        cfg.beta = beta;
        cfg.delimiters = Delimiters(delimiters);
        // Segmentation never reads the query; a placeholder satisfies validation.
        ases::CoTSample sample{"python", "-", target, ases::Task::kMWP, ""};
        std::optional<std::span<const double>> view;
        if (scores) view = std::span<const double>(*scores);
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& seg : ases::SegmentSample(sample, cfg, view)) {
          out.emplace_back(std::string(ases::LabelName(seg.label)), seg.text);
        }
        return out;
      },
      py::arg("target"), py::arg("strategy") = "inter", py::arg("scores") = py::none(),
      py::arg("beta") = 1.0, py::arg("delimiters") = py::none());

  m.def(
      "sentence_bleu",
      [](const std::string& c, const std::string& r, const std::string& tok) {
        return ases::SentenceBleu(c, r, Tokenizer(tok));
      },
      py::arg("candidate"), py::arg("reference"), py::arg("tokenizer") = "word");

  m.def(
      "rouge_l",
      [](const std::string& c, const std::string& r, const std::string& tok) {
        return ases::RougeL(c, r, Tokenizer(tok));
      },
      py::arg("candidate"), py::arg("reference"), py::arg("tokenizer") = "word");

  m.def(
      "corpus_bleu",
      [](const std::vector<std::string>& p, const std::vector<std::string>& r,
         const std::string& tok) { return ases::CorpusBleu(p, r, Tokenizer(tok)); },
      py::arg("predictions"), py::arg("references"), py::arg("tokenizer") = "word");

  m.def(
      "extract_answer",
      [](const std::string& text) { return ases::ExtractAnswer(text); }, py::arg("text"));

  m.def("injection_count", &ases::InjectionCount, py::arg("gamma"), py::arg("total_reports"));
}
