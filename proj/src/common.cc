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

#include "ases/common.h"

#include <string>

namespace ases {

std::string_view LabelName(Label label) {
  return label == Label::kES ? "ES" : "AS";
}

Label ParseLabel(std::string_view name) {
  if (name == "ES") return Label::kES;
  if (name == "AS") return Label::kAS;
  throw DataError("unknown segment label '" + std::string(name) + "'");
}

std::string_view TaskName(Task task) {
  return task == Task::kMWP ? "MWP" : "PET";
}

Task ParseTask(std::string_view name) {
  if (name == "MWP" || name == "mwp") return Task::kMWP;
  if (name == "PET" || name == "pet" || name == "PET-like") return Task::kPET;
  throw DataError("unknown task '" + std::string(name) + "'");
}

void ValidateSample(const CoTSample& sample) {
  if (sample.query.empty()) {
    throw DataError("sample '" + sample.id + "': empty query");
  }
  if (sample.target.empty()) {
    throw DataError("sample '" + sample.id + "': empty target");
  }
}

}  // namespace ases
