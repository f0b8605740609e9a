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

#ifndef ASES_COMMON_H_
#define ASES_COMMON_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ases {

// Base of every error raised by the library. The CLI maps the subclasses
// onto exit codes: UsageError -> 1, DataError -> 2, RemoteError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class RemoteError : public Error {
 public:
  using Error::Error;
};

// Raised by a SequenceScorer when context + continuation does not fit.
// Scorers never truncate silently.
class LengthExceededError : public Error {
 public:
  using Error::Error;
};

enum class Label { kES, kAS };

enum class Task { kMWP, kPET };

std::string_view LabelName(Label label);
Label ParseLabel(std::string_view name);

std::string_view TaskName(Task task);
Task ParseTask(std::string_view name);

// One (query, chain-of-thought target) pair.
struct CoTSample {
  std::string id;
  std::string query;
  std::string target;
  Task task = Task::kMWP;
  // Source report for PET sections; empty means the sample is its own report.
  std::string report_id;

  const std::string& ReportId() const { return report_id.empty() ? id : report_id; }
};

void ValidateSample(const CoTSample& sample);

}  // namespace ases

#endif  // ASES_COMMON_H_
