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

#ifndef ASES_CLI_H_
#define ASES_CLI_H_

#include <ostream>

namespace ases {

// Entry point of the `ases` tool. Returns the process exit code:
// 0 success, 1 usage error, 2 data error, 3 remote adapter error.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ases

#endif  // ASES_CLI_H_
