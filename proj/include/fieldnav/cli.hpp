// Copyright 2026 The fieldnav Authors
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

// Batch entry points behind the fieldnav executable.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 domain
// rejection (scene rejected, goal invalid, query out of domain).

#ifndef FIELDNAV_CLI_HPP_
#define FIELDNAV_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace fieldnav::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRejected = 2;

// argv[0] is the program name. The first line written to `out` by every
// command is "# effective-config <json>".
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace fieldnav::cli

#endif  // FIELDNAV_CLI_HPP_
