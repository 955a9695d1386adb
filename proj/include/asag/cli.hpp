// Copyright 2026 The asag authors
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

#ifndef ASAG_CLI_HPP_
#define ASAG_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace asag {

/// Entry point behind the `asag` binary. args excludes argv[0].
/// Returns the process exit status: 0 on success, 2 for usage and path
/// errors, 1 for data/runtime errors. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace asag

#endif  // ASAG_CLI_HPP_
