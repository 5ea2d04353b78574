// Copyright 2026 The efgraph Authors.
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

#ifndef EFGRAPH_TOOLS_COMMANDS_HPP
#define EFGRAPH_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace efg::cli {

// Runs the command line `args` (without the program name). Returns the exit
// code. Normal output goes to `out`, diagnostics to `err`; interact reads
// moves from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace efg::cli

#endif  // EFGRAPH_TOOLS_COMMANDS_HPP
