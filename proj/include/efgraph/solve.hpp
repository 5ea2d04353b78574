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

#ifndef EFGRAPH_SOLVE_HPP
#define EFGRAPH_SOLVE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "efgraph/algorithms.hpp"
#include "efgraph/environment.hpp"
#include "efgraph/game_tree.hpp"

namespace efg {

struct SolveOptions {
  std::string algorithm = "cfr";
  // Overrides the algorithm's default traversal. Sampled algorithm names
  // only accept their own traversal.
  std::optional<Traversal> traversal;
  int iterations = 1000;
  std::uint64_t seed = 0;
  // 0 evaluates only the first and last iteration.
  int eval_every = 0;
  bool evaluate = true;
};

struct TraceRow {
  int iteration = 0;
  double exploitability_avg = 0.0;
  double exploitability_last = 0.0;
  double wall_ms = 0.0;
};

struct SolveResult {
  std::unique_ptr<Environment> env;
  RunConfig config;
  std::vector<TraceRow> trace;
  double wall_ms = 0.0;
};

Traversal parse_traversal(const std::string& name);

// Resolves the algorithm name and traversal override into a run config.
// Throws Error on unknown names or conflicting pairings.
RunConfig resolve_run_config(const SolveOptions& options);

// The training loop: update, update_strategy, and exploitability of the
// average and last iterate at iteration 0, every `eval_every` iterations and
// at the end. `wall_ms` excludes evaluation time. `on_row` sees each row as
// it is produced.
SolveResult solve(std::shared_ptr<const GameTree> tree, const SolveOptions& options,
                  const std::function<void(const TraceRow&)>& on_row = {});

std::string trace_header();
// `wall_clock` false writes 0 in the timing column so traces compare equal
// byte for byte.
std::string format_trace_row(const TraceRow& row, bool wall_clock = true);

}  // namespace efg

#endif  // EFGRAPH_SOLVE_HPP
