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

#include "efgraph/solve.hpp"

#include <chrono>

#include <fmt/format.h>

#include "efgraph/error.hpp"
#include "efgraph/evaluation.hpp"

namespace efg {

Traversal parse_traversal(const std::string& name) {
  if (name == "enumerate") return Traversal::kEnumerate;
  if (name == "external") return Traversal::kExternal;
  if (name == "outcome") return Traversal::kOutcome;
  throw Error(fmt::format("unknown traversal '{}' (expected enumerate, external, outcome)", name));
}

RunConfig resolve_run_config(const SolveOptions& options) {
  RunConfig config = make_run_config(options.algorithm);
  if (!options.traversal || *options.traversal == config.traversal) return config;
  if (config.traversal != Traversal::kEnumerate) {
    throw Error(fmt::format("algorithm '{}' requires traversal '{}', got '{}'", options.algorithm,
                            to_string(config.traversal), to_string(*options.traversal)));
  }
  const BaseAlgorithm base =
      options.algorithm == "cfr+" ? BaseAlgorithm::kCfrPlus : BaseAlgorithm::kCfr;
  return build_sampled_variants(base, *options.traversal);
}

SolveResult solve(std::shared_ptr<const GameTree> tree, const SolveOptions& options,
                  const std::function<void(const TraceRow&)>& on_row) {
  if (options.iterations < 0) throw Error("iterations must be nonnegative");
  if (options.eval_every < 0) throw Error("eval-every must be nonnegative");

  SolveResult result{nullptr, resolve_run_config(options), {}, 0.0};
  result.env = std::make_unique<Environment>(std::move(tree), result.config.traversal,
                                             options.seed);
  Environment& env = *result.env;
  env.set_graph(result.config.algorithm.graph);
  const NodeRef strategy = result.config.algorithm.strategy;

  using Clock = std::chrono::steady_clock;
  Clock::duration elapsed{};
  auto record = [&](int t) {
    if (!options.evaluate) return;
    TraceRow row;
    row.iteration = t;
    row.exploitability_avg = exploitability(env, strategy, StrategyMode::kAvgIterate).exploitability;
    row.exploitability_last =
        exploitability(env, strategy, StrategyMode::kLastIterate).exploitability;
    row.wall_ms = std::chrono::duration<double, std::milli>(elapsed).count();
    result.trace.push_back(row);
    if (on_row) on_row(row);
  };

  record(0);
  for (int t = 1; t <= options.iterations; ++t) {
    const auto start = Clock::now();
    env.update(strategy);
    env.update_strategy(strategy, StrategyMode::kAvgIterate);
    elapsed += Clock::now() - start;
    if (t == options.iterations || (options.eval_every > 0 && t % options.eval_every == 0)) {
      record(t);
    }
  }
  result.wall_ms = std::chrono::duration<double, std::milli>(elapsed).count();
  return result;
}

std::string trace_header() { return "iteration,exploitability_avg,exploitability_last,wall_ms"; }

std::string format_trace_row(const TraceRow& row, bool wall_clock) {
  return fmt::format("{},{:.17g},{:.17g},{:.3f}", row.iteration, row.exploitability_avg,
                     row.exploitability_last, wall_clock ? row.wall_ms : 0.0);
}

}  // namespace efg
