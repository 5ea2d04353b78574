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

#include "efgraph/algorithms.hpp"

#include <fmt/format.h>

#include "efgraph/error.hpp"

namespace efg {

namespace {

AlgorithmGraph build_regret_graph(bool truncate) {
  GraphBuilder g;
  AlgorithmGraph out;
  {
    PhaseScope scope(g, Phase::kStaticBackward);
    out.expectation = g.placeholder(0.0);
    const NodeRef ones = g.declare(ops::const_vector(1.0));
    out.strategy = g.declare(ops::normalize(ones));
    out.regret = g.declare(ops::const_vector(0.0));
  }
  {
    PhaseScope scope(g, Phase::kDynamicBackward);
    const NodeRef utility = g.declare(ops::builtin(Builtin::kUtility));
    const NodeRef children = g.declare(ops::aggregate(out.expectation, Aggregator::kSum));
    out.cf_value = g.declare(ops::add(utility, children));
    g.inplace(out.expectation, ops::dot(out.cf_value, out.strategy));
    const NodeRef advantage = g.declare(ops::sub(out.cf_value, out.expectation));
    if (truncate) {
      const NodeRef accumulated = g.declare(ops::add(out.regret, advantage));
      g.inplace(out.regret, ops::maximum(accumulated, 0.0));
    } else {
      g.inplace(out.regret, ops::add(out.regret, advantage));
    }
    const NodeRef positive = g.declare(ops::maximum(out.regret, 0.0));
    g.inplace(out.strategy, ops::normalize(positive, /*ignore_negative=*/true));
  }
  out.graph = std::move(g).seal();
  return out;
}

}  // namespace

AlgorithmGraph build_cfr_graph() { return build_regret_graph(false); }

AlgorithmGraph build_cfr_plus_graph() { return build_regret_graph(true); }

RunConfig build_sampled_variants(BaseAlgorithm base, Traversal traversal) {
  RunConfig config{"", base == BaseAlgorithm::kCfr ? build_cfr_graph() : build_cfr_plus_graph(),
                   traversal};
  const char* base_name = base == BaseAlgorithm::kCfr ? "cfr" : "cfr+";
  switch (traversal) {
    case Traversal::kEnumerate: config.name = base_name; break;
    case Traversal::kExternal: config.name = fmt::format("es-{}", base_name); break;
    case Traversal::kOutcome: config.name = fmt::format("os-{}", base_name); break;
  }
  return config;
}

RunConfig make_run_config(std::string_view algorithm) {
  if (algorithm == "cfr") return build_sampled_variants(BaseAlgorithm::kCfr, Traversal::kEnumerate);
  if (algorithm == "cfr+") {
    return build_sampled_variants(BaseAlgorithm::kCfrPlus, Traversal::kEnumerate);
  }
  if (algorithm == "es-cfr") {
    return build_sampled_variants(BaseAlgorithm::kCfr, Traversal::kExternal);
  }
  if (algorithm == "os-cfr") {
    return build_sampled_variants(BaseAlgorithm::kCfr, Traversal::kOutcome);
  }
  throw Error(fmt::format("unknown algorithm '{}' (expected cfr, cfr+, es-cfr, os-cfr)",
                          algorithm));
}

}  // namespace efg
