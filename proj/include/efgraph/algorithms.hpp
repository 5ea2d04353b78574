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

#ifndef EFGRAPH_ALGORITHMS_HPP
#define EFGRAPH_ALGORITHMS_HPP

#include <string>
#include <string_view>

#include "efgraph/environment.hpp"
#include "efgraph/graph.hpp"

namespace efg {

// A reference algorithm graph together with the nodes callers need.
struct AlgorithmGraph {
  ComputationGraph graph;
  NodeRef strategy;
  NodeRef regret;
  NodeRef expectation;
  NodeRef cf_value;
};

// Counterfactual regret minimization with regret matching.
//
//   static backward:  expectation <- 0 (placeholder)
//                     strategy    <- normalize(const_vector(1))
//                     regret      <- const_vector(0)
//   dynamic backward: cf          <- utility + aggregate(expectation, sum, children, self)
//                     expectation <- dot(cf, strategy)
//                     regret      <- regret + (cf - expectation)
//                     strategy    <- normalize(maximum(regret, 0), ignore_negative)
AlgorithmGraph build_cfr_graph();

// CFR+: as CFR but the accumulated regret is truncated at zero every step,
// regret <- maximum(regret + (cf - expectation), 0). Uniform averaging and
// simultaneous updates, so the only difference from CFR is the truncation.
AlgorithmGraph build_cfr_plus_graph();

enum class BaseAlgorithm { kCfr, kCfrPlus };

struct RunConfig {
  std::string name;
  AlgorithmGraph algorithm;
  Traversal traversal = Traversal::kEnumerate;
};

// Pairs a base graph with a traversal; the graph itself is unchanged.
RunConfig build_sampled_variants(BaseAlgorithm base, Traversal traversal);

// Resolves the CLI algorithm names cfr, cfr+, es-cfr, os-cfr. Throws Error
// on unknown names.
RunConfig make_run_config(std::string_view algorithm);

}  // namespace efg

#endif  // EFGRAPH_ALGORITHMS_HPP
