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

#ifndef EFGRAPH_ENVIRONMENT_HPP
#define EFGRAPH_ENVIRONMENT_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "efgraph/game_tree.hpp"
#include "efgraph/graph.hpp"

namespace efg {

enum class Traversal { kEnumerate, kExternal, kOutcome };
enum class StrategyMode { kAvgIterate, kLastIterate };

const char* to_string(Traversal traversal);

// Quantities the engine supplies to the graph for one update.
//
// utility[s][a] sums, over members h of s, the terminal payoffs first reached
// from (h, a) without passing another decision of s's owner, weighted by the
// reach of everyone else. Contributions of deeper own infosets are left to
// the graph (Aggregate over children). Sampled traversals replace the weights
// with unbiased estimates and only fill rows of touched infosets.
struct BuiltinBundle {
  std::vector<std::vector<double>> utility;
  std::vector<double> reach_prob;
  std::vector<char> touched;
};

// Sampling policy floor used by outcome sampling.
inline constexpr double kOutcomeExploration = 0.01;

// Binds a game tree to a computation graph. Single-threaded; several
// environments may share one tree.
class Environment {
 public:
  using TraceFn = std::function<void(Phase phase, int infoset, int node)>;

  explicit Environment(std::shared_ptr<const GameTree> tree,
                       Traversal traversal = Traversal::kEnumerate, std::uint64_t seed = 0);
  explicit Environment(GameTree tree, Traversal traversal = Traversal::kEnumerate,
                       std::uint64_t seed = 0);

  // Allocates storage and runs both static phases. Resets the iteration
  // counter and the strategy accumulators.
  void set_graph(ComputationGraph graph);

  // Runs one dynamic pass using the profile held by `strategy`. External
  // sampling traverses for player (iteration mod N) + 1.
  void update(NodeRef strategy);

  // Adds the current sequence-form strategy to the running average
  // (avg-iterate) or replaces it (last-iterate).
  void update_strategy(NodeRef strategy, StrategyMode mode = StrategyMode::kAvgIterate);

  // avg-iterate normalizes the accumulator per infoset, uniform where no mass
  // has been accumulated yet.
  BehavioralProfile current_profile(NodeRef strategy, StrategyMode mode) const;

  // `external_player` selects the traversing player for external sampling;
  // 0 runs one pass per player.
  BuiltinBundle compute_builtins(const BehavioralProfile& profile, Traversal traversal,
                                 std::mt19937_64& rng, int external_player = 0) const;

  // Value of an Aggregate op at `infoset` using the current storage.
  Variable evaluate_aggregate(int infoset, const Op& op) const;

  const Variable& variable(NodeRef node, int infoset) const;
  void set_variable(NodeRef node, int infoset, Variable value);

  // Reads `strategy` at every infoset. Throws GraphError(kInvalidStrategy)
  // when a row is not a simplex vector within `tolerance`.
  BehavioralProfile read_profile(NodeRef strategy, double tolerance = 1e-6) const;

  const GameTree& tree() const { return *tree_; }
  std::shared_ptr<const GameTree> shared_tree() const { return tree_; }
  const ComputationGraph& graph() const;
  Traversal traversal() const { return traversal_; }
  int iteration() const { return iteration_; }
  const std::vector<int>& topological_order() const { return order_; }
  // Raw accumulated sequence-form mass for `strategy`, empty if none.
  const std::vector<std::vector<double>>& accumulator(NodeRef strategy) const;

  // First-reached descendant infosets under (infoset, action), owned by the
  // infoset's owner (kSelf) or by anyone else (kOpponents).
  std::span<const int> children(int infoset, int action, PlayerScope scope) const;
  std::optional<Sequence> parent(int infoset, PlayerScope scope) const;

  void set_trace(TraceFn trace) { trace_ = std::move(trace); }

 private:
  struct ChildIndex {
    std::vector<int> offsets;  // per (infoset, action) into `items`
    std::vector<int> items;
  };

  void index_tree();
  void run_phase(Phase phase, const std::vector<int>& infosets);
  void run_step(const Step& step, int infoset);
  void compute_into(const BehavioralProfile& profile, Traversal traversal, int external_player,
                    std::mt19937_64& rng, BuiltinBundle& out) const;
  void enumerate(const BehavioralProfile& profile, BuiltinBundle& out) const;
  double external_walk(const BehavioralProfile& profile, int player, int node,
                       std::mt19937_64& rng, BuiltinBundle& out) const;
  void outcome(const BehavioralProfile& profile, std::mt19937_64& rng, BuiltinBundle& out) const;
  void load_profile(NodeRef strategy, double tolerance, BehavioralProfile& out) const;
  void fill_reach(const BehavioralProfile& profile, BuiltinBundle& out) const;
  void aggregate_into(int infoset, const Op& op, Variable& out) const;
  std::size_t slot(int node, int infoset) const {
    return static_cast<std::size_t>(infoset) * static_cast<std::size_t>(num_graph_nodes_) +
           static_cast<std::size_t>(node);
  }

  std::shared_ptr<const GameTree> tree_;
  Traversal traversal_;
  std::mt19937_64 rng_;

  std::vector<int> order_;
  std::vector<int> reverse_order_;
  std::vector<int> action_offset_;  // per infoset into (infoset, action) arrays
  ChildIndex self_children_;
  ChildIndex opponent_children_;
  std::vector<std::optional<Sequence>> opponent_parent_;

  std::optional<ComputationGraph> graph_;
  int num_graph_nodes_ = 0;
  std::vector<Variable> storage_;
  int iteration_ = 0;
  std::map<int, std::vector<std::vector<double>>> accumulators_;

  // Per-update state.
  BuiltinBundle builtins_;
  BehavioralProfile profile_;
  bool restrict_children_ = false;
  Variable scratch_;
  std::vector<Variable> literal_scratch_;
  mutable std::vector<double> node_reach_;
  mutable std::vector<double> node_value_;
  mutable std::vector<double> gather_;

  TraceFn trace_;
};

}  // namespace efg

#endif  // EFGRAPH_ENVIRONMENT_HPP
