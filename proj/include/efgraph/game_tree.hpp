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

#ifndef EFGRAPH_GAME_TREE_HPP
#define EFGRAPH_GAME_TREE_HPP

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace efg {

inline constexpr int kNone = -1;
// Player index used for chance nodes; real players are numbered 1..N.
inline constexpr int kChancePlayer = 0;

enum class NodeKind { kChance, kPlayer, kTerminal };

// (infoset, action index) pair identifying a decision sequence.
struct Sequence {
  int infoset = kNone;
  int action = kNone;

  auto operator<=>(const Sequence&) const = default;
};

struct GameNode {
  int id = 0;
  NodeKind kind = NodeKind::kTerminal;
  // 1..N for player nodes, kChancePlayer otherwise.
  int player = kChancePlayer;
  std::string name;
  std::vector<std::string> actions;
  // Parallel to `actions`; chance nodes only.
  std::vector<double> chance_probs;
  // One entry per player; terminal nodes only.
  std::vector<double> payoffs;
  // Child node id per action.
  std::vector<int> children;
  int parent = kNone;
  int parent_action = kNone;
  int infoset = kNone;
  int depth = 0;

  bool is_terminal() const { return kind == NodeKind::kTerminal; }
  bool is_chance() const { return kind == NodeKind::kChance; }
  bool is_player() const { return kind == NodeKind::kPlayer; }
};

struct Infoset {
  int id = 0;
  int player = 1;
  std::string name;
  std::vector<int> members;
  std::vector<std::string> actions;
  int action_count = 0;
  // Last own decision before reaching this infoset; empty at the player's
  // first decision.
  std::optional<Sequence> parent_sequence;
  // Position in infoset_topological_order().
  int depth = 0;
};

// Plain data. Use GameTreeBuilder to obtain a tree whose derived fields
// (children, depth, infoset links) are consistent; validate_game() reports
// on anything else.
struct GameTree {
  int num_players = 0;
  std::string name;
  std::vector<GameNode> nodes;
  std::vector<Infoset> infosets;

  const GameNode& root() const { return nodes.front(); }
  std::vector<int> infosets_of(int player) const;
  int num_terminals() const;
};

struct Violation {
  std::string message;
  int node = kNone;
  int infoset = kNone;
};

// Returns every structural problem found; an empty result means the tree is
// a well-formed perfect-recall game.
std::vector<Violation> validate_game(const GameTree& tree);

// Total order over all infosets in which ancestors precede descendants.
// Ties go to the smaller minimal member depth, then the smaller id.
// Throws GameError(kCyclicInfosets) if no such order exists.
std::vector<int> infoset_topological_order(const GameTree& tree);

// Incremental constructor. Node ids are dense and assigned in call order, so
// parents always precede children. Player nodes that share an infoset key
// form one infoset; an empty key yields a singleton named after the node.
class GameTreeBuilder {
 public:
  explicit GameTreeBuilder(int num_players, std::string name = {});

  int add_chance(int parent, int parent_action,
                 std::vector<std::string> events, std::vector<double> probs);
  int add_player(int parent, int parent_action, int player,
                 std::vector<std::string> actions, std::string infoset_key = {});
  int add_terminal(int parent, int parent_action, std::vector<double> payoffs);

  // Overrides the generated path name of a node.
  void set_node_name(int node, std::string name);

  // Throws GameError(kValidationFailed) listing every violation.
  GameTree build() &&;

 private:
  int add_node(int parent, int parent_action, GameNode node);

  GameTree tree_;
  std::vector<std::string> infoset_keys_;
};

// Probability that `node` is reached, counting only the edges selected by the
// scope: one player's own decisions, everything but that player (chance
// included), or all edges.
struct ReachScope {
  enum class Kind { kOwn, kOthers, kAll };
  Kind kind = Kind::kAll;
  int player = kChancePlayer;

  static ReachScope own(int player) { return {Kind::kOwn, player}; }
  static ReachScope others(int player) { return {Kind::kOthers, player}; }
  static ReachScope all() { return {Kind::kAll, kChancePlayer}; }
};

class BehavioralProfile {
 public:
  BehavioralProfile() = default;
  explicit BehavioralProfile(std::vector<std::vector<double>> probs)
      : probs_(std::move(probs)) {}

  static BehavioralProfile uniform(const GameTree& tree);

  std::span<const double> operator[](int infoset) const { return probs_[infoset]; }
  std::vector<double>& at(int infoset) { return probs_.at(infoset); }
  std::size_t size() const { return probs_.size(); }
  const std::vector<std::vector<double>>& rows() const { return probs_; }

  // Returns the first infoset whose row is not a simplex vector of the right
  // length, or kNone.
  int first_invalid(const GameTree& tree, double tolerance = 1e-9) const;

 private:
  std::vector<std::vector<double>> probs_;
};

double reach_probability(const GameTree& tree, const BehavioralProfile& profile,
                         int node, ReachScope scope);

// mu(infoset, action) for one player's sequences; rows of other players'
// infosets are left empty.
using SequenceForm = std::vector<std::vector<double>>;
SequenceForm sequence_form(const GameTree& tree, const BehavioralProfile& profile,
                           int player);

// Own-reach mu_i(root -> s) for every infoset, each relative to its owner.
std::vector<double> infoset_reach(const GameTree& tree,
                                  const BehavioralProfile& profile);

// Structural isomorphism: identical shapes, labels, probabilities, payoffs and
// infoset partition; names are ignored.
bool isomorphic(const GameTree& lhs, const GameTree& rhs);

}  // namespace efg

#endif  // EFGRAPH_GAME_TREE_HPP
