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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "efgraph/catalog.hpp"
#include "efgraph/error.hpp"
#include "efgraph/game_tree.hpp"
#include "oracles.hpp"

namespace efg {
namespace {

bool is_tree_ancestor(const GameTree& tree, int anc, int node) {
  for (int h = tree.nodes[node].parent; h != kNone; h = tree.nodes[h].parent) {
    if (h == anc) return true;
  }
  return false;
}

bool infoset_precedes(const GameTree& tree, int s1, int s2) {
  for (int a : tree.infosets[s1].members) {
    for (int b : tree.infosets[s2].members) {
      if (is_tree_ancestor(tree, a, b)) return true;
    }
  }
  return false;
}

TEST(ValidateGame, KuhnIsValid) { EXPECT_TRUE(validate_game(generate_kuhn()).empty()); }

TEST(ValidateGame, SingleTerminalRoot) {
  GameTreeBuilder b(2, "leaf");
  b.add_terminal(kNone, kNone, {0.0, 0.0});
  const GameTree tree = std::move(b).build();
  EXPECT_TRUE(validate_game(tree).empty());
  EXPECT_EQ(tree.nodes.size(), 1u);
  EXPECT_TRUE(tree.infosets.empty());
}

TEST(ValidateGame, ChanceProbabilitiesMustSumToOne) {
  GameTree tree;
  tree.num_players = 1;
  GameNode root;
  root.id = 0;
  root.kind = NodeKind::kChance;
  root.actions = {"a", "b"};
  root.chance_probs = {0.5, 0.6};
  root.children = {1, 2};
  tree.nodes.push_back(root);
  for (int k = 0; k < 2; ++k) {
    GameNode z;
    z.id = k + 1;
    z.parent = 0;
    z.parent_action = k;
    z.depth = 1;
    z.payoffs = {0.0};
    tree.nodes.push_back(z);
  }
  const auto v = validate_game(tree);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("chance probabilities sum 1.1"), std::string::npos) << v[0].message;
  EXPECT_EQ(v[0].node, 0);
}

TEST(ValidateGame, BuilderRejectsBadChance) {
  GameTreeBuilder b(1);
  const int c = b.add_chance(kNone, kNone, {"a", "b"}, {0.5, 0.6});
  b.add_terminal(c, 0, {0.0});
  b.add_terminal(c, 1, {0.0});
  try {
    std::move(b).build();
    FAIL();
  } catch (const GameError& e) {
    EXPECT_EQ(e.kind(), GameError::Kind::kValidationFailed);
  }
}

TEST(ValidateGame, MissingPayoffIsReported) {
  GameTree tree = generate_kuhn();
  for (auto& h : tree.nodes) {
    if (h.is_terminal()) {
      h.payoffs.pop_back();
      break;
    }
  }
  EXPECT_FALSE(validate_game(tree).empty());
}

TEST(ValidateGame, PartitionViolationIsReported) {
  GameTree tree = generate_kuhn();
  tree.infosets[0].members.push_back(tree.infosets[1].members[0]);
  EXPECT_FALSE(validate_game(tree).empty());
}

TEST(ValidateGame, ImperfectRecallIsRejected) {
  // Player 1 forgets their first action: both continuation nodes share an infoset.
  GameTreeBuilder b(1);
  const int root = b.add_player(kNone, kNone, 1, {"l", "r"}, "first");
  const int x = b.add_player(root, 0, 1, {"a", "b"}, "second");
  const int y = b.add_player(root, 1, 1, {"a", "b"}, "second");
  for (int n : {x, y}) {
    b.add_terminal(n, 0, {1.0});
    b.add_terminal(n, 1, {0.0});
  }
  EXPECT_THROW(std::move(b).build(), GameError);
}

TEST(ValidateGame, MixedPlayersInOneInfoset) {
  GameTreeBuilder b(2);
  const int c = b.add_chance(kNone, kNone, {"x", "y"}, {0.5, 0.5});
  const int p = b.add_player(c, 0, 1, {"a"}, "shared");
  b.add_terminal(p, 0, {0.0, 0.0});
  const int q = b.add_player(c, 1, 2, {"a"}, "shared");
  b.add_terminal(q, 0, {0.0, 0.0});
  try {
    std::move(b).build();
    FAIL();
  } catch (const GameError& e) {
    EXPECT_EQ(e.kind(), GameError::Kind::kInfosetMixedPlayers);
  }
}

TEST(TopologicalOrder, KuhnRoundsAreOrdered) {
  const GameTree tree = generate_kuhn();
  const auto order = infoset_topological_order(tree);
  ASSERT_EQ(order.size(), 12u);
  // Three first-round player-1 infosets (one per card), then the six player-2
  // infosets, then the three player-1 infosets after check-bet.
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(tree.infosets[order[k]].player, 1);
    EXPECT_FALSE(tree.infosets[order[k]].parent_sequence.has_value());
  }
  for (int k = 3; k < 9; ++k) EXPECT_EQ(tree.infosets[order[k]].player, 2);
  for (int k = 9; k < 12; ++k) {
    EXPECT_EQ(tree.infosets[order[k]].player, 1);
    EXPECT_TRUE(tree.infosets[order[k]].parent_sequence.has_value());
  }
}

TEST(TopologicalOrder, NoInfosetPrecedesItsAncestor) {
  for (const GameTree& tree : {generate_kuhn(), generate_rock_paper_scissors()}) {
    const auto order = infoset_topological_order(tree);
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        EXPECT_FALSE(infoset_precedes(tree, order[j], order[i]))
            << tree.infosets[order[j]].name << " before " << tree.infosets[order[i]].name;
      }
    }
  }
}

TEST(TopologicalOrder, SingleInfoset) {
  GameTreeBuilder b(1);
  const int p = b.add_player(kNone, kNone, 1, {"a", "b"});
  b.add_terminal(p, 0, {1.0});
  b.add_terminal(p, 1, {0.0});
  const GameTree tree = std::move(b).build();
  EXPECT_EQ(infoset_topological_order(tree), std::vector<int>{0});
}

TEST(TopologicalOrder, TiesGoToInfosetId) {
  GameTreeBuilder b(2);
  const int c = b.add_chance(kNone, kNone, {"x", "y"}, {0.5, 0.5});
  const int p = b.add_player(c, 0, 1, {"a"}, "A");
  const int q = b.add_player(c, 1, 2, {"a"}, "B");
  b.add_terminal(p, 0, {0.0, 0.0});
  b.add_terminal(q, 0, {0.0, 0.0});
  const GameTree tree = std::move(b).build();
  EXPECT_EQ(infoset_topological_order(tree), (std::vector<int>{0, 1}));
  EXPECT_EQ(tree.infosets[0].depth, 0);
  EXPECT_EQ(tree.infosets[1].depth, 1);
}

TEST(TopologicalOrder, CyclicAncestryIsDetected) {
  // A at the top of one branch and below B in the other; B likewise.
  GameTree tree;
  tree.num_players = 2;
  auto node = [&](NodeKind kind, int player, int parent, int action, int depth) {
    GameNode h;
    h.id = static_cast<int>(tree.nodes.size());
    h.kind = kind;
    h.player = player;
    h.parent = parent;
    h.parent_action = action;
    h.depth = depth;
    if (kind == NodeKind::kTerminal) h.payoffs = {0.0, 0.0};
    if (parent != kNone) {
      auto& p = tree.nodes[parent];
      if (static_cast<int>(p.children.size()) <= action) p.children.resize(action + 1, kNone);
      p.children[action] = h.id;
    }
    tree.nodes.push_back(h);
    return h.id;
  };
  const int c = node(NodeKind::kChance, 0, kNone, 0, 0);
  tree.nodes[c].actions = {"x", "y"};
  tree.nodes[c].chance_probs = {0.5, 0.5};
  const int a1 = node(NodeKind::kPlayer, 1, c, 0, 1);
  const int b1 = node(NodeKind::kPlayer, 2, c, 1, 1);
  const int b2 = node(NodeKind::kPlayer, 2, a1, 0, 2);
  const int a2 = node(NodeKind::kPlayer, 1, b1, 0, 2);
  for (int h : {a1, b1, a2, b2}) tree.nodes[h].actions = {"m"};
  node(NodeKind::kTerminal, 0, b2, 0, 3);
  node(NodeKind::kTerminal, 0, a2, 0, 3);
  tree.nodes[a1].infoset = tree.nodes[a2].infoset = 0;
  tree.nodes[b1].infoset = tree.nodes[b2].infoset = 1;
  Infoset A{0, 1, "A", {a1, a2}, {"m"}, 1, std::nullopt, 0};
  Infoset B{1, 2, "B", {b1, b2}, {"m"}, 1, std::nullopt, 0};
  tree.infosets = {A, B};
  try {
    infoset_topological_order(tree);
    FAIL();
  } catch (const GameError& e) {
    EXPECT_EQ(e.kind(), GameError::Kind::kCyclicInfosets);
  }
  EXPECT_FALSE(validate_game(tree).empty());
}

TEST(Partition, EveryPlayerNodeInExactlyOneInfoset) {
  for (const GameTree& tree : {generate_kuhn(), generate_leduc(), generate_rock_paper_scissors()}) {
    std::vector<int> count(tree.nodes.size(), 0);
    for (const Infoset& s : tree.infosets) {
      for (int h : s.members) ++count[h];
    }
    for (const GameNode& h : tree.nodes) EXPECT_EQ(count[h.id], h.is_player() ? 1 : 0);
  }
}

TEST(Reach, RootIsOne) {
  const GameTree tree = generate_kuhn();
  const auto profile = BehavioralProfile::uniform(tree);
  for (auto scope : {ReachScope::all(), ReachScope::own(1), ReachScope::others(1)}) {
    EXPECT_EQ(reach_probability(tree, profile, 0, scope), 1.0);
  }
}

TEST(Reach, KuhnDealIsOneSixth) {
  const GameTree tree = generate_kuhn();
  const auto profile = BehavioralProfile::uniform(tree);
  const int jq = tree.root().children[0];
  EXPECT_EQ(tree.nodes[jq].name, "/JQ");
  EXPECT_DOUBLE_EQ(reach_probability(tree, profile, jq, ReachScope::others(1)), 1.0 / 6.0);
}

TEST(Reach, Factorization) {
  const GameTree tree = generate_kuhn();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto profile = oracle::random_profile(tree, rng);
    for (const GameNode& h : tree.nodes) {
      double all = 1.0;
      for (const auto& e : oracle::path_to(tree, h.id)) all *= oracle::edge_prob(tree, profile, e);
      EXPECT_NEAR(reach_probability(tree, profile, h.id, ReachScope::all()), all, 1e-12);
      for (int i = 1; i <= 2; ++i) {
        const double own = reach_probability(tree, profile, h.id, ReachScope::own(i));
        const double others = reach_probability(tree, profile, h.id, ReachScope::others(i));
        EXPECT_NEAR(own * others, all, 1e-12);
      }
    }
  }
}

TEST(SequenceForm, UniformKuhnFirstInfosets) {
  const GameTree tree = generate_kuhn();
  const auto mu = sequence_form(tree, BehavioralProfile::uniform(tree), 1);
  for (const Infoset& s : tree.infosets) {
    if (s.player != 1) {
      EXPECT_TRUE(mu[s.id].empty());
      continue;
    }
    const double expected = s.parent_sequence ? 0.25 : 0.5;
    for (double v : mu[s.id]) EXPECT_DOUBLE_EQ(v, expected);
  }
}

TEST(SequenceForm, DeterministicProfileIsBinary) {
  const GameTree tree = generate_kuhn();
  std::mt19937_64 rng(5);
  BehavioralProfile profile = BehavioralProfile::uniform(tree);
  for (const Infoset& s : tree.infosets) {
    auto& row = profile.at(s.id);
    std::fill(row.begin(), row.end(), 0.0);
    row[rng() % row.size()] = 1.0;
  }
  for (int i = 1; i <= 2; ++i) {
    for (const auto& row : sequence_form(tree, profile, i)) {
      for (double v : row) EXPECT_TRUE(v == 0.0 || v == 1.0);
    }
  }
}

TEST(SequenceForm, FlowConservation) {
  for (const GameTree& tree : {generate_kuhn(), generate_leduc()}) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
      const auto profile = oracle::random_profile(tree, rng, 0.2);
      for (int i = 1; i <= 2; ++i) {
        const auto mu = sequence_form(tree, profile, i);
        for (const Infoset& s : tree.infosets) {
          if (s.player != i) continue;
          double total = 0.0;
          for (double v : mu[s.id]) total += v;
          const double parent =
              s.parent_sequence ? mu[s.parent_sequence->infoset][s.parent_sequence->action] : 1.0;
          EXPECT_NEAR(total, parent, 1e-12);
        }
      }
    }
  }
}

TEST(SequenceForm, ParentSequencesMatchTreeWalk) {
  const GameTree tree = generate_kuhn();
  for (const Infoset& s : tree.infosets) {
    std::optional<Sequence> expected;
    for (const auto& e : oracle::path_to(tree, s.members[0])) {
      const GameNode& g = tree.nodes[e.node];
      if (g.is_player() && g.player == s.player) expected = Sequence{g.infoset, e.action};
    }
    ASSERT_EQ(s.parent_sequence.has_value(), expected.has_value());
    if (expected) {
      EXPECT_EQ(s.parent_sequence->infoset, expected->infoset);
      EXPECT_EQ(s.parent_sequence->action, expected->action);
    }
  }
}

TEST(Profile, FirstInvalid) {
  const GameTree tree = generate_kuhn();
  BehavioralProfile profile = BehavioralProfile::uniform(tree);
  EXPECT_EQ(profile.first_invalid(tree), kNone);
  profile.at(4) = {0.7, 0.7};
  EXPECT_EQ(profile.first_invalid(tree), 4);
  profile.at(4) = {1.5, -0.5};
  EXPECT_EQ(profile.first_invalid(tree), 4);
  profile.at(4) = {1.0};
  EXPECT_EQ(profile.first_invalid(tree), 4);
}

TEST(Isomorphic, DetectsDifferences) {
  const GameTree a = generate_kuhn();
  GameTree b = generate_kuhn();
  EXPECT_TRUE(isomorphic(a, b));
  for (auto& h : b.nodes) h.name += "x";
  EXPECT_TRUE(isomorphic(a, b));
  for (auto& h : b.nodes) {
    if (h.is_terminal()) {
      h.payoffs[0] += 1.0;
      break;
    }
  }
  EXPECT_FALSE(isomorphic(a, b));
  EXPECT_FALSE(isomorphic(a, generate_rock_paper_scissors()));
}

}  // namespace
}  // namespace efg
