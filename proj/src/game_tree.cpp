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

#include "efgraph/game_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <tuple>
#include <utility>

#include <fmt/format.h>

#include "efgraph/error.hpp"

namespace efg {

namespace {

constexpr double kProbTolerance = 1e-9;

std::string child_name(const std::string& parent, const std::string& action) {
  if (!parent.empty() && parent.back() == '/') return parent + action;
  return parent + "/" + action;
}

// Own parent sequence of a node: the closest ancestor decision taken by the
// node's owner.
std::optional<Sequence> own_parent_sequence(const GameTree& tree, int node) {
  const int owner = tree.nodes[node].player;
  int child = node;
  int cur = tree.nodes[node].parent;
  while (cur != kNone) {
    const GameNode& g = tree.nodes[cur];
    if (g.is_player() && g.player == owner) {
      return Sequence{g.infoset, tree.nodes[child].parent_action};
    }
    child = cur;
    cur = g.parent;
  }
  return std::nullopt;
}

// Edges s' -> s where s' owns the nearest player-node ancestor of a member of
// s. Their transitive closure is the infoset ancestry relation.
std::vector<std::vector<int>> infoset_edges(const GameTree& tree) {
  std::vector<std::vector<int>> out(tree.infosets.size());
  for (const GameNode& h : tree.nodes) {
    if (!h.is_player() || h.infoset < 0) continue;
    int cur = h.parent;
    while (cur != kNone && !tree.nodes[cur].is_player()) cur = tree.nodes[cur].parent;
    if (cur == kNone) continue;
    const int from = tree.nodes[cur].infoset;
    if (from < 0 || from >= static_cast<int>(out.size())) continue;
    out[from].push_back(h.infoset);
  }
  for (auto& edges : out) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  return out;
}

}  // namespace

std::vector<int> GameTree::infosets_of(int player) const {
  std::vector<int> out;
  for (const Infoset& s : infosets) {
    if (s.player == player) out.push_back(s.id);
  }
  return out;
}

int GameTree::num_terminals() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(),
                                        [](const GameNode& h) { return h.is_terminal(); }));
}

std::vector<int> infoset_topological_order(const GameTree& tree) {
  const int n = static_cast<int>(tree.infosets.size());
  const auto edges = infoset_edges(tree);
  std::vector<int> indegree(n, 0);
  for (const auto& e : edges) {
    for (int to : e) ++indegree[to];
  }
  std::vector<int> min_depth(n, 0);
  for (const Infoset& s : tree.infosets) {
    int best = -1;
    for (int m : s.members) {
      if (m < 0 || m >= static_cast<int>(tree.nodes.size())) continue;
      if (best < 0 || tree.nodes[m].depth < best) best = tree.nodes[m].depth;
    }
    min_depth[s.id] = std::max(best, 0);
  }

  using Key = std::pair<int, int>;  // (min member depth, id)
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (int s = 0; s < n; ++s) {
    if (indegree[s] == 0) ready.emplace(min_depth[s], s);
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int s = ready.top().second;
    ready.pop();
    order.push_back(s);
    for (int to : edges[s]) {
      if (--indegree[to] == 0) ready.emplace(min_depth[to], to);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    throw GameError(GameError::Kind::kCyclicInfosets,
                    fmt::format("infoset ancestry is cyclic ({} of {} infosets ordered)",
                                order.size(), n));
  }
  return order;
}

std::vector<Violation> validate_game(const GameTree& tree) {
  std::vector<Violation> out;
  auto node_violation = [&](int id, std::string msg) {
    out.push_back({std::move(msg), id, kNone});
  };
  auto infoset_violation = [&](int id, std::string msg) {
    out.push_back({std::move(msg), kNone, id});
  };

  const int num_nodes = static_cast<int>(tree.nodes.size());
  const int num_infosets = static_cast<int>(tree.infosets.size());
  const int n_players = tree.num_players;
  if (n_players < 1) out.push_back({"num_players must be >= 1", kNone, kNone});
  if (num_nodes == 0) {
    out.push_back({"game has no nodes", kNone, kNone});
    return out;
  }

  int roots = 0;
  for (int id = 0; id < num_nodes; ++id) {
    const GameNode& h = tree.nodes[id];
    if (h.id != id) node_violation(id, fmt::format("node id {} stored at index {}", h.id, id));
    if (h.parent == kNone) {
      ++roots;
      if (h.depth != 0) node_violation(id, "root depth must be 0");
    } else if (h.parent < 0 || h.parent >= id) {
      node_violation(id, fmt::format("parent {} does not precede node {}", h.parent, id));
    } else {
      const GameNode& p = tree.nodes[h.parent];
      if (h.parent_action < 0 || h.parent_action >= static_cast<int>(p.children.size()) ||
          p.children[h.parent_action] != id) {
        node_violation(id, fmt::format("parent {} does not link back via action {}", h.parent,
                                       h.parent_action));
      }
      if (h.depth != p.depth + 1) node_violation(id, "depth is not parent depth + 1");
    }

    switch (h.kind) {
      case NodeKind::kTerminal:
        if (!h.actions.empty() || !h.children.empty()) {
          node_violation(id, "terminal node has actions");
        }
        if (static_cast<int>(h.payoffs.size()) != n_players) {
          node_violation(id, fmt::format("terminal node has {} payoffs, expected {}",
                                         h.payoffs.size(), n_players));
        }
        for (double u : h.payoffs) {
          if (!std::isfinite(u)) node_violation(id, "non-finite payoff");
        }
        if (h.infoset != kNone) node_violation(id, "terminal node assigned to an infoset");
        break;
      case NodeKind::kChance: {
        if (h.actions.empty()) node_violation(id, "chance node has no events");
        if (h.chance_probs.size() != h.actions.size()) {
          node_violation(id, "chance probabilities do not match events");
          break;
        }
        double sum = 0.0;
        bool bad_entry = false;
        for (double p : h.chance_probs) {
          if (!(p >= 0.0) || !std::isfinite(p)) bad_entry = true;
          sum += p;
        }
        if (bad_entry) node_violation(id, "chance probability negative or non-finite");
        if (std::abs(sum - 1.0) > kProbTolerance) {
          node_violation(id, fmt::format("chance probabilities sum {} != 1", sum));
        }
        if (h.infoset != kNone) node_violation(id, "chance node assigned to an infoset");
        break;
      }
      case NodeKind::kPlayer:
        if (h.player < 1 || h.player > n_players) {
          node_violation(id, fmt::format("player {} out of range [1, {}]", h.player, n_players));
        }
        if (h.actions.empty()) node_violation(id, "player node has no actions");
        if (h.infoset < 0 || h.infoset >= num_infosets) {
          node_violation(id, "player node has no infoset");
        }
        break;
    }
    if (!h.is_terminal()) {
      if (h.children.size() != h.actions.size()) {
        node_violation(id, "child count differs from action count");
      } else {
        for (std::size_t a = 0; a < h.children.size(); ++a) {
          const int c = h.children[a];
          if (c <= id || c >= num_nodes || tree.nodes[c].parent != id) {
            node_violation(id, fmt::format("action '{}' has no valid child", h.actions[a]));
          }
        }
      }
    }
  }
  if (roots != 1) out.push_back({fmt::format("expected exactly one root, found {}", roots)});

  // Partition and per-infoset consistency.
  std::vector<int> membership(num_nodes, 0);
  for (int s = 0; s < num_infosets; ++s) {
    const Infoset& info = tree.infosets[s];
    if (info.id != s) infoset_violation(s, "infoset id does not match index");
    if (info.player < 1 || info.player > n_players) {
      infoset_violation(s, "infoset owner out of range");
    }
    if (info.members.empty()) infoset_violation(s, "infoset has no members");
    if (info.action_count < 1) infoset_violation(s, "infoset has no actions");
    std::optional<std::optional<Sequence>> shared;
    for (int m : info.members) {
      if (m < 0 || m >= num_nodes) {
        infoset_violation(s, fmt::format("member {} does not exist", m));
        continue;
      }
      ++membership[m];
      const GameNode& h = tree.nodes[m];
      if (!h.is_player()) {
        infoset_violation(s, fmt::format("member {} is not a player node", m));
        continue;
      }
      if (h.player != info.player) {
        infoset_violation(s, fmt::format("member {} belongs to player {}, infoset to {}", m,
                                         h.player, info.player));
      }
      if (h.infoset != s) infoset_violation(s, fmt::format("member {} links elsewhere", m));
      if (static_cast<int>(h.actions.size()) != info.action_count) {
        infoset_violation(s, fmt::format("member {} has {} actions, infoset has {}", m,
                                         h.actions.size(), info.action_count));
      }
      if (h.player >= 1 && h.player <= n_players) {
        const auto seq = own_parent_sequence(tree, m);
        if (!shared) {
          shared = seq;
        } else if (*shared != seq) {
          infoset_violation(s, fmt::format("member {} breaks perfect recall", m));
        }
      }
    }
    if (shared && *shared != info.parent_sequence) {
      infoset_violation(s, "stored parent sequence is inconsistent");
    }
  }
  for (int id = 0; id < num_nodes; ++id) {
    const bool player_node = tree.nodes[id].is_player();
    if (player_node && membership[id] != 1) {
      node_violation(id, fmt::format("player node listed in {} infosets", membership[id]));
    } else if (!player_node && membership[id] != 0) {
      node_violation(id, "non-player node listed in an infoset");
    }
  }

  if (out.empty()) {
    try {
      infoset_topological_order(tree);
    } catch (const GameError& e) {
      out.push_back({e.what()});
    }
  }
  return out;
}

GameTreeBuilder::GameTreeBuilder(int num_players, std::string name) {
  tree_.num_players = num_players;
  tree_.name = std::move(name);
}

int GameTreeBuilder::add_node(int parent, int parent_action, GameNode node) {
  const int id = static_cast<int>(tree_.nodes.size());
  node.id = id;
  node.parent = parent;
  node.parent_action = parent_action;
  node.children.assign(node.actions.size(), kNone);
  if (parent == kNone) {
    if (id != 0) {
      throw GameError(GameError::Kind::kInvalidArgument, "only the first node may be the root");
    }
    node.depth = 0;
    node.name = "/";
  } else {
    if (parent < 0 || parent >= id) {
      throw GameError(GameError::Kind::kOrphanNode, fmt::format("unknown parent {}", parent));
    }
    GameNode& p = tree_.nodes[parent];
    if (parent_action < 0 || parent_action >= static_cast<int>(p.actions.size())) {
      throw GameError(GameError::Kind::kUnknownAction,
                      fmt::format("node {} has no action {}", parent, parent_action));
    }
    if (p.children[parent_action] != kNone) {
      throw GameError(GameError::Kind::kInvalidArgument,
                      fmt::format("action '{}' of {} already has a child",
                                  p.actions[parent_action], p.name));
    }
    p.children[parent_action] = id;
    node.depth = p.depth + 1;
    node.name = child_name(p.name, p.actions[parent_action]);
  }
  tree_.nodes.push_back(std::move(node));
  infoset_keys_.emplace_back();
  return id;
}

int GameTreeBuilder::add_chance(int parent, int parent_action,
                                std::vector<std::string> events, std::vector<double> probs) {
  GameNode node;
  node.kind = NodeKind::kChance;
  node.actions = std::move(events);
  node.chance_probs = std::move(probs);
  return add_node(parent, parent_action, std::move(node));
}

int GameTreeBuilder::add_player(int parent, int parent_action, int player,
                                std::vector<std::string> actions, std::string infoset_key) {
  GameNode node;
  node.kind = NodeKind::kPlayer;
  node.player = player;
  node.actions = std::move(actions);
  const int id = add_node(parent, parent_action, std::move(node));
  infoset_keys_[id] = std::move(infoset_key);
  return id;
}

int GameTreeBuilder::add_terminal(int parent, int parent_action, std::vector<double> payoffs) {
  GameNode node;
  node.kind = NodeKind::kTerminal;
  node.payoffs = std::move(payoffs);
  return add_node(parent, parent_action, std::move(node));
}

void GameTreeBuilder::set_node_name(int node, std::string name) {
  tree_.nodes.at(node).name = std::move(name);
}

GameTree GameTreeBuilder::build() && {
  // Infoset ids follow the order of each infoset's smallest member.
  std::map<std::string, int> by_key;
  for (GameNode& h : tree_.nodes) {
    if (!h.is_player()) continue;
    const std::string& key = infoset_keys_[h.id];
    int s = kNone;
    if (!key.empty()) {
      auto it = by_key.find(key);
      if (it != by_key.end()) s = it->second;
    }
    if (s == kNone) {
      s = static_cast<int>(tree_.infosets.size());
      Infoset info;
      info.id = s;
      info.player = h.player;
      info.name = key.empty() ? h.name : key;
      info.actions = h.actions;
      info.action_count = static_cast<int>(h.actions.size());
      tree_.infosets.push_back(std::move(info));
      if (!key.empty()) by_key.emplace(key, s);
    } else if (tree_.infosets[s].player != h.player) {
      throw GameError(GameError::Kind::kInfosetMixedPlayers,
                      fmt::format("infoset '{}' mixes players {} and {}", key,
                                  tree_.infosets[s].player, h.player));
    }
    tree_.infosets[s].members.push_back(h.id);
    h.infoset = s;
  }
  for (Infoset& info : tree_.infosets) {
    if (info.player >= 1 && info.player <= tree_.num_players) {
      info.parent_sequence = own_parent_sequence(tree_, info.members.front());
    }
  }

  auto violations = validate_game(tree_);
  if (!violations.empty()) {
    std::string msg = fmt::format("game '{}' failed validation:", tree_.name);
    for (const Violation& v : violations) {
      msg += "\n  " + v.message;
      if (v.node != kNone) msg += fmt::format(" (node {})", tree_.nodes[v.node].name);
      if (v.infoset != kNone) msg += fmt::format(" (infoset {})", tree_.infosets[v.infoset].name);
    }
    throw GameError(GameError::Kind::kValidationFailed, msg);
  }
  const auto order = infoset_topological_order(tree_);
  for (int pos = 0; pos < static_cast<int>(order.size()); ++pos) {
    tree_.infosets[order[pos]].depth = pos;
  }
  return std::move(tree_);
}

BehavioralProfile BehavioralProfile::uniform(const GameTree& tree) {
  std::vector<std::vector<double>> rows;
  rows.reserve(tree.infosets.size());
  for (const Infoset& s : tree.infosets) {
    rows.emplace_back(s.action_count, 1.0 / s.action_count);
  }
  return BehavioralProfile(std::move(rows));
}

int BehavioralProfile::first_invalid(const GameTree& tree, double tolerance) const {
  if (probs_.size() != tree.infosets.size()) return 0;
  for (const Infoset& s : tree.infosets) {
    const auto& row = probs_[s.id];
    if (static_cast<int>(row.size()) != s.action_count) return s.id;
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= -tolerance) || !std::isfinite(p)) return s.id;
      sum += p;
    }
    if (std::abs(sum - 1.0) > tolerance) return s.id;
  }
  return kNone;
}

double reach_probability(const GameTree& tree, const BehavioralProfile& profile, int node,
                         ReachScope scope) {
  double reach = 1.0;
  int child = node;
  int cur = tree.nodes.at(node).parent;
  while (cur != kNone) {
    const GameNode& g = tree.nodes[cur];
    const int a = tree.nodes[child].parent_action;
    const int actor = g.is_chance() ? kChancePlayer : g.player;
    bool counted = true;
    if (scope.kind == ReachScope::Kind::kOwn) counted = actor == scope.player;
    if (scope.kind == ReachScope::Kind::kOthers) counted = actor != scope.player;
    if (counted) reach *= g.is_chance() ? g.chance_probs[a] : profile[g.infoset][a];
    child = cur;
    cur = g.parent;
  }
  return reach;
}

std::vector<double> infoset_reach(const GameTree& tree, const BehavioralProfile& profile) {
  std::vector<double> reach(tree.infosets.size(), 1.0);
  for (int s : infoset_topological_order(tree)) {
    const auto& parent = tree.infosets[s].parent_sequence;
    if (parent) reach[s] = reach[parent->infoset] * profile[parent->infoset][parent->action];
  }
  return reach;
}

SequenceForm sequence_form(const GameTree& tree, const BehavioralProfile& profile, int player) {
  const auto reach = infoset_reach(tree, profile);
  SequenceForm mu(tree.infosets.size());
  for (const Infoset& s : tree.infosets) {
    if (s.player != player) continue;
    mu[s.id].resize(s.action_count);
    for (int a = 0; a < s.action_count; ++a) mu[s.id][a] = reach[s.id] * profile[s.id][a];
  }
  return mu;
}

bool isomorphic(const GameTree& lhs, const GameTree& rhs) {
  if (lhs.num_players != rhs.num_players || lhs.nodes.size() != rhs.nodes.size() ||
      lhs.infosets.size() != rhs.infosets.size() || lhs.nodes.empty()) {
    return false;
  }
  std::vector<int> infoset_map(lhs.infosets.size(), kNone);
  std::vector<int> infoset_inverse(rhs.infosets.size(), kNone);
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [l, r] = stack.back();
    stack.pop_back();
    const GameNode& a = lhs.nodes[l];
    const GameNode& b = rhs.nodes[r];
    if (a.kind != b.kind || a.player != b.player || a.actions != b.actions ||
        a.chance_probs != b.chance_probs || a.payoffs != b.payoffs ||
        a.children.size() != b.children.size()) {
      return false;
    }
    if (a.is_player()) {
      if (infoset_map[a.infoset] == kNone && infoset_inverse[b.infoset] == kNone) {
        infoset_map[a.infoset] = b.infoset;
        infoset_inverse[b.infoset] = a.infoset;
      } else if (infoset_map[a.infoset] != b.infoset) {
        return false;
      }
    }
    for (std::size_t i = 0; i < a.children.size(); ++i) {
      stack.emplace_back(a.children[i], b.children[i]);
    }
  }
  // Every infoset must have been reached and the member counts must agree.
  for (std::size_t s = 0; s < lhs.infosets.size(); ++s) {
    if (infoset_map[s] == kNone ||
        lhs.infosets[s].members.size() != rhs.infosets[infoset_map[s]].members.size()) {
      return false;
    }
  }
  return true;
}

}  // namespace efg
