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

#include "efgraph/environment.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "efgraph/error.hpp"

namespace efg {

const char* to_string(Traversal traversal) {
  switch (traversal) {
    case Traversal::kEnumerate: return "enumerate";
    case Traversal::kExternal: return "external";
    case Traversal::kOutcome: return "outcome";
  }
  return "?";
}

namespace {

constexpr double kStrategyTolerance = 1e-6;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw; never returns a zero-probability index.
template <typename Probs>
int sample_index(const Probs& probs, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  int last_positive = 0;
  for (int a = 0; a < static_cast<int>(probs.size()); ++a) {
    if (probs[a] <= 0.0) continue;
    last_positive = a;
    acc += probs[a];
    if (u < acc) return a;
  }
  return last_positive;
}

}  // namespace

Environment::Environment(std::shared_ptr<const GameTree> tree, Traversal traversal,
                         std::uint64_t seed)
    : tree_(std::move(tree)), traversal_(traversal), rng_(seed) {
  if (!tree_) throw Error("environment needs a game tree");
  index_tree();
}

Environment::Environment(GameTree tree, Traversal traversal, std::uint64_t seed)
    : Environment(std::make_shared<const GameTree>(std::move(tree)), traversal, seed) {}

void Environment::index_tree() {
  const GameTree& t = *tree_;
  if (auto violations = validate_game(t); !violations.empty()) {
    throw GameError(GameError::Kind::kValidationFailed,
                    fmt::format("environment given an invalid game: {}", violations.front().message));
  }
  order_ = infoset_topological_order(t);
  reverse_order_.assign(order_.rbegin(), order_.rend());

  const int num_infosets = static_cast<int>(t.infosets.size());
  action_offset_.assign(num_infosets + 1, 0);
  for (int s = 0; s < num_infosets; ++s) {
    action_offset_[s + 1] = action_offset_[s] + t.infosets[s].action_count;
  }

  auto build_children = [&](PlayerScope scope, ChildIndex& index) {
    index.offsets.assign(action_offset_.back() + 1, 0);
    index.items.clear();
    std::vector<int> found;
    std::vector<int> stack;
    for (int s = 0; s < num_infosets; ++s) {
      const Infoset& info = t.infosets[s];
      for (int a = 0; a < info.action_count; ++a) {
        found.clear();
        for (int h : info.members) {
          stack.assign(1, t.nodes[h].children[a]);
          while (!stack.empty()) {
            const GameNode& g = t.nodes[stack.back()];
            stack.pop_back();
            if (g.is_terminal()) continue;
            if (g.is_player()) {
              const bool own = g.player == info.player;
              if (own == (scope == PlayerScope::kSelf)) {
                found.push_back(g.infoset);
                continue;
              }
            }
            stack.insert(stack.end(), g.children.begin(), g.children.end());
          }
        }
        std::sort(found.begin(), found.end());
        found.erase(std::unique(found.begin(), found.end()), found.end());
        index.items.insert(index.items.end(), found.begin(), found.end());
        index.offsets[action_offset_[s] + a + 1] = static_cast<int>(index.items.size());
      }
    }
  };
  build_children(PlayerScope::kSelf, self_children_);
  build_children(PlayerScope::kOpponents, opponent_children_);

  opponent_parent_.assign(num_infosets, std::nullopt);
  for (int s = 0; s < num_infosets; ++s) {
    const Infoset& info = t.infosets[s];
    int child = info.members.front();
    int cur = t.nodes[child].parent;
    while (cur != kNone) {
      const GameNode& g = t.nodes[cur];
      if (g.is_player() && g.player != info.player) {
        opponent_parent_[s] = Sequence{g.infoset, t.nodes[child].parent_action};
        break;
      }
      child = cur;
      cur = g.parent;
    }
  }

  profile_ = BehavioralProfile::uniform(t);
  node_reach_.assign(t.nodes.size() * t.num_players, 0.0);
  node_value_.assign(t.nodes.size() * t.num_players, 0.0);
}

std::span<const int> Environment::children(int infoset, int action, PlayerScope scope) const {
  const ChildIndex& index = scope == PlayerScope::kSelf ? self_children_ : opponent_children_;
  const int k = action_offset_.at(infoset) + action;
  return std::span<const int>(index.items).subspan(index.offsets[k],
                                                   index.offsets[k + 1] - index.offsets[k]);
}

std::optional<Sequence> Environment::parent(int infoset, PlayerScope scope) const {
  if (scope == PlayerScope::kSelf) return tree_->infosets.at(infoset).parent_sequence;
  return opponent_parent_.at(infoset);
}

const ComputationGraph& Environment::graph() const {
  if (!graph_) throw Error("no graph has been set on this environment");
  return *graph_;
}

const Variable& Environment::variable(NodeRef node, int infoset) const {
  if (!graph_ || node.id < 0 || node.id >= num_graph_nodes_ || infoset < 0 ||
      infoset >= static_cast<int>(tree_->infosets.size())) {
    throw std::out_of_range(fmt::format("no variable for node %{} at infoset {}", node.id, infoset));
  }
  return storage_[slot(node.id, infoset)];
}

void Environment::set_variable(NodeRef node, int infoset, Variable value) {
  variable(node, infoset);  // bounds check
  if (value.empty()) throw GraphError(GraphError::Kind::kShapeMismatch, "empty variable");
  storage_[slot(node.id, infoset)] = std::move(value);
}

const std::vector<std::vector<double>>& Environment::accumulator(NodeRef strategy) const {
  static const std::vector<std::vector<double>> kEmpty;
  auto it = accumulators_.find(strategy.id);
  return it == accumulators_.end() ? kEmpty : it->second;
}

void Environment::set_graph(ComputationGraph graph) {
  graph_ = std::move(graph);
  num_graph_nodes_ = graph_->num_nodes();
  const std::size_t num_infosets = tree_->infosets.size();
  storage_.assign(num_infosets * static_cast<std::size_t>(num_graph_nodes_), Variable{});
  for (std::size_t s = 0; s < num_infosets; ++s) {
    for (const GraphNodeDef& n : graph_->nodes()) storage_[slot(n.id, s)].assign(1, n.initial);
  }
  iteration_ = 0;
  accumulators_.clear();

  // Static phases see built-ins computed from the uniform profile.
  compute_into(BehavioralProfile::uniform(*tree_), Traversal::kEnumerate, 0, rng_, builtins_);
  restrict_children_ = false;
  run_phase(Phase::kStaticBackward, reverse_order_);
  run_phase(Phase::kStaticForward, order_);
}

BehavioralProfile Environment::read_profile(NodeRef strategy, double tolerance) const {
  BehavioralProfile out = BehavioralProfile::uniform(*tree_);
  load_profile(strategy, tolerance, out);
  return out;
}

void Environment::load_profile(NodeRef strategy, double tolerance, BehavioralProfile& out) const {
  const GameTree& t = *tree_;
  for (const Infoset& s : t.infosets) {
    const Variable& v = variable(strategy, s.id);
    bool ok = static_cast<int>(v.size()) == s.action_count;
    double total = 0.0;
    for (double p : v) {
      ok = ok && std::isfinite(p) && p >= -tolerance;
      total += p;
    }
    if (!ok || std::abs(total - 1.0) > tolerance) {
      throw GraphError(GraphError::Kind::kInvalidStrategy,
                       fmt::format("node %{} at infoset {} ('{}') is not a probability vector",
                                   strategy.id, s.id, s.name));
    }
    out.at(s.id).assign(v.begin(), v.end());
  }
}

void Environment::update(NodeRef strategy) {
  if (!graph_) throw Error("update called before set_graph");
  load_profile(strategy, kStrategyTolerance, profile_);
  const int external_player =
      traversal_ == Traversal::kExternal ? iteration_ % tree_->num_players + 1 : 0;
  compute_into(profile_, traversal_, external_player, rng_, builtins_);

  if (traversal_ == Traversal::kEnumerate) {
    run_phase(Phase::kDynamicBackward, reverse_order_);
    run_phase(Phase::kDynamicForward, order_);
  } else {
    std::vector<int> touched;
    for (int s : order_) {
      if (builtins_.touched[s]) touched.push_back(s);
    }
    restrict_children_ = true;
    run_phase(Phase::kDynamicBackward, std::vector<int>(touched.rbegin(), touched.rend()));
    run_phase(Phase::kDynamicForward, touched);
    restrict_children_ = false;
  }
  ++iteration_;
}

void Environment::update_strategy(NodeRef strategy, StrategyMode mode) {
  if (!graph_) throw Error("update_strategy called before set_graph");
  load_profile(strategy, kStrategyTolerance, profile_);
  const BehavioralProfile& profile = profile_;
  fill_reach(profile, builtins_);
  const std::vector<double>& reach = builtins_.reach_prob;
  auto& acc = accumulators_[strategy.id];
  if (acc.empty()) {
    acc.resize(tree_->infosets.size());
    for (const Infoset& s : tree_->infosets) acc[s.id].assign(s.action_count, 0.0);
  }
  for (const Infoset& s : tree_->infosets) {
    for (int a = 0; a < s.action_count; ++a) {
      const double mass = reach[s.id] * profile[s.id][a];
      if (mode == StrategyMode::kAvgIterate) acc[s.id][a] += mass;
      else acc[s.id][a] = mass;
    }
  }
}

BehavioralProfile Environment::current_profile(NodeRef strategy, StrategyMode mode) const {
  if (mode == StrategyMode::kLastIterate) return read_profile(strategy);
  BehavioralProfile out = BehavioralProfile::uniform(*tree_);
  const auto& acc = accumulator(strategy);
  if (acc.empty()) return out;
  for (const Infoset& s : tree_->infosets) {
    double total = 0.0;
    for (double m : acc[s.id]) total += m;
    if (total <= 0.0) continue;
    auto& row = out.at(s.id);
    for (int a = 0; a < s.action_count; ++a) row[a] = acc[s.id][a] / total;
  }
  return out;
}

BuiltinBundle Environment::compute_builtins(const BehavioralProfile& profile,
                                            Traversal traversal, std::mt19937_64& rng,
                                            int external_player) const {
  BuiltinBundle out;
  compute_into(profile, traversal, external_player, rng, out);
  return out;
}

void Environment::compute_into(const BehavioralProfile& profile, Traversal traversal,
                               int external_player, std::mt19937_64& rng,
                               BuiltinBundle& out) const {
  const GameTree& t = *tree_;
  const std::size_t num_infosets = t.infosets.size();
  if (out.utility.size() != num_infosets) {
    out.utility.resize(num_infosets);
    for (const Infoset& s : t.infosets) out.utility[s.id].assign(s.action_count, 0.0);
  } else {
    for (auto& row : out.utility) std::fill(row.begin(), row.end(), 0.0);
  }
  out.touched.assign(num_infosets, 0);
  fill_reach(profile, out);

  switch (traversal) {
    case Traversal::kEnumerate:
      enumerate(profile, out);
      std::fill(out.touched.begin(), out.touched.end(), 1);
      break;
    case Traversal::kExternal:
      if (external_player > 0) {
        external_walk(profile, external_player, 0, rng, out);
      } else {
        for (int i = 1; i <= t.num_players; ++i) external_walk(profile, i, 0, rng, out);
      }
      break;
    case Traversal::kOutcome:
      outcome(profile, rng, out);
      break;
  }
}

void Environment::fill_reach(const BehavioralProfile& profile, BuiltinBundle& out) const {
  out.reach_prob.assign(tree_->infosets.size(), 1.0);
  for (int s : order_) {
    const auto& parent_seq = tree_->infosets[s].parent_sequence;
    if (parent_seq) {
      out.reach_prob[s] = out.reach_prob[parent_seq->infoset] *
                          profile[parent_seq->infoset][parent_seq->action];
    }
  }
}

void Environment::enumerate(const BehavioralProfile& profile, BuiltinBundle& out) const {
  const GameTree& t = *tree_;
  const int n = t.num_players;
  const int num_nodes = static_cast<int>(t.nodes.size());
  double* reach = node_reach_.data();  // reach of everyone but player i
  double* value = node_value_.data();  // payoff mass below, stopping at i's nodes

  std::fill(reach, reach + n, 1.0);
  for (int h = 0; h < num_nodes; ++h) {
    const GameNode& g = t.nodes[h];
    if (g.is_terminal()) continue;
    const int actor = g.is_chance() ? kChancePlayer : g.player;
    const double* probs = g.is_chance() ? g.chance_probs.data() : profile[g.infoset].data();
    const double* from = reach + static_cast<std::size_t>(h) * n;
    for (std::size_t a = 0; a < g.children.size(); ++a) {
      double* to = reach + static_cast<std::size_t>(g.children[a]) * n;
      for (int i = 0; i < n; ++i) to[i] = from[i] * (actor == i + 1 ? 1.0 : probs[a]);
    }
  }

  for (int h = num_nodes - 1; h >= 0; --h) {
    const GameNode& g = t.nodes[h];
    double* v = value + static_cast<std::size_t>(h) * n;
    if (g.is_terminal()) {
      for (int i = 0; i < n; ++i) v[i] = g.payoffs[i];
      continue;
    }
    const double* probs = g.is_chance() ? g.chance_probs.data() : profile[g.infoset].data();
    std::fill(v, v + n, 0.0);
    for (std::size_t a = 0; a < g.children.size(); ++a) {
      const double* c = value + static_cast<std::size_t>(g.children[a]) * n;
      for (int i = 0; i < n; ++i) v[i] += probs[a] * c[i];
    }
    if (g.is_player()) {
      auto& row = out.utility[g.infoset];
      const int i = g.player - 1;
      const double r = reach[static_cast<std::size_t>(h) * n + i];
      for (std::size_t a = 0; a < g.children.size(); ++a) {
        row[a] += r * value[static_cast<std::size_t>(g.children[a]) * n + i];
      }
      v[i] = 0.0;
    }
  }
}

double Environment::external_walk(const BehavioralProfile& profile, int player, int node,
                                  std::mt19937_64& rng, BuiltinBundle& out) const {
  const GameNode& g = tree_->nodes[node];
  if (g.is_terminal()) return g.payoffs[player - 1];
  if (g.is_chance()) {
    return external_walk(profile, player, g.children[sample_index(g.chance_probs, rng)], rng,
                         out);
  }
  if (g.player != player) {
    return external_walk(profile, player, g.children[sample_index(profile[g.infoset], rng)],
                         rng, out);
  }
  out.touched[g.infoset] = 1;
  for (std::size_t a = 0; a < g.children.size(); ++a) {
    const double v = external_walk(profile, player, g.children[a], rng, out);
    out.utility[g.infoset][a] += v;
  }
  return 0.0;
}

void Environment::outcome(const BehavioralProfile& profile, std::mt19937_64& rng,
                          BuiltinBundle& out) const {
  const GameTree& t = *tree_;
  const int n = t.num_players;
  struct Edge {
    int node;
    int action;
    double prob;  // probability under the profile (or chance)
  };
  std::vector<Edge> path;
  std::vector<double> sampling;
  double q = 1.0;
  int h = 0;
  while (!t.nodes[h].is_terminal()) {
    const GameNode& g = t.nodes[h];
    int a = 0;
    double p = 0.0;
    if (g.is_chance()) {
      a = sample_index(g.chance_probs, rng);
      p = g.chance_probs[a];
      q *= p;
    } else {
      const auto pi = profile[g.infoset];
      const double floor = kOutcomeExploration / static_cast<double>(pi.size());
      sampling.resize(pi.size());
      for (std::size_t k = 0; k < pi.size(); ++k) {
        sampling[k] = (1.0 - kOutcomeExploration) * pi[k] + floor;
      }
      a = sample_index(sampling, rng);
      p = pi[a];
      q *= sampling[a];
      out.touched[g.infoset] = 1;
    }
    path.push_back({h, a, p});
    h = g.children[a];
  }
  const GameNode& z = t.nodes[h];

  std::vector<double> others_reach(n, 1.0);
  std::vector<int> last_own(n + 1, -1);
  for (int k = 0; k < static_cast<int>(path.size()); ++k) {
    const GameNode& g = t.nodes[path[k].node];
    const int actor = g.is_chance() ? kChancePlayer : g.player;
    for (int i = 1; i <= n; ++i) {
      if (actor != i) others_reach[i - 1] *= path[k].prob;
    }
    if (actor != kChancePlayer) last_own[actor] = k;
  }
  // Only the deepest decision of each player reaches z without passing
  // another of its own decisions.
  for (int i = 1; i <= n; ++i) {
    const int k = last_own[i];
    if (k < 0) continue;
    const GameNode& g = t.nodes[path[k].node];
    out.utility[g.infoset][path[k].action] += z.payoffs[i - 1] * others_reach[i - 1] / q;
  }
}

void Environment::run_phase(Phase phase, const std::vector<int>& infosets) {
  const auto& steps = graph_->steps(phase);
  if (steps.empty()) return;
  for (int s : infosets) {
    for (const Step& step : steps) run_step(step, s);
  }
}

void Environment::run_step(const Step& step, int infoset) {
  const Infoset& info = tree_->infosets[infoset];
  try {
    if (step.op.code == OpCode::kAggregate) {
      aggregate_into(infoset, step.op, scratch_);
    } else {
      OpContext ctx;
      ctx.infoset = infoset;
      ctx.action_count = info.action_count;
      ctx.utility = builtins_.utility[infoset];
      ctx.reach_prob = builtins_.reach_prob[infoset];
      std::array<const Variable*, 4> args{};
      if (step.op.operands.size() > args.size()) {
        throw GraphError(GraphError::Kind::kShapeMismatch, "too many operands");
      }
      if (literal_scratch_.size() < args.size()) literal_scratch_.resize(args.size());
      for (std::size_t k = 0; k < step.op.operands.size(); ++k) {
        if (const auto* ref = std::get_if<NodeRef>(&step.op.operands[k])) {
          args[k] = &storage_[slot(ref->id, infoset)];
        } else {
          literal_scratch_[k].assign(1, std::get<double>(step.op.operands[k]));
          args[k] = &literal_scratch_[k];
        }
      }
      evaluate_op(step.op, std::span<const Variable* const>(args.data(), step.op.operands.size()),
                  ctx, scratch_);
    }
  } catch (const GraphError& e) {
    throw GraphError(e.kind(), fmt::format("{} [{} %{} at infoset '{}']", e.what(),
                                           to_string(step.phase), step.target.id, info.name));
  }
  Variable& target = storage_[slot(step.target.id, infoset)];
  target.assign(scratch_.begin(), scratch_.end());
  if (trace_) trace_(step.phase, infoset, step.target.id);
}

Variable Environment::evaluate_aggregate(int infoset, const Op& op) const {
  Variable out;
  aggregate_into(infoset, op, out);
  return out;
}

void Environment::aggregate_into(int infoset, const Op& op, Variable& out) const {
  if (!graph_) throw Error("aggregate evaluated before set_graph");
  const auto* source = op.operands.empty() ? nullptr : std::get_if<NodeRef>(&op.operands[0]);
  if (!source || source->id < 0 || source->id >= num_graph_nodes_) {
    throw GraphError(GraphError::Kind::kUnknownInput, "aggregate needs a source node");
  }
  const Infoset& info = tree_->infosets[infoset];

  if (op.object == AggregateObject::kParent) {
    const auto seq = parent(infoset, op.scope);
    if (!seq) {
      out.assign(1, op.value);
      return;
    }
    const Variable& v = storage_[slot(source->id, seq->infoset)];
    if (static_cast<int>(v.size()) == tree_->infosets[seq->infoset].action_count) {
      out.assign(1, v[seq->action]);
    } else if (v.size() == 1) {
      out.assign(1, v[0]);
    } else {
      throw GraphError(GraphError::Kind::kShapeMismatch,
                       fmt::format("parent variable %{} has length {}, expected 1 or {}",
                                   source->id, v.size(),
                                   tree_->infosets[seq->infoset].action_count));
    }
    return;
  }

  out.resize(info.action_count);
  for (int a = 0; a < info.action_count; ++a) {
    gather_.clear();
    for (int child : children(infoset, a, op.scope)) {
      if (restrict_children_ && !builtins_.touched[child]) continue;
      const Variable& v = storage_[slot(source->id, child)];
      gather_.insert(gather_.end(), v.begin(), v.end());
    }
    if (gather_.empty()) {
      out[a] = op.value;
      continue;
    }
    double r = 0.0;
    switch (op.aggregator) {
      case Aggregator::kSum:
      case Aggregator::kMean:
        for (double x : gather_) r += x;
        if (op.aggregator == Aggregator::kMean) r /= static_cast<double>(gather_.size());
        break;
      case Aggregator::kMax:
        r = *std::max_element(gather_.begin(), gather_.end());
        break;
      case Aggregator::kMin:
        r = *std::min_element(gather_.begin(), gather_.end());
        break;
    }
    out[a] = r;
  }
}

}  // namespace efg
