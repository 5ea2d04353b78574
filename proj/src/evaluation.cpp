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

#include "efgraph/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "efgraph/error.hpp"

namespace efg {

std::vector<double> expected_utility(const GameTree& tree, const BehavioralProfile& profile) {
  std::vector<double> reach(tree.nodes.size(), 0.0);
  std::vector<double> out(tree.num_players, 0.0);
  reach[0] = 1.0;
  for (const GameNode& h : tree.nodes) {
    if (h.is_terminal()) {
      for (int i = 0; i < tree.num_players; ++i) out[i] += reach[h.id] * h.payoffs[i];
      continue;
    }
    for (std::size_t a = 0; a < h.children.size(); ++a) {
      const double p = h.is_chance() ? h.chance_probs[a] : profile[h.infoset][a];
      reach[h.children[a]] = reach[h.id] * p;
    }
  }
  return out;
}

BestResponse best_response(const GameTree& tree, const BehavioralProfile& profile, int player) {
  const std::size_t num_nodes = tree.nodes.size();
  // Reach of everyone except `player`.
  std::vector<double> others(num_nodes, 0.0);
  others[0] = 1.0;
  for (const GameNode& h : tree.nodes) {
    for (std::size_t a = 0; a < h.children.size(); ++a) {
      double p = 1.0;
      if (h.is_chance()) p = h.chance_probs[a];
      else if (h.player != player) p = profile[h.infoset][a];
      others[h.children[a]] = others[h.id] * p;
    }
  }

  std::vector<int> choice(tree.infosets.size(), kNone);
  std::vector<double> value(num_nodes, 0.0);
  std::vector<char> known(num_nodes, 0);
  // Expected payoff below a node once the player's deeper choices are fixed.
  std::function<double(int)> node_value = [&](int id) -> double {
    if (known[id]) return value[id];
    const GameNode& h = tree.nodes[id];
    double v = 0.0;
    if (h.is_terminal()) {
      v = h.payoffs[player - 1];
    } else if (h.is_player() && h.player == player) {
      v = node_value(h.children[choice[h.infoset]]);
    } else {
      for (std::size_t a = 0; a < h.children.size(); ++a) {
        const double p = h.is_chance() ? h.chance_probs[a] : profile[h.infoset][a];
        if (p != 0.0) v += p * node_value(h.children[a]);
      }
    }
    known[id] = 1;
    value[id] = v;
    return v;
  };

  BestResponse out{0.0, profile};
  const auto order = infoset_topological_order(tree);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Infoset& s = tree.infosets[*it];
    if (s.player != player) continue;
    int best = 0;
    double best_value = 0.0;
    for (int a = 0; a < s.action_count; ++a) {
      double q = 0.0;
      for (int h : s.members) {
        if (others[h] != 0.0) q += others[h] * node_value(tree.nodes[h].children[a]);
      }
      if (a == 0 || q > best_value + 1e-12 * (1.0 + std::abs(best_value))) {
        best = a;
        best_value = q;
      }
    }
    choice[s.id] = best;
    auto& row = out.profile.at(s.id);
    std::fill(row.begin(), row.end(), 0.0);
    row[best] = 1.0;
  }
  out.value = node_value(0);
  return out;
}

EvalReport exploitability(const GameTree& tree, const BehavioralProfile& profile) {
  EvalReport report;
  report.expected_utilities = expected_utility(tree, profile);
  for (int i = 1; i <= tree.num_players; ++i) {
    const double gain = best_response(tree, profile, i).value - report.expected_utilities[i - 1];
    report.per_player_improvement.push_back(gain);
    report.exploitability += gain;
  }
  return report;
}

EvalReport exploitability(const Environment& env, NodeRef strategy, StrategyMode mode) {
  return exploitability(env.tree(), env.current_profile(strategy, mode));
}

StrategyTable extract_strategy_table(const GameTree& tree, const BehavioralProfile& profile,
                                     int player) {
  StrategyTable table;
  std::vector<int> selected;
  for (const Infoset& s : tree.infosets) {
    if (player == 0 || s.player == player) selected.push_back(s.id);
  }
  std::stable_sort(selected.begin(), selected.end(), [&](int a, int b) {
    return tree.infosets[a].name < tree.infosets[b].name;
  });

  std::vector<std::vector<std::string>> labels;
  for (int id : selected) {
    const Infoset& s = tree.infosets[id];
    if (static_cast<int>(labels.size()) < s.action_count) labels.resize(s.action_count);
    for (int a = 0; a < s.action_count; ++a) {
      auto& seen = labels[a];
      if (std::find(seen.begin(), seen.end(), s.actions[a]) == seen.end()) {
        seen.push_back(s.actions[a]);
      }
    }
    const auto row = profile[id];
    table.rows.push_back({s.name, std::vector<double>(row.begin(), row.end())});
  }
  for (const auto& seen : labels) {
    std::string column;
    for (std::size_t k = 0; k < seen.size(); ++k) column += (k ? "/" : "") + seen[k];
    table.action_columns.push_back(column);
  }
  return table;
}

StrategyTable extract_strategy_table(const Environment& env, NodeRef strategy, StrategyMode mode,
                                     int player) {
  return extract_strategy_table(env.tree(), env.current_profile(strategy, mode), player);
}

std::string StrategyTable::to_csv() const {
  std::string out = "infoset";
  for (const auto& c : action_columns) out += "," + c;
  out += '\n';
  for (const Row& row : rows) {
    out += row.infoset;
    for (std::size_t a = 0; a < action_columns.size(); ++a) {
      out += ',';
      if (a < row.probs.size()) out += fmt::format("{:.17g}", row.probs[a]);
    }
    out += '\n';
  }
  return out;
}

BehavioralProfile profile_from_csv(const GameTree& tree, const std::string& csv) {
  std::unordered_map<std::string, int> by_name;
  for (const Infoset& s : tree.infosets) by_name.emplace(s.name, s.id);
  BehavioralProfile profile = BehavioralProfile::uniform(tree);

  std::istringstream in(csv);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("infoset", 0) == 0)) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    const auto it = by_name.find(cells[0]);
    if (it == by_name.end()) {
      throw Error(fmt::format("strategy line {}: unknown infoset '{}'", line_no, cells[0]));
    }
    const Infoset& s = tree.infosets[it->second];
    auto& row = profile.at(s.id);
    for (int a = 0; a < s.action_count; ++a) {
      const std::string& cell = a + 1 < static_cast<int>(cells.size()) ? cells[a + 1] : "";
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw Error(fmt::format("strategy line {}: bad probability '{}'", line_no, cell));
      }
      row[a] = v;
    }
  }
  if (const int bad = profile.first_invalid(tree, 1e-6); bad != kNone) {
    throw Error(fmt::format("strategy for infoset '{}' is not a probability vector",
                            tree.infosets[bad].name));
  }
  return profile;
}

}  // namespace efg
