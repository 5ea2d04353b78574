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

#ifndef EFGRAPH_EVALUATION_HPP
#define EFGRAPH_EVALUATION_HPP

#include <string>
#include <vector>

#include "efgraph/environment.hpp"
#include "efgraph/game_tree.hpp"

namespace efg {

// Exploitability is the SUM over players of best-response improvements, not
// the average.
struct EvalReport {
  std::vector<double> per_player_improvement;
  double exploitability = 0.0;
  std::vector<double> expected_utilities;
};

std::vector<double> expected_utility(const GameTree& tree, const BehavioralProfile& profile);

struct BestResponse {
  double value = 0.0;
  // Copy of the input profile with `player`'s rows replaced by the pure
  // best response. Ties go to the lowest action index.
  BehavioralProfile profile;
};

BestResponse best_response(const GameTree& tree, const BehavioralProfile& profile, int player);

EvalReport exploitability(const GameTree& tree, const BehavioralProfile& profile);
EvalReport exploitability(const Environment& env, NodeRef strategy, StrategyMode mode);

struct StrategyTable {
  // One label per action index; indices whose label differs between
  // infosets join the distinct labels with '/'.
  std::vector<std::string> action_columns;
  struct Row {
    std::string infoset;
    std::vector<double> probs;
  };
  std::vector<Row> rows;

  // Header `infoset,<action_0>,...`, 17 significant digits, missing action
  // indices left empty.
  std::string to_csv() const;
};

// Rows for the infosets of `player` (0 = all players), sorted by name.
StrategyTable extract_strategy_table(const GameTree& tree, const BehavioralProfile& profile,
                                     int player);
StrategyTable extract_strategy_table(const Environment& env, NodeRef strategy, StrategyMode mode,
                                     int player);

// Inverse of StrategyTable::to_csv: fills a profile for every infoset named
// in `csv`; infosets without a row stay uniform.
BehavioralProfile profile_from_csv(const GameTree& tree, const std::string& csv);

}  // namespace efg

#endif  // EFGRAPH_EVALUATION_HPP
