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

#ifndef EFGRAPH_GAME_FORMAT_HPP
#define EFGRAPH_GAME_FORMAT_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "efgraph/game_tree.hpp"

namespace efg {

// Line-oriented `.game` text format:
//
//   num_players 2
//   node / chance actions JQ=0.16666666666666666 ...
//   node /JQ player 1 actions k b
//   node /JQ/k/b/f leaf payoffs 1=-1 2=1
//   infoset P1:J nodes /JQ /JK
//
// A node named `<parent>/<token>` hangs below `<parent>` via the action whose
// label is `<token>` (a `X:` prefix on the token, as in `/C:JQ/P1:k`, is also
// accepted). Records must list parents before children.
struct GameFileDocument {
  struct NodeRecord {
    enum class Kind { kChance, kPlayer, kLeaf };

    std::string name;
    Kind kind = Kind::kLeaf;
    int player = 0;
    std::vector<std::string> actions;
    // Chance only; raw values, normalization is checked when building.
    std::vector<double> probs;
    // Leaf only; (player index, utility) in file order.
    std::vector<std::pair<int, double>> payoffs;
    int line = 0;
  };

  struct InfosetRecord {
    std::string name;
    std::vector<std::string> nodes;
    int line = 0;
  };

  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<NodeRecord> nodes;
  std::vector<InfosetRecord> infosets;

  int num_players() const;
  // Empty when absent.
  std::string parameter(std::string_view key) const;
};

// Throws ParseError with the offending line for malformed input.
GameFileDocument parse_game_file(std::string_view text);

// Links records into a validated tree. Throws GameError.
GameTree build_tree(const GameFileDocument& doc);

// Emits a document that parses back into an isomorphic tree. Probabilities
// and payoffs are printed with 17 significant digits.
std::string serialize_game(const GameTree& tree);

GameTree load_game_file(const std::string& path);

}  // namespace efg

#endif  // EFGRAPH_GAME_FORMAT_HPP
