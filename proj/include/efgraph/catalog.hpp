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

#ifndef EFGRAPH_CATALOG_HPP
#define EFGRAPH_CATALOG_HPP

#include <string>
#include <vector>

#include "efgraph/game_tree.hpp"

namespace efg {

// Two-player Kuhn poker. A single chance node deals one of the six ordered
// pairs JQ..KQ with probability 1/6. Actions: k (check), b (bet), f (fold),
// c (call). Ante 1, bet 1.
GameTree generate_kuhn();

// Two-player Leduc hold'em without suit isomorphism:
//   - deck of six cards, suits 1 and 2 of J, Q, K (labels J1 .. K2);
//   - ante 1, one private card each, then a betting round with raise size 2;
//   - one public card, then a betting round with raise size 4;
//   - at most two raises per round; player 1 opens both rounds;
//   - actions f (fold, only when facing a raise), c (check/call), r (raise);
//   - a pair with the public card wins, otherwise the higher rank, ties split.
GameTree generate_leduc();

using PayoffMatrix = std::vector<std::vector<double>>;

// One-shot simultaneous-move game. Player 1 picks a row at a single infoset,
// player 2 picks a column at a single infoset that contains every row.
// Throws GameError(kInvalidArgument) when the matrices disagree in shape.
GameTree generate_matrix_game(const std::vector<PayoffMatrix>& payoffs,
                              std::vector<std::string> row_labels = {},
                              std::vector<std::string> col_labels = {},
                              std::string name = "matrix");

GameTree generate_rock_paper_scissors();

// Resolves "kuhn", "leduc", "rps" or "file:<path>".
GameTree load_game(const std::string& spec);

}  // namespace efg

#endif  // EFGRAPH_CATALOG_HPP
