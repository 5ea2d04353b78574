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

#include "efgraph/catalog.hpp"

#include <array>
#include <string_view>

#include <fmt/format.h>

#include "efgraph/error.hpp"
#include "efgraph/game_format.hpp"

namespace efg {

namespace {

int kuhn_rank(char card) { return card == 'J' ? 0 : card == 'Q' ? 1 : 2; }

// Expands the Kuhn betting subtree below `parent` via `action`.
void kuhn_betting(GameTreeBuilder& b, int parent, int action, char c1, char c2,
                  const std::string& history) {
  const double showdown = kuhn_rank(c1) > kuhn_rank(c2) ? 1.0 : -1.0;
  auto leaf = [&](double p1) { b.add_terminal(parent, action, {p1, -p1}); };
  if (history == "kk") return leaf(showdown);
  if (history == "bf") return leaf(1.0);
  if (history == "kbf") return leaf(-1.0);
  if (history == "bc" || history == "kbc") return leaf(2.0 * showdown);

  const int player = history.size() % 2 == 0 ? 1 : 2;
  const char card = player == 1 ? c1 : c2;
  const bool facing_bet = !history.empty() && history.back() == 'b';
  std::vector<std::string> actions =
      facing_bet ? std::vector<std::string>{"f", "c"} : std::vector<std::string>{"k", "b"};
  const std::string key = history.empty() ? fmt::format("P{}:{}", player, card)
                                          : fmt::format("P{}:{}:{}", player, card, history);
  const int node = b.add_player(parent, action, player, actions, key);
  for (int a = 0; a < 2; ++a) kuhn_betting(b, node, a, c1, c2, history + actions[a]);
}

struct LeducBuilder {
  static constexpr std::array<std::string_view, 6> kDeck = {"J1", "J2", "Q1", "Q2", "K1", "K2"};
  static constexpr int kMaxRaises = 2;
  static constexpr std::array<double, 2> kRaiseSize = {2.0, 4.0};

  GameTreeBuilder builder{2, "leduc"};

  static int rank(int card) { return card / 2; }

  struct State {
    int card1 = 0;
    int card2 = 0;
    int public_card = -1;
    int round = 0;
    int to_act = 1;
    int raises = 0;
    std::array<double, 2> contrib = {1.0, 1.0};
    std::string history;  // round-one actions, then '/' and round-two actions
    std::string round_history;
  };

  void deal(int parent, int action, const State& state) {
    std::vector<std::string> events;
    std::vector<int> cards;
    for (int c = 0; c < 6; ++c) {
      if (c == state.card1 || c == state.card2) continue;
      events.emplace_back(kDeck[c]);
      cards.push_back(c);
    }
    const double p = 1.0 / static_cast<double>(cards.size());
    const int node = builder.add_chance(parent, action, events,
                                        std::vector<double>(cards.size(), p));
    for (std::size_t i = 0; i < cards.size(); ++i) {
      State next = state;
      const int ai = static_cast<int>(i);
      if (state.card1 < 0) {
        next.card1 = cards[i];
        deal(node, ai, next);
      } else if (state.card2 < 0) {
        next.card2 = cards[i];
        bet(node, ai, next);
      } else {
        next.public_card = cards[i];
        bet(node, ai, next);
      }
    }
  }

  void showdown(int parent, int action, const State& s) {
    const int r1 = rank(s.card1);
    const int r2 = rank(s.card2);
    const int pub = rank(s.public_card);
    int winner = 0;
    if (r1 == pub && r2 != pub) {
      winner = 1;
    } else if (r2 == pub && r1 != pub) {
      winner = 2;
    } else if (r1 != r2) {
      winner = r1 > r2 ? 1 : 2;
    }
    const double pot = s.contrib[0];
    const double p1 = winner == 0 ? 0.0 : winner == 1 ? pot : -pot;
    builder.add_terminal(parent, action, {p1, -p1});
  }

  void close_round(int parent, int action, State s) {
    if (s.round == 1) return showdown(parent, action, s);
    s.round = 1;
    s.to_act = 1;
    s.raises = 0;
    s.history += '/';
    s.round_history.clear();
    deal(parent, action, s);
  }

  void bet(int parent, int action, const State& s) {
    const int me = s.to_act - 1;
    const int other = 1 - me;
    const bool facing = s.contrib[other] > s.contrib[me];
    std::vector<std::string> actions;
    if (facing) actions.emplace_back("f");
    actions.emplace_back("c");
    if (s.raises < kMaxRaises) actions.emplace_back("r");

    const int own_card = me == 0 ? s.card1 : s.card2;
    const std::string key =
        fmt::format("P{}:{}:{}:{}", s.to_act, kDeck[own_card],
                    s.public_card < 0 ? std::string_view("-") : kDeck[s.public_card], s.history);
    const int node = builder.add_player(parent, action, s.to_act, actions, key);

    for (std::size_t a = 0; a < actions.size(); ++a) {
      const int ai = static_cast<int>(a);
      State next = s;
      next.history += actions[a];
      next.round_history += actions[a];
      if (actions[a] == "f") {
        const double lost = s.contrib[me];
        const double p1 = me == 0 ? -lost : lost;
        builder.add_terminal(node, ai, {p1, -p1});
      } else if (actions[a] == "c") {
        next.contrib[me] = s.contrib[other];
        if (facing || !s.round_history.empty()) {
          close_round(node, ai, next);
        } else {
          next.to_act = 3 - s.to_act;
          bet(node, ai, next);
        }
      } else {
        next.contrib[me] = s.contrib[other] + kRaiseSize[s.round];
        next.raises = s.raises + 1;
        next.to_act = 3 - s.to_act;
        bet(node, ai, next);
      }
    }
  }
};

}  // namespace

GameTree generate_kuhn() {
  GameTreeBuilder b(2, "kuhn");
  const std::vector<std::string> deals = {"JQ", "JK", "QJ", "QK", "KJ", "KQ"};
  const int root = b.add_chance(kNone, kNone, deals, std::vector<double>(6, 1.0 / 6.0));
  for (int d = 0; d < 6; ++d) kuhn_betting(b, root, d, deals[d][0], deals[d][1], "");
  return std::move(b).build();
}

GameTree generate_leduc() {
  LeducBuilder lb;
  LeducBuilder::State start;
  start.card1 = -1;
  start.card2 = -1;
  lb.deal(kNone, kNone, start);
  return std::move(lb.builder).build();
}

GameTree generate_matrix_game(const std::vector<PayoffMatrix>& payoffs,
                              std::vector<std::string> row_labels,
                              std::vector<std::string> col_labels, std::string name) {
  if (payoffs.size() != 2) {
    throw GameError(GameError::Kind::kInvalidArgument,
                    fmt::format("matrix games take two payoff matrices, got {}", payoffs.size()));
  }
  const std::size_t rows = payoffs[0].size();
  const std::size_t cols = rows == 0 ? 0 : payoffs[0][0].size();
  if (rows == 0 || cols == 0) {
    throw GameError(GameError::Kind::kInvalidArgument, "payoff matrix is empty");
  }
  for (const PayoffMatrix& m : payoffs) {
    if (m.size() != rows) throw GameError(GameError::Kind::kInvalidArgument, "row count mismatch");
    for (const auto& row : m) {
      if (row.size() != cols) {
        throw GameError(GameError::Kind::kInvalidArgument, "column count mismatch");
      }
    }
  }
  if (row_labels.empty()) {
    for (std::size_t r = 0; r < rows; ++r) row_labels.push_back(fmt::format("r{}", r));
  }
  if (col_labels.empty()) {
    for (std::size_t c = 0; c < cols; ++c) col_labels.push_back(fmt::format("c{}", c));
  }
  if (row_labels.size() != rows || col_labels.size() != cols) {
    throw GameError(GameError::Kind::kInvalidArgument, "label count does not match matrix shape");
  }

  GameTreeBuilder b(2, std::move(name));
  const int root = b.add_player(kNone, kNone, 1, row_labels, "P1");
  for (std::size_t r = 0; r < rows; ++r) {
    const int node = b.add_player(root, static_cast<int>(r), 2, col_labels, "P2");
    for (std::size_t c = 0; c < cols; ++c) {
      b.add_terminal(node, static_cast<int>(c), {payoffs[0][r][c], payoffs[1][r][c]});
    }
  }
  return std::move(b).build();
}

GameTree generate_rock_paper_scissors() {
  const PayoffMatrix p1 = {{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}};
  PayoffMatrix p2 = p1;
  for (auto& row : p2) {
    for (double& v : row) v = -v;
  }
  const std::vector<std::string> labels = {"R", "P", "S"};
  return generate_matrix_game({p1, p2}, labels, labels, "rps");
}

GameTree load_game(const std::string& spec) {
  if (spec == "kuhn") return generate_kuhn();
  if (spec == "leduc") return generate_leduc();
  if (spec == "rps") return generate_rock_paper_scissors();
  if (spec.rfind("file:", 0) == 0) return load_game_file(spec.substr(5));
  throw Error(fmt::format("unknown game '{}' (expected kuhn, leduc, rps or file:<path>)", spec));
}

}  // namespace efg
